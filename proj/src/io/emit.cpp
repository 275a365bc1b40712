#include "lauewalk/io/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "lauewalk/errors.hpp"

namespace lauewalk::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  const double mag = std::abs(value);
  const std::chars_format fmt =
      (mag >= 1e6 || mag < 1e-6) ? std::chars_format::scientific : std::chars_format::fixed;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, fmt);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell) {
  switch (cell.index()) {
    case 0:
      return std::to_string(std::get<std::int64_t>(cell));
    case 1:
      return format_double(std::get<double>(cell));
    default:
      return std::get<std::string>(cell);
  }
}

void write_csv(const ResultEnvelope& envelope, std::ostream& out) {
  for (const auto& [key, value] : envelope.metadata) {
    out << "# " << key << ": " << value << '\n';
  }
  const Table& t = envelope.table;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out << ',';
    out << t.columns[c];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_cell(row[c]);
    }
    out << '\n';
  }
}

void write_json(const ResultEnvelope& envelope, std::ostream& out) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta;
  for (const auto& [key, value] : envelope.metadata) meta[key] = value;
  meta["columns"] = envelope.table.columns;
  doc["meta"] = std::move(meta);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : envelope.table.rows) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const Cell& cell : row) {
      switch (cell.index()) {
        case 0:
          jrow.push_back(std::get<std::int64_t>(cell));
          break;
        case 1:
          jrow.push_back(std::get<double>(cell));
          break;
        default:
          jrow.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

namespace {

double cell_number(const Cell& cell) {
  switch (cell.index()) {
    case 0:
      return static_cast<double>(std::get<std::int64_t>(cell));
    case 1:
      return std::get<double>(cell);
    default:
      throw InvalidParameterError("svg output needs numeric columns");
  }
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

// Self-contained single-chart SVG: column 0 is the x axis, every further
// column one polyline. No external references.
void write_svg(const ResultEnvelope& envelope, std::ostream& out) {
  const Table& t = envelope.table;
  if (t.columns.size() < 2) throw InvalidParameterError("svg output needs at least two columns");
  if (t.rows.empty()) throw InvalidParameterError("svg output needs at least one row");

  const std::size_t ncols = t.columns.size();
  std::vector<std::vector<double>> data(ncols);
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < ncols; ++c) data[c].push_back(cell_number(row[c]));
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (double v : data[0]) {
    if (std::isnan(v)) continue;
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (std::size_t c = 1; c < ncols; ++c) {
    for (double v : data[c]) {
      if (std::isnan(v)) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;

  constexpr double width = 800, height = 500;
  constexpr double left = 70, right = 780, top = 20, bottom = 440;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  // axis extremes and label
  out << "<text x=\"" << left << "\" y=\"" << bottom + 18 << "\">" << format_double(xmin)
      << "</text>\n";
  out << "<text x=\"" << right - 60 << "\" y=\"" << bottom + 18 << "\">" << format_double(xmax)
      << "</text>\n";
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 36 << "\" text-anchor=\"middle\">"
      << t.columns[0] << "</text>\n";
  out << "<text x=\"4\" y=\"" << sy(ymin) << "\">" << format_double(ymin) << "</text>\n";
  out << "<text x=\"4\" y=\"" << sy(ymax) + 10 << "\">" << format_double(ymax) << "</text>\n";

  for (std::size_t c = 1; c < ncols; ++c) {
    const char* color = kPalette[(c - 1) % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < data[0].size(); ++i) {
      if (std::isnan(data[0][i]) || std::isnan(data[c][i])) continue;
      if (!first) out << ' ';
      out << format_double(sx(data[0][i])) << ',' << format_double(sy(data[c][i]));
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << right - 140 << "\" y=\"" << top + 16 * static_cast<double>(c)
        << "\" fill=\"" << color << "\">" << t.columns[c] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace lauewalk::io
