#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lauewalk::io {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// A run result: ordered metadata (enough to reproduce the run) plus the data
/// table. Metadata values are pre-formatted strings so every emitter prints
/// them identically.
struct ResultEnvelope {
  std::vector<std::pair<std::string, std::string>> metadata;
  Table table;

  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
};

/// Deterministic, locale-free, shortest round-trip formatting. Fixed
/// notation inside [1e-6, 1e6), scientific outside.
std::string format_double(double value);

std::string format_cell(const Cell& cell);

void write_csv(const ResultEnvelope& envelope, std::ostream& out);
void write_json(const ResultEnvelope& envelope, std::ostream& out);
void write_svg(const ResultEnvelope& envelope, std::ostream& out);

}  // namespace lauewalk::io
