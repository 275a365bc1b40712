#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lauewalk/io/table.hpp"

namespace lauewalk::cli {

enum class Command {
  Splitter,
  Borrmann,
  Pendellosung,
  Integrated,
  ThicknessScan,
  Interferometer,
  ContrastSweep,
  DDRef,
  Crosscheck,
};

/// Fully resolved run parameters. Flags override config-file values override
/// the per-command defaults. All angles are radians once parsing is done.
struct RunConfig {
  Command command = Command::Borrmann;

  std::int64_t planes = 150;
  std::int64_t blades = 3;
  std::int64_t chi_points = 128;
  std::int64_t theta_points = 500;
  std::int64_t eta_points = 1;
  std::int64_t n_min = 1;
  std::int64_t n_max = 60;

  double theta = 0.7853981633974483;  // pi/4
  double xi = 0.0;
  double zeta = 0.0;
  double node = 25.0;
  double chi_min = 0.0;
  double chi_max = 6.283185307179586;  // 2 pi
  double thickness = 1.0471975511965976;  // A, pi/3
  double eta = 0.0;
  double eta_min = -5.0;
  double eta_max = 5.0;
  double z_over_d = 1.0;
  double chi_nuc = 0.0;
  double vratio_phase = 0.0;
  double microns_per_plane = std::numeric_limits<double>::quiet_NaN();  // meta-only scaling

  bool profiles = false;
  std::string format = "csv";
  std::string output;
};

/// Bad command line; exit code 2. what() carries the message plus usage text.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; text() is what should go to stdout, exit code 0.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const std::string& text() const { return text_; }
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

RunConfig parse_args(const std::vector<std::string>& args);

/// Execute the run and assemble the result envelope (metadata echo + table).
io::ResultEnvelope run(const RunConfig& config);

/// Serialize in the requested format ("csv", "json" or "svg").
void emit(const io::ResultEnvelope& envelope, const std::string& format, std::ostream& sink);

/// Whole-program entry: parse, run, emit. Returns the process exit code
/// (0 success, 1 runtime failure, 2 usage error).
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lauewalk::cli
