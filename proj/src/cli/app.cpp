#include "lauewalk/cli/app.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "lauewalk/lauewalk.hpp"

namespace lauewalk::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct CommandInfo {
  Command command;
  const char* name;
  const char* description;
};

constexpr CommandInfo kCommands[] = {
    {Command::Splitter, "splitter", "Derived node coefficients for one angle triple"},
    {Command::Borrmann, "borrmann", "Exit-face intensity profile of a single blade"},
    {Command::Pendellosung, "pendellosung", "Post-selected exit intensity vs theta (slit scan)"},
    {Command::Integrated, "integrated", "Integrated transmitted/reflected intensities"},
    {Command::ThicknessScan, "thickness-scan", "Integrated intensities vs plane count"},
    {Command::Interferometer, "interferometer", "Multi-blade fringe scan (or beam profiles)"},
    {Command::ContrastSweep, "contrast-sweep", "Three-blade contrast vs planes per blade"},
    {Command::DDRef, "ddref", "Closed-form Laue transmission/reflection reference"},
    {Command::Crosscheck, "crosscheck", "Lattice blade vs closed-form reference report"},
};

// Per-command default tweaks, applied before CLI11 binds the options so the
// help text shows the effective defaults.
void apply_command_defaults(Command cmd, RunConfig& cfg) {
  switch (cmd) {
    case Command::Pendellosung:
      cfg.planes = 50;
      break;
    case Command::Interferometer:
      cfg.planes = 100;
      break;
    case Command::ContrastSweep:
      cfg.n_min = 50;
      cfg.n_max = 300;
      break;
    default:
      break;
  }
}

std::string fmt(double v) { return io::format_double(v); }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Line-oriented key=value config, '#' comments, no nesting. Returned as
// option tokens ("--key", "value", ...) ready to splice into the argument
// list ahead of the user's flags, so explicit flags win.
std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read config file: " + path + "\n");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(file, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line is not key=value: " + line + "\n");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line has an empty key: " + line + "\n");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

// Splice config-file tokens right after the subcommand name.
std::vector<std::string> with_config_applied(const std::vector<std::string>& args) {
  std::string path;
  std::size_t subcommand_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else if (subcommand_pos == args.size() && !a.empty() && a.front() != '-') {
      subcommand_pos = i;
    }
  }
  if (path.empty()) return args;
  const std::vector<std::string> tokens = config_file_tokens(path);
  std::vector<std::string> merged;
  merged.reserve(args.size() + tokens.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    merged.push_back(args[i]);
    if (i == subcommand_pos) merged.insert(merged.end(), tokens.begin(), tokens.end());
  }
  return merged;
}

void add_angle_meta(io::ResultEnvelope& env, const RunConfig& cfg) {
  const SplitterParams<double> p(cfg.xi, cfg.theta, cfg.zeta);
  env.add_meta("theta", fmt(p.theta));
  if (p.theta_reduced) env.add_meta("theta_input", fmt(cfg.theta));
  env.add_meta("xi", fmt(cfg.xi));
  env.add_meta("zeta", fmt(cfg.zeta));
}

void add_scaling_meta(io::ResultEnvelope& env, const RunConfig& cfg) {
  if (!std::isnan(cfg.microns_per_plane)) {
    env.add_meta("microns_per_plane", fmt(cfg.microns_per_plane));
  }
}

std::vector<double> linspace(double lo, double hi, std::int64_t points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::int64_t i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<double> half_open_grid(double lo, double hi, std::int64_t points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (std::int64_t i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points);
  }
  return grid;
}

io::ResultEnvelope run_splitter(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "splitter");
  add_angle_meta(env, cfg);
  const SplitterParams<double> p(cfg.xi, cfg.theta, cfg.zeta);
  const auto k = derive_coefficients(p);
  env.add_meta("unitarity_residual", fmt(k.unitarity_residual()));
  env.table.columns = {"coefficient", "re", "im", "abs"};
  auto push = [&](const char* name, std::complex<double> v) {
    env.table.rows.push_back({std::string(name), v.real(), v.imag(), std::abs(v)});
  };
  push("t_a", k.t_a);
  push("t_b", k.t_b);
  push("r_a", k.r_a);
  push("r_b", k.r_b);
  return env;
}

io::ResultEnvelope run_borrmann(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "borrmann");
  env.add_meta("planes", std::to_string(cfg.planes));
  add_angle_meta(env, cfg);
  add_scaling_meta(env, cfg);
  const BladeSpec<double> blade(cfg.planes, SplitterParams<double>(cfg.xi, cfg.theta, cfg.zeta));
  const auto profile = borrmann_profile(blade, BeamState<double>::single_up(0));
  env.table.columns = {"j", "intensity_T", "intensity_R"};
  for (const auto& row : profile.rows) {
    env.table.rows.push_back(
        {static_cast<std::int64_t>(row.node), row.intensity_T, row.intensity_R});
  }
  return env;
}

io::ResultEnvelope run_pendellosung(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "pendellosung");
  env.add_meta("planes", std::to_string(cfg.planes));
  env.add_meta("node", fmt(cfg.node));
  env.add_meta("theta_points", std::to_string(cfg.theta_points));
  env.add_meta("xi", fmt(cfg.xi));
  env.add_meta("zeta", fmt(cfg.zeta));
  add_scaling_meta(env, cfg);
  const std::vector<double> grid = linspace(0.0, kPi, cfg.theta_points);
  env.table.columns = {"theta", "intensity_T", "intensity_R"};
  if (std::nearbyint(cfg.node) != cfg.node) {
    // fractional slit positions select nothing; the scan stays total
    for (const double theta : grid) env.table.rows.push_back({theta, 0.0, 0.0});
    return env;
  }
  const auto series = pendellosung_scan<double>(cfg.planes, static_cast<Index>(cfg.node), grid,
                                                cfg.xi, cfg.zeta);
  for (const auto& row : series.rows) {
    env.table.rows.push_back({row.parameter, row.value_T, row.value_R});
  }
  return env;
}

io::ResultEnvelope run_integrated(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "integrated");
  env.add_meta("planes", std::to_string(cfg.planes));
  add_angle_meta(env, cfg);
  add_scaling_meta(env, cfg);
  const BladeSpec<double> blade(cfg.planes, SplitterParams<double>(cfg.xi, cfg.theta, cfg.zeta));
  const auto sums = integrated_intensities(blade, BeamState<double>::single_up(0));
  env.table.columns = {"N", "I_T", "I_R"};
  env.table.rows.push_back({cfg.planes, sums.transmitted, sums.reflected});
  return env;
}

io::ResultEnvelope run_thickness_scan(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "thickness-scan");
  env.add_meta("n_min", std::to_string(cfg.n_min));
  env.add_meta("n_max", std::to_string(cfg.n_max));
  add_angle_meta(env, cfg);
  add_scaling_meta(env, cfg);
  const auto series =
      thickness_scan(SplitterParams<double>(cfg.xi, cfg.theta, cfg.zeta), cfg.n_min, cfg.n_max);
  env.table.columns = {"N", "I_T", "I_R"};
  for (const auto& row : series.rows) {
    env.table.rows.push_back({static_cast<std::int64_t>(row.parameter), row.value_T, row.value_R});
  }
  return env;
}

InterferometerSpec<double> make_interferometer(const RunConfig& cfg) {
  const BladeSpec<double> blade(cfg.planes, SplitterParams<double>(cfg.xi, cfg.theta, cfg.zeta));
  return InterferometerSpec<double>::identical_blades(cfg.blades, blade);
}

io::ResultEnvelope run_interferometer(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "interferometer");
  env.add_meta("blades", std::to_string(cfg.blades));
  env.add_meta("planes", std::to_string(cfg.planes));
  add_angle_meta(env, cfg);
  const auto spec = make_interferometer(cfg);
  if (cfg.profiles) {
    env.add_meta("profiles", "true");
    const auto profiles = blade_output_profiles(spec, BeamState<double>::single_up(0));
    env.table.columns = {"beam", "j", "intensity"};
    for (const auto& [label, profile] : profiles) {
      for (const auto& row : profile.rows) {
        env.table.rows.push_back({label, static_cast<std::int64_t>(row.node),
                                  row.intensity_T + row.intensity_R});
      }
    }
    return env;
  }
  env.add_meta("chi_min", fmt(cfg.chi_min));
  env.add_meta("chi_max", fmt(cfg.chi_max));
  env.add_meta("chi_points", std::to_string(cfg.chi_points));
  const std::vector<double> grid = half_open_grid(cfg.chi_min, cfg.chi_max, cfg.chi_points);
  const auto series = fringe_scan(spec, std::span<const double>(grid), BeamState<double>::single_up(0));
  env.table.columns = {"chi", "I_O", "I_H", "I_discarded"};
  for (const auto& row : series.rows) {
    env.table.rows.push_back({row.chi, row.intensity_O, row.intensity_H, row.intensity_discarded});
  }
  return env;
}

io::ResultEnvelope run_contrast_sweep(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "contrast-sweep");
  env.add_meta("n_min", std::to_string(cfg.n_min));
  env.add_meta("n_max", std::to_string(cfg.n_max));
  add_angle_meta(env, cfg);
  env.add_meta("chi_points", std::to_string(cfg.chi_points));
  if (cfg.n_min < 1 || cfg.n_min > cfg.n_max) {
    throw InvalidParameterError("contrast sweep needs 1 <= n_min <= n_max");
  }
  const SplitterParams<double> p(cfg.xi, cfg.theta, cfg.zeta);
  const std::vector<double> grid = full_cycle_grid<double>(cfg.chi_points);
  env.table.columns = {"N", "contrast_O", "contrast_H", "coeff_A", "coeff_B"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t n = cfg.n_min; n <= cfg.n_max; ++n) {
    const auto spec = InterferometerSpec<double>::identical_blades(3, BladeSpec<double>(n, p));
    const auto fringes =
        fringe_scan(spec, std::span<const double>(grid), BeamState<double>::single_up(0));
    double c_o = nan, c_h = nan, a = nan, b = nan;
    try {
      const auto c = contrast(fringes);
      c_o = c.contrast_O;
      c_h = c.contrast_H;
      a = c.coeff_A;
      b = c.coeff_B;
    } catch (const UndefinedContrastError&) {
      // NaN row marks the undefined point
    }
    env.table.rows.push_back({n, c_o, c_h, a, b});
  }
  return env;
}

io::ResultEnvelope run_ddref(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "ddref");
  env.add_meta("A", fmt(cfg.thickness));
  if (cfg.eta_points <= 1) {
    env.add_meta("eta", fmt(cfg.eta));
  } else {
    env.add_meta("eta_min", fmt(cfg.eta_min));
    env.add_meta("eta_max", fmt(cfg.eta_max));
    env.add_meta("eta_points", std::to_string(cfg.eta_points));
  }
  env.add_meta("z_over_D", fmt(cfg.z_over_d));
  env.add_meta("chi_nuc", fmt(cfg.chi_nuc));
  env.add_meta("vratio_phase", fmt(cfg.vratio_phase));
  const std::vector<double> etas = cfg.eta_points <= 1
                                       ? std::vector<double>{cfg.eta}
                                       : linspace(cfg.eta_min, cfg.eta_max, cfg.eta_points);
  env.table.columns = {"eta",   "t_re", "t_im", "r_re", "r_im",
                       "T",     "R",    "transmission_phase", "reflection_phase", "mixing_angle"};
  for (const double eta : etas) {
    DDParams<double> p;
    p.thickness = cfg.thickness;
    p.deviation = eta;
    p.exit_ratio = cfg.z_over_d;
    p.nuclear_phase = cfg.chi_nuc;
    p.vratio_phase = cfg.vratio_phase;
    const auto amp = dd_amplitudes(p);
    const auto angles = dd_blade_angles(p);
    env.table.rows.push_back({eta, amp.t.real(), amp.t.imag(), amp.r.real(), amp.r.imag(),
                              std::norm(amp.t), std::norm(amp.r), angles.transmission_phase,
                              angles.reflection_phase, angles.mixing_angle});
  }
  return env;
}

io::ResultEnvelope run_crosscheck(const RunConfig& cfg) {
  io::ResultEnvelope env;
  env.add_meta("command", "crosscheck");
  env.add_meta("planes", std::to_string(cfg.planes));
  add_angle_meta(env, cfg);
  env.add_meta("A", fmt(cfg.thickness));
  env.add_meta("eta", fmt(cfg.eta));
  env.add_meta("z_over_D", fmt(cfg.z_over_d));
  env.add_meta("chi_nuc", fmt(cfg.chi_nuc));
  env.add_meta("vratio_phase", fmt(cfg.vratio_phase));
  const BladeSpec<double> blade(cfg.planes, SplitterParams<double>(cfg.xi, cfg.theta, cfg.zeta));
  DDParams<double> p;
  p.thickness = cfg.thickness;
  p.deviation = cfg.eta;
  p.exit_ratio = cfg.z_over_d;
  p.nuclear_phase = cfg.chi_nuc;
  p.vratio_phase = cfg.vratio_phase;
  const auto report = qi_dd_crosscheck(blade, p);
  env.table.columns = {"metric", "value"};
  auto push = [&](const char* name, double value) {
    env.table.rows.push_back({std::string(name), value});
  };
  push("qi_transmitted", report.qi_transmitted);
  push("qi_reflected", report.qi_reflected);
  push("dd_transmitted", report.dd_transmitted);
  push("dd_reflected", report.dd_reflected);
  push("intensity_deviation", report.intensity_deviation);
  push("qi_fringe_residual", report.qi_fringe_residual);
  push("analytic_fringe_residual", report.analytic_fringe_residual);
  push("qi_contrast_H", report.qi_contrast_H);
  push("analytic_contrast_H", report.analytic_contrast_H);
  push("contrast_deviation", report.contrast_deviation);
  push("implied_plane_thickness_ratio", report.implied_plane_thickness_ratio);
  push("transmission_phase", report.angles.transmission_phase);
  push("reflection_phase", report.angles.reflection_phase);
  push("mixing_angle", report.angles.mixing_angle);
  return env;
}

io::ResultEnvelope dispatch(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Splitter:
      return run_splitter(cfg);
    case Command::Borrmann:
      return run_borrmann(cfg);
    case Command::Pendellosung:
      return run_pendellosung(cfg);
    case Command::Integrated:
      return run_integrated(cfg);
    case Command::ThicknessScan:
      return run_thickness_scan(cfg);
    case Command::Interferometer:
      return run_interferometer(cfg);
    case Command::ContrastSweep:
      return run_contrast_sweep(cfg);
    case Command::DDRef:
      return run_ddref(cfg);
    case Command::Crosscheck:
      return run_crosscheck(cfg);
  }
  throw InvalidParameterError("unknown command");
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& raw_args) {
  const std::vector<std::string> args = with_config_applied(raw_args);
  RunConfig cfg;
  // Peek the subcommand so per-command defaults land before options bind.
  for (const std::string& a : args) {
    if (a.empty() || a.front() == '-') continue;
    for (const CommandInfo& info : kCommands) {
      if (a == info.name) {
        apply_command_defaults(info.command, cfg);
        break;
      }
    }
    break;
  }

  CLI::App app{"quantum-walk model of Laue-case dynamical diffraction", "lauewalk"};
  app.require_subcommand(1);
  bool degrees = false;
  std::vector<std::pair<std::string, double*>> angle_options = {
      {"--theta", &cfg.theta},     {"--xi", &cfg.xi},
      {"--zeta", &cfg.zeta},       {"--chi-min", &cfg.chi_min},
      {"--chi-max", &cfg.chi_max}, {"--chi-nuc", &cfg.chi_nuc},
      {"--vratio-phase", &cfg.vratio_phase},
  };

  std::string config_path;  // handled before CLI11 sees the arguments
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "read key=value defaults from a file")->take_last();
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str()
        ->take_last();
    sub->add_option("--output", cfg.output, "write to this file instead of stdout")->take_last();
    sub->add_flag("--degrees", degrees, "interpret angle-valued flags as degrees");
  };
  auto add_angles = [&](CLI::App* sub) {
    sub->add_option("--theta", cfg.theta, "splitting angle theta [rad]")
        ->capture_default_str()
        ->take_last();
    sub->add_option("--xi", cfg.xi, "transmission phase xi [rad]")
        ->capture_default_str()
        ->take_last();
    sub->add_option("--zeta", cfg.zeta, "reflection phase zeta [rad]")
        ->capture_default_str()
        ->take_last();
  };
  auto add_planes = [&](CLI::App* sub) {
    sub->add_option("--planes", cfg.planes, "planes per blade")
        ->check(CLI::PositiveNumber)
        ->capture_default_str()
        ->take_last();
  };
  auto add_scaling = [&](CLI::App* sub) {
    sub->add_option("--microns-per-plane", cfg.microns_per_plane,
                    "optional thickness calibration, echoed in metadata only")
        ->take_last();
  };
  auto add_range = [&](CLI::App* sub) {
    sub->add_option("--n-min", cfg.n_min, "first plane count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str()
        ->take_last();
    sub->add_option("--n-max", cfg.n_max, "last plane count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str()
        ->take_last();
  };
  auto add_dd = [&](CLI::App* sub) {
    sub->add_option("--A", cfg.thickness, "dimensionless crystal thickness A")
        ->capture_default_str()
        ->take_last();
    sub->add_option("--eta", cfg.eta, "Bragg deviation eta")->capture_default_str()->take_last();
    sub->add_option("--z-over-d", cfg.z_over_d, "exit-surface ratio z/D")
        ->capture_default_str()
        ->take_last();
    sub->add_option("--chi-nuc", cfg.chi_nuc, "nuclear phase [rad]")
        ->capture_default_str()
        ->take_last();
    sub->add_option("--vratio-phase", cfg.vratio_phase, "potential-ratio phase [rad]")
        ->capture_default_str()
        ->take_last();
  };

  for (const CommandInfo& info : kCommands) {
    CLI::App* sub = app.add_subcommand(info.name, info.description);
    sub->callback([&cfg, cmd = info.command] { cfg.command = cmd; });
    add_common(sub);
    switch (info.command) {
      case Command::Splitter:
        add_angles(sub);
        break;
      case Command::Borrmann:
      case Command::Integrated:
        add_planes(sub);
        add_angles(sub);
        add_scaling(sub);
        break;
      case Command::Pendellosung:
        add_planes(sub);
        sub->add_option("--node", cfg.node, "exit-fan slit position")
            ->capture_default_str()
            ->take_last();
        sub->add_option("--theta-points", cfg.theta_points, "theta grid size over [0, pi]")
            ->check(CLI::PositiveNumber)
            ->capture_default_str()
            ->take_last();
        sub->add_option("--xi", cfg.xi, "transmission phase xi [rad]")
            ->capture_default_str()
            ->take_last();
        sub->add_option("--zeta", cfg.zeta, "reflection phase zeta [rad]")
            ->capture_default_str()
            ->take_last();
        add_scaling(sub);
        break;
      case Command::ThicknessScan:
        add_range(sub);
        add_angles(sub);
        add_scaling(sub);
        break;
      case Command::Interferometer:
        add_planes(sub);
        sub->add_option("--blades", cfg.blades, "number of blades")
            ->check(CLI::Range(std::int64_t(2), std::int64_t(16)))
            ->capture_default_str()
            ->take_last();
        add_angles(sub);
        sub->add_option("--chi-min", cfg.chi_min, "first phase value [rad]")
            ->capture_default_str()
            ->take_last();
        sub->add_option("--chi-max", cfg.chi_max, "end of phase grid [rad], exclusive")
            ->capture_default_str()
            ->take_last();
        sub->add_option("--chi-points", cfg.chi_points, "phase grid size")
            ->check(CLI::PositiveNumber)
            ->capture_default_str()
            ->take_last();
        sub->add_flag("--profiles", cfg.profiles, "emit the eight beam profiles instead of fringes");
        break;
      case Command::ContrastSweep:
        add_range(sub);
        add_angles(sub);
        sub->add_option("--chi-points", cfg.chi_points, "phase grid size per N")
            ->check(CLI::PositiveNumber)
            ->capture_default_str()
            ->take_last();
        break;
      case Command::DDRef:
        add_dd(sub);
        sub->add_option("--eta-min", cfg.eta_min, "first eta of the grid")
            ->capture_default_str()
            ->take_last();
        sub->add_option("--eta-max", cfg.eta_max, "last eta of the grid")
            ->capture_default_str()
            ->take_last();
        sub->add_option("--eta-points", cfg.eta_points, "eta grid size (1 = single --eta)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str()
            ->take_last();
        break;
      case Command::Crosscheck:
        add_planes(sub);
        add_angles(sub);
        add_dd(sub);
        break;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out_text;
    std::ostringstream err_text;
    const int code = app.exit(e, out_text, err_text);
    if (code == 0) throw HelpRequested(out_text.str());
    throw UsageError(err_text.str());
  }

  if (degrees) {
    for (CLI::App* sub : app.get_subcommands()) {
      for (auto& [name, field] : angle_options) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        if (opt != nullptr && opt->count() > 0) *field *= kPi / 180.0;
      }
    }
  }
  return cfg;
}

io::ResultEnvelope run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  io::ResultEnvelope env = dispatch(config);
  env.add_meta("format", config.format);
  env.add_meta("artifact_version", kVersion);
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;
  // kept last so reproducibility checks can strip it as a single line
  env.add_meta("duration_ms", fmt(elapsed.count()));
  return env;
}

void emit(const io::ResultEnvelope& envelope, const std::string& format, std::ostream& sink) {
  if (format == "csv") {
    io::write_csv(envelope, sink);
  } else if (format == "json") {
    io::write_json(envelope, sink);
  } else if (format == "svg") {
    io::write_svg(envelope, sink);
  } else {
    throw InvalidParameterError("unknown output format: " + format);
  }
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.text();
    return 0;
  } catch (const UsageError& usage) {
    err << usage.what();
    return 2;
  }
  try {
    const io::ResultEnvelope env = run(cfg);
    if (cfg.output.empty()) {
      emit(env, cfg.format, out);
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + cfg.output);
      emit(env, cfg.format, file);
      if (!file.good()) throw std::runtime_error("write failed: " + cfg.output);
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lauewalk::cli
