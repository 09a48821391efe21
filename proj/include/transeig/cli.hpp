#ifndef TRANSEIG_CLI_HPP
#define TRANSEIG_CLI_HPP

// Command-line front end: `scan`, `scan-complex` and `disk-oracle`.
//
// A flat `key = value` config file may supply any flag (key = flag name
// without dashes; `interval` and `window` take space-separated values).
// Flags given on the command line win over file values.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "transeig/disk_oracle.hpp"
#include "transeig/geometry.hpp"
#include "transeig/scan.hpp"

namespace transeig::cli {

enum class Command { scan, scan_complex, disk_oracle };

struct ScanConfig {
  Command command = Command::scan;
  std::string shape = "disk";
  double mu = 16.0;
  double a = 0.0, b = 0.0;
  int subdivisions = 100;
  int n = 32;
  int m = 64;
  double radius = 1e-3;
  std::optional<double> eta;  // empty: automatic
  double grading = 3.0;
  std::uint64_t seed = 0;
  std::optional<ComplexWindow> window;
  std::string output;
  unsigned workers = 1;
  // disk-oracle only
  double disk_radius = 0.5;
  int max_order = 8;
};

/// Bad command line; the message names the offending flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed fine, but violates a config invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open " + path);
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

inline void validate(const ScanConfig& cfg) {
  if (!(cfg.mu > 1.0)) throw ValidationError("--mu must exceed 1");
  if (cfg.command != Command::scan_complex) {
    if (!(cfg.a > 0.0)) throw ValidationError("--interval: lower end must be positive");
    if (!(cfg.a < cfg.b) && cfg.command == Command::scan) throw ValidationError("--interval: need A < B");
  }
  if (cfg.command == Command::disk_oracle) {
    if (!(cfg.disk_radius > 0.0)) throw ValidationError("--disk-radius must be positive");
    if (cfg.max_order < 0 || cfg.max_order > kMaxOracleOrder) throw ValidationError("--max-order must lie in 0..12");
    return;
  }
  if (cfg.subdivisions < 1) throw ValidationError("--subdivisions must be at least 1");
  if (cfg.n < 4) throw ValidationError("--n must be at least 4");
  if (cfg.m < 1) throw ValidationError("--m must be positive");
  if (!(cfg.radius > 0.0 && cfg.radius <= 0.05)) throw ValidationError("--radius must lie in (0, 0.05]");
  if (cfg.eta && !(*cfg.eta >= 0.0 && *cfg.eta < 1.0)) throw ValidationError("--eta must lie in [0, 1)");
  if (!(cfg.grading >= 2.0)) throw ValidationError("--grading must be at least 2");
  if (cfg.workers < 1) throw ValidationError("--workers must be at least 1");
  if (cfg.command == Command::scan_complex) {
    if (!cfg.window) throw ValidationError("scan-complex requires --window");
    try {
      cfg.window->validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("--window: ") + e.what());
    }
  }
  if (cfg.output.empty()) throw ValidationError("--output is required");
}

/// Parses argv (argv[0] is the program name). Throws UsageError or
/// ValidationError; `--help` output goes to `help` and yields nullopt.
inline std::optional<ScanConfig> parse_config(int argc, const char* const* argv, std::ostream& help = std::cout) {
  ScanConfig cfg;
  CLI::App app{"Interior transmission eigenvalue scanner"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value file");

  CLI::App* scan = app.add_subcommand("scan", "indicator scan over a real interval");
  CLI::App* complex = app.add_subcommand("scan-complex", "indicator scan over a complex rectangle");
  CLI::App* oracle = app.add_subcommand("disk-oracle", "exact disk eigenvalues from the Bessel determinant");

  std::vector<double> interval;
  std::vector<double> window;
  std::string eta_text = "auto";
  std::map<std::string, CLI::Option*> options;

  auto add_common = [&](CLI::App* sub) {
    auto add = [&](const std::string& name, auto& target, const std::string& text) {
      CLI::Option* o = sub->add_option("--" + name, target, text);
      options[sub->get_name() + "/" + name] = o;
      return o;
    };
    add("mu", cfg.mu, "refractive index (default 16)");
    if (sub == oracle) {
      add("interval", interval, "A B")->expected(2);
      add("disk-radius", cfg.disk_radius, "disk radius (default 0.5)");
      add("max-order", cfg.max_order, "highest angular order (default 8)");
      add("output", cfg.output, "CSV path (default stdout)");
      return;
    }
    add("shape", cfg.shape, "disk|peanut|square|triangle|lshape|pentagon")
        ->check(CLI::IsMember({"disk", "peanut", "square", "triangle", "lshape", "pentagon"}));
    if (sub == scan) {
      add("interval", interval, "A B")->expected(2);
      add("subdivisions", cfg.subdivisions, "number of subintervals N");
    } else {
      add("window", window, "REA REB IMA IMB NRE NIM")->expected(6);
    }
    add("n", cfg.n, "mesh half-count (2n nodes)");
    add("m", cfg.m, "contour half-count (2m nodes)");
    add("radius", cfg.radius, "contour radius r");
    add("eta", eta_text, "auto or a value in [0,1)");
    add("grading", cfg.grading, "corner grading exponent p");
    add("seed", cfg.seed, "probe seed");
    add("output", cfg.output, "CSV path");
    add("workers", cfg.workers, "worker threads");
  };
  add_common(scan);
  add_common(complex);
  add_common(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    os << e.what() << "\n" << app.help();
    throw UsageError(os.str());
  }

  CLI::App* chosen = scan->parsed() ? scan : complex->parsed() ? complex : oracle;
  cfg.command = chosen == scan ? Command::scan : chosen == complex ? Command::scan_complex : Command::disk_oracle;
  const std::string prefix = chosen->get_name() + "/";

  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config_file(config_path)) {
      const auto it = options.find(prefix + key);
      if (it == options.end()) throw UsageError("--config: unknown key '" + key + "' for " + chosen->get_name());
      CLI::Option* o = it->second;
      if (o->count() > 0) continue;
      std::vector<std::string> tokens;
      std::istringstream words(value);
      for (std::string w; words >> w;) tokens.push_back(w);
      try {
        o->clear();
        o->add_result(tokens);
        o->run_callback();
      } catch (const CLI::Error& e) {
        throw UsageError("--config: bad value for '" + key + "': " + e.what());
      }
    }
  }

  if (!interval.empty()) {
    cfg.a = interval[0];
    cfg.b = interval[1];
  } else if (cfg.command != Command::scan_complex) {
    throw UsageError("--interval is required");
  }
  if (!window.empty()) {
    for (int k : {4, 5})
      if (window[k] != std::floor(window[k])) throw UsageError("--window: NRE and NIM must be integers");
    cfg.window = ComplexWindow{window[0], window[1], window[2], window[3], static_cast<int>(window[4]),
                               static_cast<int>(window[5])};
  }
  if (eta_text == "auto") {
    cfg.eta.reset();
  } else {
    try {
      std::size_t used = 0;
      cfg.eta = std::stod(eta_text, &used);
      if (used != eta_text.size()) throw std::invalid_argument(eta_text);
    } catch (const std::exception&) {
      throw UsageError("--eta: expected 'auto' or a number, got '" + eta_text + "'");
    }
  }
  validate(cfg);
  return cfg;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "ERR";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_samples(std::ostream& out, const std::vector<ScanSample>& samples) {
  out << "kappa_re,kappa_im,indicator,log10_indicator,eta_used,condition_estimate\n";
  for (const ScanSample& s : samples) {
    out << format_number(s.kappa.real()) << ',' << format_number(s.kappa.imag()) << ',';
    if (s.ok()) {
      out << format_number(s.indicator) << ',' << format_number(std::log10(s.indicator));
    } else {
      out << "ERR,ERR";
    }
    out << ',' << format_number(s.eta_used) << ',' << format_number(s.condition_estimate) << '\n';
  }
}

inline void write_detections(std::ostream& out, const std::vector<Detection>& detected) {
  out << "kappa_re,kappa_im,indicator\n";
  for (const Detection& d : detected)
    out << format_number(d.kappa.real()) << ',' << format_number(d.kappa.imag()) << ','
        << format_number(d.indicator) << '\n';
}

inline ScanOptions scan_options(const ScanConfig& cfg) {
  ScanOptions options;
  options.mu = cfg.mu;
  options.regularization = cfg.eta ? Regularization::fixed(*cfg.eta) : Regularization::automatic_choice();
  options.rim = RimConfig{cfg.m, cfg.radius, cfg.seed};
  options.workers = cfg.workers;
  return options;
}

inline ScanResult run_scan(const ScanConfig& cfg) {
  const Mesh mesh(shapes::by_name(cfg.shape, cfg.grading), cfg.n);
  const ScanOptions options = scan_options(cfg);
  if (cfg.command == Command::scan_complex) return scan_complex_grid(*cfg.window, mesh, options);
  return scan_interval(cfg.a, cfg.b, cfg.subdivisions, mesh, options);
}

inline void write_oracle(std::ostream& out, const std::vector<DiskRoot>& roots) {
  out << "kappa,order\n";
  for (const DiskRoot& r : roots) out << format_number(r.kappa) << ',' << r.order << '\n';
}

/// Executes a validated config; returns the process exit code.
inline int run(const ScanConfig& cfg, std::ostream& err = std::cerr) {
  try {
    if (cfg.command == Command::disk_oracle) {
      const auto roots = find_roots(cfg.max_order, cfg.a, cfg.b, 1e-8, cfg.mu, cfg.disk_radius);
      if (cfg.output.empty()) {
        write_oracle(std::cout, roots);
        return 0;
      }
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + cfg.output);
      write_oracle(out, roots);
      if (!out) throw std::runtime_error("write failed: " + cfg.output);
      return 0;
    }
    const ScanResult result = run_scan(cfg);
    std::ofstream samples(cfg.output, std::ios::binary);
    if (!samples) throw std::runtime_error("cannot write " + cfg.output);
    write_samples(samples, result.samples);
    std::ofstream detected(cfg.output + ".detected.csv", std::ios::binary);
    if (!detected) throw std::runtime_error("cannot write " + cfg.output + ".detected.csv");
    write_detections(detected, result.detected);
    if (!samples || !detected) throw std::runtime_error("write failed: " + cfg.output);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// Full entry point: parse, run, map errors to exit codes.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  try {
    const auto cfg = parse_config(argc, argv, out);
    if (!cfg) return 0;
    return run(*cfg, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace transeig::cli

#endif  // TRANSEIG_CLI_HPP
