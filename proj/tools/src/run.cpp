#include "kplab_cli/run.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "kplab/analysis.hpp"
#include "kplab/errors.hpp"
#include "kplab/format.hpp"
#include "kplab/linearized.hpp"
#include "kplab/snapshot.hpp"
#include "kplab/soliton.hpp"
#include "kplab/solver.hpp"

namespace kplab::cli {
namespace {

namespace fs = std::filesystem;
using spectral::Grid;
using spectral::RealField;

// Typed access to the manifest parameters.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

  bool has(const std::string& key) const { return p_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback = "") const {
    auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) const {
    auto it = p_.find(key);
    if (it == p_.end()) throw InvalidArgument("missing --" + key);
    return it->second;
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? to_real(key, required(key)) : fallback;
  }
  double real(const std::string& key) const { return to_real(key, required(key)); }

  double length(const std::string& key, double fallback) const {
    return has(key) ? parse_length(required(key)) : fallback;
  }

  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string s = required(key);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InvalidArgument("--" + key + " expects an integer, got '" + s + "'");
    }
    return v;
  }

  bool flag(const std::string& key) const { return has(key) && required(key) == "true"; }

 private:
  static double to_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw InvalidArgument("--" + key + " expects a number, got '" + s + "'");
    }
    return v;
  }

  const std::map<std::string, std::string>& p_;
};

int to_int(long long v, const char* what) {
  if (v < 0 || v > (1 << 24)) throw InvalidArgument(std::string(what) + " out of range");
  return static_cast<int>(v);
}

void require_writable(const std::string& path) {
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("output directory does not exist: " + dir.string());
  }
  if (fs::is_directory(p, ec)) throw IoError("output path is a directory: " + path);
}

std::ofstream open_text(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  return f;
}

void close_checked(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

Grid grid_from(const Params& p, int nx, int ny, double lx) {
  return Grid(to_int(p.integer("nx", nx), "nx"), to_int(p.integer("ny", ny), "ny"),
              p.length("Lx", lx), p.real("lambda-y", 1.0));
}

solver::SolverConfig solver_from(const Params& p, double dt, double t_end) {
  solver::SolverConfig cfg;
  cfg.dt = p.real("dt", dt);
  cfg.t_end = p.real("t-end", t_end);
  cfg.dealias = !p.flag("no-dealias");
  cfg.moving_frame_speed = p.real("frame-speed", 0.0);
  cfg.record_every = to_int(p.integer("record-every", 1), "record-every");
  cfg.validate();
  return cfg;
}

// Each subcommand validates everything up front and returns the work.
using Work = std::function<void(std::ostream&)>;

Work plan_soliton(const Params& p) {
  const stability::SolitonParams sp{p.real("c"), p.real("x0", 0.0)};
  const Grid g = grid_from(p, 512, 64, 64.0 * std::numbers::pi);
  const std::string out_path = p.required("out");
  const RealField u = stability::soliton_profile(sp, g);
  return [=](std::ostream& out) {
    spectral::write_snapshot(out_path, u, 0.0);
    out << "soliton c=" << format_double(sp.c) << " max=" << format_double(spectral::linf_norm(u))
        << " written to " << out_path << '\n';
  };
}

Work plan_evolve(const Params& p) {
  const std::string in_path = p.required("in");
  const solver::SolverConfig cfg = solver_from(p, 1e-3, 1.0);
  const std::string out_path = p.text("out");
  const std::string diag_path = p.text("diagnostics");
  const bool orbit = p.has("c");
  const double c = p.real("c", cfg.moving_frame_speed);
  return [=](std::ostream& out) {
    const spectral::Snapshot s = spectral::read_snapshot(in_path);
    solver::Probe probe;
    std::optional<stability::OrbitMeter> meter;
    if (orbit) {
      meter.emplace(s.field.grid, c);
      probe = [&](const spectral::SpectralField& u) -> std::optional<double> {
        return (*meter)(u).distance;
      };
    }
    // E_c is taken at the frame speed unless --c is given.
    solver::EvolveResult r = solver::evolve(s.field, cfg, probe);
    for (auto& rec : r.records) rec.hamiltonian_c = rec.energy + c * rec.mass;
    if (!diag_path.empty()) {
      std::ofstream f = open_text(diag_path);
      solver::write_diagnostics_csv(f, r.records);
      close_checked(f, diag_path);
    }
    if (!out_path.empty()) spectral::write_snapshot(out_path, r.final_field, s.t + r.t_final);
    const auto& first = r.records.front();
    const auto& last = r.records.back();
    out << "evolve t=" << format_double(s.t + r.t_final) << " steps=" << cfg.steps()
        << " mass_drift=" << format_double(std::abs(last.mass - first.mass) / first.mass)
        << " energy_drift="
        << format_double(std::abs(last.energy - first.energy) /
                         std::max(std::abs(first.energy), 1e-300))
        << '\n';
  };
}

Work plan_stability(const Params& p) {
  stability::StabilityRunConfig cfg;
  cfg.c = p.real("c");
  cfg.delta = p.real("delta", 1e-2);
  cfg.t_end = p.real("t-end", 20.0);
  cfg.grid = grid_from(p, 256, 16, 64.0);
  cfg.solver = solver_from(p, 1e-2, cfg.t_end);
  const long long mx = p.integer("mode-kx", 1);
  const long long my = p.integer("mode-ky", 1);
  cfg.perturbation_mode = {static_cast<double>(mx) * 2.0 * std::numbers::pi / cfg.grid.length_x(),
                           static_cast<double>(my) / cfg.grid.lambda_y()};
  const std::string diag_path = p.text("diagnostics");
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0)) throw InvalidArgument("--delta must lie in [0, 1)");
  // Reject bad grids or modes before the run starts.
  (void)stability::soliton_profile({cfg.c, 0.0}, cfg.grid);
  if (cfg.delta > 0.0) (void)stability::transverse_perturbation(cfg.grid, cfg.perturbation_mode);
  return [=](std::ostream& out) {
    const stability::StabilityRun run = stability::run_stability_experiment(cfg);
    if (!diag_path.empty()) {
      std::ofstream f = open_text(diag_path);
      solver::write_diagnostics_csv(f, run.records);
      close_checked(f, diag_path);
    }
    const double threshold = 10.0 * cfg.delta;
    const auto exceed = run.first_exceedance(threshold);
    out << "stability c=" << format_double(cfg.c) << " delta=" << format_double(cfg.delta)
        << " sup_distance=" << format_double(run.sup_distance())
        << " exceeds_10delta=" << (exceed ? "yes" : "no");
    if (exceed) out << " at_t=" << format_double(*exceed);
    if (run.blew_up) out << " blowup_t=" << format_double(*run.blowup_time);
    out << '\n';
  };
}

Work plan_spectrum(const Params& p) {
  const int n = to_int(p.integer("n", stability::kDefaultOperatorPoints), "n");
  const double hw = p.length("half-width", stability::kDefaultHalfWidth);
  const std::string out_path = p.text("out");
  const bool bisect = p.flag("bisect");
  std::vector<double> speeds;
  double c_min = 0.0;
  double c_max = 0.0;
  int steps = 0;
  if (p.has("c")) {
    if (bisect) throw InvalidArgument("--bisect needs --c-min and --c-max, not --c");
    speeds.push_back(p.real("c"));
  } else {
    c_min = p.real("c-min");
    c_max = p.real("c-max");
    if (!(c_min > 0.0 && c_min < c_max)) throw InvalidArgument("need 0 < --c-min < --c-max");
    if (bisect) {
      steps = to_int(p.integer("steps", 12), "steps");
      if (steps < 1) throw InvalidArgument("--steps must be positive");
    } else {
      const int points = to_int(p.integer("points", 7), "points");
      if (points < 2) throw InvalidArgument("--points must be at least 2");
      for (int k = 0; k < points; ++k) speeds.push_back(c_min + (c_max - c_min) * k / (points - 1));
    }
  }
  // The operator's own preconditions, checked before any eigensolve.
  for (double c : speeds) (void)stability::linearized_operator_matrix(c, n, hw).size();
  if (bisect) (void)stability::linearized_operator_matrix(c_min, n, hw).size();
  return [=](std::ostream& out) {
    std::vector<stability::SpectrumResult> rows;
    if (bisect) {
      const stability::CriticalSpeed cs = stability::critical_speed_scan(c_min, c_max, steps, n, hw);
      rows = cs.evaluations;
      out << "critical_speed=" << format_double(cs.speed) << " bracket=[" << format_double(cs.lower)
          << ", " << format_double(cs.upper) << "]\n";
    } else {
      for (double c : speeds) {
        rows.push_back(stability::min_eigenvalue(c, n, hw));
        out << "c=" << format_double(c) << " min_eigenvalue=" << format_double(rows.back().min_eigenvalue)
            << '\n';
      }
    }
    if (!out_path.empty()) {
      std::ofstream f = open_text(out_path);
      stability::write_spectrum_csv(f, rows);
      close_checked(f, out_path);
    }
  };
}

nlohmann::ordered_json report_json(const std::vector<analysis::SuiteReport>& reports) {
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["samples"] = r.samples;
    j["failures"] = r.failures;
    j["worst_ratio"] = r.worst_ratio;
    j["seed"] = r.seed;
    suites.push_back(j);
  }
  nlohmann::ordered_json root;
  root["suites"] = suites;
  return root;
}

Work plan_verify(const Params& p, std::uint64_t seed) {
  const std::string suite = p.text("suite", "all");
  if (suite != "resonance" && suite != "measure" && suite != "sobolev" && suite != "all") {
    throw InvalidArgument("unknown suite '" + suite + "'");
  }
  const long long samples = p.integer("samples", 10000);
  if (samples < 1) throw InvalidArgument("--samples must be positive");
  const std::string report_path = p.text("report");
  return [=](std::ostream& out) {
    const auto reports = analysis::run_suite(suite, static_cast<std::uint64_t>(samples), seed);
    const std::string text = report_json(reports).dump(2) + "\n";
    if (!report_path.empty()) {
      std::ofstream f = open_text(report_path);
      f << text;
      close_checked(f, report_path);
    }
    out << text;
  };
}

Work plan_rescale(const Params& p) {
  const std::string in_path = p.required("in");
  const std::string out_path = p.required("out");
  const double lam = p.real("lambda");
  if (!(lam >= 1.0)) throw InvalidArgument("--lambda must be a power of 4");
  return [=](std::ostream& out) {
    const spectral::Snapshot s = spectral::read_snapshot(in_path);
    const RealField r = solver::rescale(s.field, lam);
    spectral::write_snapshot(out_path, r, s.t * std::pow(lam, 1.5));
    out << "rescale lambda=" << format_double(lam) << " Lx=" << format_double(r.grid.length_x())
        << " lambda_y=" << format_double(r.grid.lambda_y()) << " written to " << out_path << '\n';
  };
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') {
      out += '\\';
      out += ch;
    } else if (ch == '\n' || ch == '\r') {
      out += ' ';
    } else {
      out += ch;
    }
  }
  return out;
}

}  // namespace

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::soliton: return "soliton";
    case Subcommand::evolve: return "evolve";
    case Subcommand::stability: return "stability";
    case Subcommand::spectrum: return "spectrum";
    case Subcommand::verify: return "verify";
    case Subcommand::rescale: return "rescale";
  }
  return "unknown";
}

double parse_length(const std::string& text) {
  std::string s = text;
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s.resize(s.size() - 2);
    if (s.empty()) return factor;
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("not a length: '" + text + "'");
  }
  return v * factor;
}

bool parse_command_line(int argc, const char* const* argv, RunManifest& manifest,
                        std::ostream& out) {
  CLI::App app{"KP-I soliton simulator and verification lab", "kplab"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for all randomness")->capture_default_str();

  struct SubcommandDef {
    Subcommand kind;
    const char* help;
    std::vector<std::pair<const char*, const char*>> options;
    std::vector<std::pair<const char*, const char*>> flags;
    std::vector<const char*> outputs;
  };
  const std::vector<SubcommandDef> defs = {
      {Subcommand::soliton, "Write the line soliton Q_c as a KPF1 snapshot",
       {{"c", "Speed"}, {"x0", "Center"}, {"nx", "Points in x"}, {"ny", "Points in y"},
        {"Lx", "Box length in x (accepts a pi suffix)"}, {"lambda-y", "y period is 2 pi lambda_y"},
        {"out", "Output snapshot"}},
       {},
       {"out"}},
      {Subcommand::evolve, "Evolve a KPF1 snapshot",
       {{"in", "Input snapshot"}, {"dt", "Time step"}, {"t-end", "Final time"},
        {"frame-speed", "Speed of the moving frame"}, {"record-every", "Steps between records"},
        {"c", "Speed for E_c and the orbital distance"}, {"diagnostics", "Diagnostics CSV"},
        {"out", "Final snapshot"}},
       {{"no-dealias", "Disable the 2/3 rule"}},
       {"diagnostics", "out"}},
      {Subcommand::stability, "Perturbed soliton run in the moving frame",
       {{"c", "Soliton speed"}, {"delta", "Perturbation size in the energy norm"},
        {"mode-kx", "Perturbation x lattice index"}, {"mode-ky", "Perturbation y lattice index"},
        {"t-end", "Final time"}, {"dt", "Time step"}, {"record-every", "Steps between records"},
        {"nx", "Points in x"}, {"ny", "Points in y"}, {"Lx", "Box length in x"},
        {"lambda-y", "y period is 2 pi lambda_y"}, {"diagnostics", "Diagnostics CSV"}},
       {{"no-dealias", "Disable the 2/3 rule"}},
       {"diagnostics"}},
      {Subcommand::spectrum, "Smallest eigenvalues of the linearized operator",
       {{"c", "Single speed"}, {"c-min", "Lower speed"}, {"c-max", "Upper speed"},
        {"steps", "Bisection steps"}, {"points", "Sweep points"}, {"n", "Coarse grid points"},
        {"half-width", "Half width of the domain"}, {"out", "spectrum CSV"}},
       {{"bisect", "Locate the sign change of the smallest eigenvalue"}},
       {"out"}},
      {Subcommand::verify, "Run verification suites",
       {{"suite", "resonance, measure, sobolev or all"}, {"samples", "Samples per suite"},
        {"report", "JSON report"}},
       {},
       {"report"}},
      {Subcommand::rescale, "Apply the scaling symmetry to a snapshot",
       {{"in", "Input snapshot"}, {"lambda", "Scale, a power of 4"}, {"out", "Output snapshot"}},
       {},
       {"out"}},
  };

  std::vector<std::pair<CLI::App*, const SubcommandDef*>> subs;
  std::vector<std::pair<std::string, CLI::Option*>> option_ptrs;
  std::vector<std::pair<std::string, CLI::Option*>> flag_ptrs;
  std::deque<std::string> storage;
  for (const SubcommandDef& spec : defs) {
    CLI::App* sub = app.add_subcommand(to_string(spec.kind), spec.help);
    for (auto [name, help] : spec.options) {
      storage.emplace_back();
      CLI::Option* o = sub->add_option(std::string("--") + name, storage.back(), help);
      option_ptrs.emplace_back(std::string(to_string(spec.kind)) + ":" + name, o);
    }
    for (auto [name, help] : spec.flags) {
      CLI::Option* o = sub->add_flag(std::string("--") + name)->description(help);
      flag_ptrs.emplace_back(std::string(to_string(spec.kind)) + ":" + name, o);
    }
    subs.emplace_back(sub, &spec);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, out);
    return false;
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }

  for (auto [sub, spec] : subs) {
    if (!sub->parsed()) continue;
    manifest.subcommand = spec->kind;
    const std::string prefix = std::string(to_string(spec->kind)) + ":";
    for (auto& [key, opt] : option_ptrs) {
      if (key.rfind(prefix, 0) == 0 && opt->count() > 0) {
        manifest.parameters[key.substr(prefix.size())] = opt->as<std::string>();
      }
    }
    for (auto& [key, opt] : flag_ptrs) {
      if (key.rfind(prefix, 0) == 0 && opt->count() > 0) {
        manifest.parameters[key.substr(prefix.size())] = "true";
      }
    }
    for (const char* name : spec->outputs) {
      auto it = manifest.parameters.find(name);
      if (it != manifest.parameters.end()) manifest.outputs.push_back(it->second);
    }
  }
  manifest.seed = seed;
  return true;
}

void run(const RunManifest& manifest, std::ostream& out) {
  const Params p(manifest.parameters);
  for (const auto& path : manifest.outputs) require_writable(path);
  Work work;
  switch (manifest.subcommand) {
    case Subcommand::soliton: work = plan_soliton(p); break;
    case Subcommand::evolve: work = plan_evolve(p); break;
    case Subcommand::stability: work = plan_stability(p); break;
    case Subcommand::spectrum: work = plan_spectrum(p); break;
    case Subcommand::verify: work = plan_verify(p, manifest.seed); break;
    case Subcommand::rescale: work = plan_rescale(p); break;
  }
  work(out);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const NumericalError*>(&e)) return 2;
  return 1;
}

std::string diagnostic_line(const std::exception& e) {
  const auto* k = dynamic_cast<const Error*>(&e);
  std::ostringstream s;
  s << "kplab: error kind=" << (k ? k->kind() : "InternalError") << " exit=" << exit_code_for(e)
    << " message=\"" << escape(e.what()) << '"';
  return s.str();
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    RunManifest manifest;
    if (!parse_command_line(argc, argv, manifest, out)) return 0;
    run(manifest, out);
    return 0;
  } catch (const std::exception& e) {
    err << diagnostic_line(e) << std::endl;
    return exit_code_for(e);
  }
}

}  // namespace kplab::cli
