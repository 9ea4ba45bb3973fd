// robustfam: solve, check and export from the command line.
//
// Exit codes: 0 success, 1 property failure (or unmet residual target), 2 input error.

#include "robust/affine_solver.hpp"
#include "robust/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace robust;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kInput = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::vector<std::string> tol;
  std::optional<std::string> out;
};

// --tol takes either a bare number (residual target of the solve commands) or name=value for
// a harness tolerance; it may be repeated.
struct Resolved {
  io::Config cfg;
  std::optional<double> target;
};

Resolved resolve(const Flags& f) {
  Resolved r;
  if (!f.config.empty()) r.cfg = io::load_config(f.config);
  if (f.seed) r.cfg.seed = *f.seed;
  if (f.grid) r.cfg.grid = *f.grid;
  if (f.out) r.cfg.out = *f.out;
  for (const auto& t : f.tol) {
    const auto eq = t.find('=');
    std::string text = eq == std::string::npos ? t : t.substr(0, eq) + " " + t.substr(eq + 1);
    if (eq == std::string::npos) {
      try {
        size_t pos = 0;
        r.target = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
      } catch (const std::logic_error&) {
        throw io::InputError("--tol: expected a number or name=value, got '" + t + "'");
      }
      if (!(*r.target > 0.0)) throw io::InputError("--tol: target must be positive");
      continue;
    }
    std::istringstream line("tol." + text);
    io::read_config(line, r.cfg, "--tol");
  }
  r.cfg.validate();
  return r;
}

fs::path output_path(const io::Config& cfg, const std::string& input, const std::string& suffix) {
  fs::create_directories(cfg.out);
  return fs::path(cfg.out) / (fs::path(input).stem().string() + suffix);
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw io::InputError("cannot write " + p.string());
  return f;
}

void write_history(std::ostream& log, const std::vector<double>& history, int stride) {
  log << "iteration\tresidual\n";
  for (size_t i = 0; i < history.size(); ++i) log << i * stride << "\t" << io::fmt(history[i]) << "\n";
}

int solve_maximal_cmd(const Flags& flags, const std::string& file) {
  const Resolved r = resolve(flags);
  auto in = io::open_input(file);
  const io::MaximalProblemFile pf = io::read_maximal_problem(in, file);
  auto prob = io::build_problem(pf, flags.grid ? std::optional<int>(r.cfg.grid) : std::nullopt);
  if (r.target) prob.params.target = *r.target;
  const maximal::SolveResult res = [&] {
    try {
      return maximal::solve_maximal(prob);
    } catch (const std::invalid_argument& e) {
      throw io::InputError(file + ": " + e.what());
    }
  }();
  const auto gpath = output_path(r.cfg, file, ".graph");
  auto g = open_output(gpath);
  io::write_graph(g, res.graph);
  auto log = open_output(output_path(r.cfg, file, ".residual.tsv"));
  write_history(log, res.history, 100);
  log << "final\t" << io::fmt(res.residual) << "\n";
  std::cout << "solve-maximal: " << res.iterations << " iterations, residual " << io::fmt(res.residual)
            << (res.converged ? " (target met)" : " (target NOT met)") << ", wrote " << gpath.string() << "\n";
  return res.converged ? kOk : kFail;
}

int solve_affine_cmd(const Flags& flags, const std::string& file) {
  const Resolved r = resolve(flags);
  auto in = io::open_input(file);
  const io::ConeFile cf = io::read_cone(in, file);
  const int n = flags.grid ? r.cfg.grid : cf.grid.value_or(r.cfg.grid);
  if (n < 5 || n % 2 == 0) throw io::InputError(file + ": grid must be odd and at least 5");
  affine::NewtonParams np;
  np.target = r.target.value_or(r.cfg.affine_tol);
  const auto res = affine::solve_affine_sphere(cf.cone, n, np);
  const auto spath = output_path(r.cfg, file, ".sphere");
  auto s = open_output(spath);
  io::write_sphere(s, res.surface);
  auto log = open_output(output_path(r.cfg, file, ".residual.tsv"));
  write_history(log, res.history, 1);
  log << "final\t" << io::fmt(res.residual) << "\n";
  std::cout << "solve-affine: " << res.iterations << " Newton steps, residual " << io::fmt(res.residual)
            << (res.converged ? " (target met)" : " (target NOT met)") << ", wrote " << spath.string() << "\n";
  return res.converged ? kOk : kFail;
}

std::vector<harness::PropertyReport> run_checks(const harness::Scenario& scn, std::vector<std::string> names) {
  if (names.empty()) {
    names = {"invariance", "compactness", "avoidance", "domination"};
    if (!scn.rho_seq.empty()) names.push_back("closedness");
  }
  std::vector<harness::PropertyReport> out;
  for (const auto& n : names) {
    if (n == "invariance") out.push_back(harness::check_invariance(scn));
    else if (n == "compactness") out.push_back(harness::check_compactness(scn));
    else if (n == "avoidance") out.push_back(harness::check_avoidance(scn));
    else if (n == "domination") out.push_back(harness::check_domination(scn));
    else if (n == "closedness") out.push_back(harness::closedness_scenario(scn));
    else throw io::InputError("unknown check '" + n + "'");
  }
  return out;
}

int check_cmd(const Flags& flags, const std::string& file, const std::string& replay_file) {
  const Resolved r = resolve(flags);
  std::vector<std::string> names;
  const harness::Scenario scn = io::load_scenario(file, r.cfg, &names);
  if (!replay_file.empty()) {
    auto in = io::open_input(replay_file);
    const auto ws = io::read_witnesses(in, replay_file);
    bool ok = true;
    for (const auto& w : ws) {
      double m = 0.0;
      try {
        m = harness::replay(scn, w);
      } catch (const std::invalid_argument& e) {
        throw io::InputError(replay_file + ": " + e.what());
      }
      ok = ok && m >= 0.0;
      std::cout << w.kind << "\trecorded " << io::fmt(w.margin) << "\treplayed " << io::fmt(m) << "\n";
    }
    return ok ? kOk : kFail;
  }
  const auto reports = run_checks(scn, names);
  auto rep = open_output(output_path(r.cfg, file, ".report.tsv"));
  io::write_report_table(rep, reports);
  auto wit = open_output(output_path(r.cfg, file, ".witnesses.tsv"));
  io::write_witnesses(wit, reports);
  bool ok = true;
  for (const auto& p : reports) {
    std::cout << p.summary() << "\n";
    ok = ok && p.ok();
  }
  return ok ? kOk : kFail;
}

int export_cmd(const Flags& flags, const std::string& file, const std::string& kind) {
  const Resolved r = resolve(flags);
  auto in = io::open_input(file);
  const auto path = output_path(r.cfg, file, "." + kind + ".tsv");
  if (kind == "graph" || kind == "distance") {
    const auto M = io::read_graph(in, file);
    auto out = open_output(path);
    if (kind == "graph") io::export_graph_table(out, M);
    else io::export_distance_table(out, M);
  } else if (kind == "sphere") {
    const auto M = io::read_sphere(in, file);
    auto out = open_output(path);
    io::export_sphere_table(out, M);
  } else if (kind == "report") {
    // check name and worst margin columns of a report table
    std::string line;
    if (!std::getline(in, line) || line.rfind("property\t", 0) != 0) throw io::InputError(file + ": not a report table");
    auto out = open_output(path);
    out << "check\tworst_margin\n";
    while (std::getline(in, line)) {
      std::vector<std::string> cols;
      std::istringstream ss(line);
      for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
      if (cols.size() < 5) throw io::InputError(file + ": short report line");
      out << cols[1] << "\t" << cols[4] << "\n";
    }
  } else {
    throw io::InputError("unknown export kind '" + kind + "'");
  }
  std::cout << "export: wrote " << path.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust families of submanifolds: solvers, property checks and plot data"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  int grid = 0;
  std::string out;
  app.add_option("--config", flags.config, "configuration file (key value lines)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed for sampled group elements");
  auto* grid_opt = app.add_option("--grid", grid, "grid size n (odd)");
  app.add_option("--tol", flags.tol, "residual target, or name=value for a check tolerance");
  auto* out_opt = app.add_option("--out", out, "output directory");
  app.fallthrough();

  std::string file, replay, kind;
  auto* sm = app.add_subcommand("solve-maximal", "solve a maximal Plateau problem file");
  sm->add_option("problem", file)->required();
  auto* sa = app.add_subcommand("solve-affine", "solve the affine sphere of a cone file");
  sa->add_option("cone", file)->required();
  auto* ck = app.add_subcommand("check", "run the property checks of a scenario file");
  ck->add_option("scenario", file)->required();
  ck->add_option("--replay", replay, "recompute the margins of a witness table");
  auto* ex = app.add_subcommand("export", "write columnar plot data");
  ex->add_option("file", file)->required();
  ex->add_option("--kind", kind, "graph, distance, sphere or report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }
  if (*seed_opt) flags.seed = seed;
  if (*grid_opt) flags.grid = grid;
  if (*out_opt) flags.out = out;

  try {
    if (*sm) return solve_maximal_cmd(flags, file);
    if (*sa) return solve_affine_cmd(flags, file);
    if (*ck) return check_cmd(flags, file, replay);
    return export_cmd(flags, file, kind);
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
