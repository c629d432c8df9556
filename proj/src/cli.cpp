#include "satnls/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "satnls/config.hpp"
#include "satnls/error.hpp"
#include "satnls/io.hpp"
#include "satnls/spectral.hpp"

namespace satnls::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct MissingPrerequisite : Error {
  using Error::Error;
};

struct Context {
  RunConfig cfg;
  std::string hash;
  fs::path dir;
  NonlinearityModel model;
  Grid grid;
  std::ostream& out;
  std::ostream& err;

  std::string header() const { return "config_hash=" + hash; }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  ojson stamp(ojson j) const {
    ojson s;
    s["config_hash"] = hash;
    for (auto& [k, v] : j.items()) s[k] = v;
    return s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double require_lambda_inf(const Context& c) {
  const auto p = c.path("lambda_inf.json");
  if (!fs::exists(p)) throw MissingPrerequisite("missing " + p + "; run `satnls lambda-inf` first");
  return read_json(p).at("lambda_inf").get<double>();
}

Table require_curve(const Context& c) {
  const auto p = c.path("curve.csv");
  if (!fs::exists(p)) throw MissingPrerequisite("missing " + p + "; run `satnls trace` first");
  return read_table(p);
}

std::string point_file(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "points/point-%03zu.csv", i);
  return buf;
}

// Traced point i as a StandingWave (u from the per-point dump).
StandingWave load_point(const Context& c, const Table& curve, std::size_t i) {
  const auto p = c.path(point_file(i));
  if (!fs::exists(p)) throw MissingPrerequisite("missing " + p + "; run `satnls trace` first");
  const Table t = read_table(p);
  StandingWave w;
  w.lambda = curve.column("lambda")[i];
  w.mass = curve.column("mass")[i];
  w.decay_ratio = curve.column("decay_ratio")[i];
  w.residual_inf = curve.column("residual_inf")[i];
  w.u = t.column("u");
  if (w.u.size() != c.grid.N()) throw Error(p + " does not match the configured grid");
  return w;
}

// ---------------------------------------------------------------- commands

int cmd_audit(Context& c) {
  const AuditReport rep = audit_prototype(c.cfg.model, AuditGrid::defaults());
  const auto p = c.path("audit.json");
  write_json(p, c.stamp(to_json(rep)));
  for (const auto& e : rep.entries)
    if (!e.pass) c.err << "audit: " << e.assumption << " fails: " << e.detail << '\n';
  c.out << p << '\n';
  return rep.all_pass() ? kOk : kCheckFailed;
}

int cmd_lambda_inf(Context& c) {
  const auto est = lambda_inf_estimate(c.model, c.grid);
  const auto eig = principal_eigenpair(c.model, c.grid);
  ojson j;
  j["lambda_inf"] = est.extrapolated;
  j["coarse"] = est.coarse;
  j["fine"] = est.fine;
  j["R"] = c.grid.R();
  j["N"] = c.grid.N();
  j["h"] = c.grid.h();
  write_json(c.path("lambda_inf.json"), c.stamp(j));
  write_csv(c.path("phi_inf.csv"), eig.phi, c.grid, c.header());
  c.out << "lambda_inf = " << fmt("%.12g", est.extrapolated) << " (h: " << fmt("%.12g", est.coarse)
        << ", h/2: " << fmt("%.12g", est.fine) << ")\n";
  return kOk;
}

StandingWave wave_at(const Context& c, double lambda, double lambda_inf) {
  const double seed_lambda = std::min(lambda, c.cfg.window_lo * lambda_inf);
  const double alpha = c.cfg.model.alpha;
  StandingWave w =
      solve(seed_lambda, initial_guess(seed_lambda, alpha, c.grid), c.model, c.grid, c.cfg.step.newton, lambda_inf);
  return lambda == seed_lambda ? w : continue_to(w, lambda, c.model, c.grid, c.cfg.step, lambda_inf);
}

int cmd_solve(Context& c) {
  const double li = require_lambda_inf(c);
  const double lambda = c.cfg.solve_fraction * li;
  const StandingWave w = wave_at(c, lambda, li);
  const auto ids = wave_identities(w, c.model, c.grid);
  write_csv(c.path("wave.csv"), w.u, c.grid, c.header());
  ojson j = to_json(w);
  j["intid2_residual"] = ids.intid2;
  j["intid4_residual"] = ids.intid4;
  write_json(c.path("wave.json"), c.stamp(j));
  c.out << "lambda = " << fmt("%.10g", lambda) << ", mass = " << fmt("%.10g", w.mass)
        << ", ||F||_inf = " << fmt("%.3g", w.residual_inf) << '\n';
  return kOk;
}

int cmd_trace(Context& c) {
  const double li = require_lambda_inf(c);
  const SolutionCurve curve =
      trace(c.model, c.grid, li, {c.cfg.window_lo * li, c.cfg.window_hi * li}, c.cfg.step);
  fs::create_directories(c.dir / "points");
  write_curve_csv(c.path("curve.csv"), curve, c.header());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    write_fields_csv(c.path(point_file(i)), c.grid, p.wave.u, p.xi,
                     c.header() + "; lambda=" + fmt("%.17g", p.wave.lambda));
  }
  ojson j;
  j["lambda_inf"] = li;
  j["points"] = curve.points.size();
  j["termination"] = to_string(curve.termination);
  j["message"] = curve.message;
  write_json(c.path("curve.json"), c.stamp(j));
  c.out << curve.points.size() << " points, termination: " << to_string(curve.termination) << '\n';
  if (curve.termination != Termination::WindowEdge) {
    c.err << "trace ended early: " << curve.message << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_spectrum(Context& c) {
  const Table curve = require_curve(c);
  std::mt19937_64 rng(c.cfg.seed);
  std::normal_distribution<double> gauss;
  ojson points = ojson::array();
  bool all1 = true, all2 = true;
  int probe_violations = 0, probes = 0;
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    const StandingWave w = load_point(c, curve, i);
    const auto ops = assemble(w, c.model, c.grid);
    const SpectralPoint sp{w.lambda, check_S1(ops), check_S2(ops, w)};
    all1 = all1 && sp.s1.pass;
    all2 = all2 && sp.s2.pass;
    if (!sp.s1.pass) c.err << sp.s1.message << '\n';
    if (!sp.s2.pass) c.err << sp.s2.message << '\n';
    points.push_back(ojson::parse(to_json(sp)));

    // <L1 v, v> <= <L2 v, v> on a random vector
    RealField v(ops.L1_diag.size());
    for (auto& e : v) e = gauss(rng);
    double q = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) q += (ops.L1_diag[j] - ops.L2_diag[j]) * v[j] * v[j];
    ++probes;
    if (q > 0.0) ++probe_violations;
  }
  ojson j;
  j["points"] = points;
  j["all_pass_S1"] = all1;
  j["all_pass_S2"] = all2;
  j["ordering_probe"] = {{"seed", c.cfg.seed}, {"samples", probes}, {"violations", probe_violations}};
  write_json(c.path("spectrum.json"), c.stamp(j));
  c.out << curve.rows.size() << " points, S1 " << (all1 ? "pass" : "FAIL") << ", S2 " << (all2 ? "pass" : "FAIL")
        << '\n';
  return all1 && all2 && probe_violations == 0 ? kOk : kCheckFailed;
}

int cmd_slope(Context& c) {
  const Table curve = require_curve(c);
  const auto lam = curve.column("lambda"), mass = curve.column("mass");
  const auto sx = curve.column("slope_xi"), sd = curve.column("slope_direct");
  const auto xi0 = curve.column("xi0"), changes = curve.column("xi_sign_changes");
  const auto zeta = curve.column("zeta_check");
  bool pos_xi = true, pos_direct = true, increasing = true, one_change = true;
  double zeta_min = INFINITY;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    pos_xi = pos_xi && sx[i] > 0.0;
    pos_direct = pos_direct && sd[i] > 0.0;
    if (i > 0) increasing = increasing && mass[i] > mass[i - 1];
    one_change = one_change && xi0[i] > 0.0 && changes[i] == 1.0;
    if (std::isfinite(zeta[i])) zeta_min = std::min(zeta_min, zeta[i]);
  }
  const bool ok = pos_xi && pos_direct && increasing && one_change;
  ojson j;
  j["points"] = lam.size();
  j["slope_xi_positive"] = pos_xi;
  j["slope_direct_positive"] = pos_direct;
  j["mass_increasing"] = increasing;
  j["xi_one_sign_change"] = one_change;
  j["min_slope_xi"] = lam.empty() ? 0.0 : *std::min_element(sx.begin(), sx.end());
  j["min_zeta_check"] = std::isfinite(zeta_min) ? ojson(zeta_min) : ojson(nullptr);
  j["pass"] = ok;
  write_json(c.path("slope.json"), c.stamp(j));
  c.out << "slope condition " << (ok ? "holds" : "FAILS") << " at " << lam.size() << " points\n";
  return ok ? kOk : kCheckFailed;
}

int cmd_simulate(Context& c) {
  const Table curve = require_curve(c);
  const double li = require_lambda_inf(c);
  const auto lam = curve.column("lambda");
  if (lam.empty()) throw MissingPrerequisite("curve.csv has no points; rerun `satnls trace`");
  ojson runs = ojson::array();
  bool all_valid = true;
  for (double frac : c.cfg.simulate_fractions) {
    const double target = frac * li;
    const auto nearest = static_cast<std::size_t>(
        std::min_element(lam.begin(), lam.end(),
                         [&](double a, double b) { return std::abs(a - target) < std::abs(b - target); }) -
        lam.begin());
    StandingWave w = load_point(c, curve, nearest);
    if (w.lambda != target) w = continue_to(w, target, c.model, c.grid, c.cfg.step, li);
    for (double delta : c.cfg.deltas) {
      for (Parity parity : {Parity::Even, Parity::Odd}) {
        const char* pname = parity == Parity::Even ? "even" : "odd";
        const OrbitRecord rec = stability_experiment(w, {delta, parity}, c.cfg.dynamics, c.model, c.grid);
        char name[96];
        std::snprintf(name, sizeof name, "orbit-l%.3g-%s-d%.3g.csv", frac, pname, delta);
        write_orbit_csv(c.path(name), rec, c.header() + "; lambda=" + fmt("%.17g", target));
        all_valid = all_valid && rec.valid;
        if (!rec.valid) c.err << name << ": run invalidated: " << rec.message << '\n';
        runs.push_back({{"file", name},
                        {"lambda_fraction", frac},
                        {"lambda", target},
                        {"delta", delta},
                        {"parity", pname},
                        {"max_distance", rec.max_distance},
                        {"u_h1", rec.u_h1},
                        {"bound", 10.0 * delta * rec.u_h1},
                        {"max_mass_drift", *std::max_element(rec.mass_drift.begin(), rec.mass_drift.end())},
                        {"max_energy_drift", *std::max_element(rec.energy_drift.begin(), rec.energy_drift.end())},
                        {"max_leakage", rec.max_leakage},
                        {"leakage_ok", rec.leakage_ok},
                        {"valid", rec.valid}});
        c.out << name << ": max distance " << fmt("%.4g", rec.max_distance) << '\n';
      }
    }
  }
  ojson j;
  j["runs"] = runs;
  j["all_valid"] = all_valid;
  write_json(c.path("simulate.json"), c.stamp(j));
  return all_valid ? kOk : kCheckFailed;
}

int cmd_waveguide(Context& c) {
  const Table t = require_curve(c);
  const double li = require_lambda_inf(c);
  SolutionCurve curve;
  curve.lambda_inf = li;
  const auto lam = t.column("lambda"), mass = t.column("mass");
  for (std::size_t i = 0; i < lam.size(); ++i) {
    CurvePoint p;
    p.wave.lambda = lam[i];
    p.wave.mass = mass[i];
    curve.points.push_back(std::move(p));
  }
  const DispersionCurve d = dispersion_curve(curve, c.cfg.waveguide);
  write_dispersion_csv(c.path("dispersion.csv"), d, c.header());
  for (const auto& n : d.notes) c.err << n << '\n';
  c.out << "k window (" << fmt("%.10g", d.window.k1) << ", " << fmt("%.10g", d.window.k3) << "), "
        << d.points.size() << " points\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Standing waves of 1D NLS with saturable nonlinearity"};
  app.name("satnls");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "TOML or JSON run config");
  app.add_option("--out", out_dir, "output root (default from config, \"out\")");
  app.add_option("--seed", seed, "seed for randomized probes");
  app.require_subcommand(1);
  app.fallthrough();

  using Handler = int (*)(Context&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"audit", "check the structural assumptions on the model", cmd_audit},
      {"lambda-inf", "principal eigenvalue of the asymptotic linear problem", cmd_lambda_inf},
      {"solve", "one standing wave at solve.lambda_fraction of lambda_inf", cmd_solve},
      {"trace", "continue the solution curve over the lambda window", cmd_trace},
      {"spectrum", "spectral conditions at every traced point", cmd_spectrum},
      {"slope", "slope condition along the traced curve", cmd_slope},
      {"simulate", "orbital stability runs of the full evolution", cmd_simulate},
      {"waveguide", "power-dispersion curve of the TE waveguide", cmd_waveguide},
  };
  for (const auto& [name, help, h] : commands) app.add_subcommand(name, help);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kParameterBreach;
  }

  Handler handler = nullptr;
  std::string name;
  for (const auto& [n, help, h] : commands)
    if (app.got_subcommand(n)) {
      handler = h;
      name = n;
    }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    validate(cfg);
    const std::string hash = config_hash(cfg);
    const fs::path dir = fs::path(cfg.out_dir) / ("run-" + hash);
    fs::create_directories(dir);
    write_json((dir / "config.json").string(), to_json(cfg));
    Context ctx{cfg, hash, dir, make_prototype(cfg.model), Grid(cfg.R, cfg.N), out, err};
    return handler(ctx);
  } catch (const DomainError& e) {
    err << "satnls " << name << ": parameter breach: " << e.what() << '\n';
    return kParameterBreach;
  } catch (const MissingPrerequisite& e) {
    err << "satnls " << name << ": " << e.what() << '\n';
    return kMissingPrerequisite;
  } catch (const std::exception& e) {
    err << "satnls " << name << ": " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace satnls::cli
