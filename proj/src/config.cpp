#include "satnls/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "satnls/error.hpp"

namespace satnls {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& known) {
  if (!j.is_object()) throw DomainError("config: [" + where + "] must be a table");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw DomainError("config: unknown key '" + k + "' in [" + where + "]");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(std::string("config: key '") + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, "root", {"model", "grid", "trace", "newton", "solve", "dynamics", "waveguide", "output", "seed"});
  if (j.contains("model")) {
    const auto& m = j["model"];
    reject_unknown(m, "model", {"b", "alpha"});
    read(m, "b", c.model.b);
    read(m, "alpha", c.model.alpha);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, "grid", {"R", "N"});
    read(g, "R", c.R);
    read(g, "N", c.N);
  }
  if (j.contains("trace")) {
    const auto& t = j["trace"];
    reject_unknown(t, "trace", {"lo", "hi", "points", "fd_delta", "amplitude_cap", "min_step", "grow"});
    read(t, "lo", c.window_lo);
    read(t, "hi", c.window_hi);
    read(t, "points", c.step.points);
    read(t, "fd_delta", c.step.fd_delta);
    read(t, "amplitude_cap", c.step.amplitude_cap);
    read(t, "min_step", c.step.min_step);
    read(t, "grow", c.step.grow);
  }
  if (j.contains("newton")) {
    const auto& n = j["newton"];
    reject_unknown(n, "newton", {"tol", "max_iters", "backtrack", "max_halvings"});
    read(n, "tol", c.step.newton.tol);
    read(n, "max_iters", c.step.newton.max_iters);
    read(n, "backtrack", c.step.newton.backtrack);
    read(n, "max_halvings", c.step.newton.max_halvings);
  }
  if (j.contains("solve")) {
    reject_unknown(j["solve"], "solve", {"lambda_fraction"});
    read(j["solve"], "lambda_fraction", c.solve_fraction);
  }
  if (j.contains("dynamics")) {
    const auto& d = j["dynamics"];
    reject_unknown(d, "dynamics", {"T", "dt", "sample", "delta", "lambda_fractions"});
    read(d, "T", c.dynamics.T);
    read(d, "dt", c.dynamics.dt);
    read(d, "sample", c.dynamics.sample);
    if (d.contains("delta")) {
      if (d["delta"].is_array())
        read(d, "delta", c.deltas);
      else
        c.deltas = {d["delta"].get<double>()};
    }
    read(d, "lambda_fractions", c.simulate_fractions);
  }
  if (j.contains("waveguide")) {
    const auto& w = j["waveguide"];
    reject_unknown(w, "waveguide", {"omega_over_c", "eps_L", "c"});
    read(w, "omega_over_c", c.waveguide.omega_over_c);
    read(w, "eps_L", c.waveguide.eps_L);
    read(w, "c", c.waveguide.c);
  }
  if (j.contains("output")) {
    reject_unknown(j["output"], "output", {"dir"});
    read(j["output"], "dir", c.out_dir);
  }
  read(j, "seed", c.seed);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  try {
    if (is_json) {
      j = json::parse(ss.str());
    } else {
      const toml::table tbl = toml::parse(ss.str(), path);
      std::ostringstream js;
      js << toml::json_formatter{tbl};
      j = json::parse(js.str());
    }
  } catch (const toml::parse_error& e) {
    throw DomainError("config: " + std::string(e.description()) + " in " + path);
  } catch (const json::exception& e) {
    throw DomainError("config: " + std::string(e.what()) + " in " + path);
  }
  return config_from_json(j);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = {{"b", c.model.b}, {"alpha", c.model.alpha}};
  j["grid"] = {{"R", c.R}, {"N", c.N}};
  j["trace"] = {{"lo", c.window_lo},
                {"hi", c.window_hi},
                {"points", c.step.points},
                {"fd_delta", c.step.fd_delta},
                {"amplitude_cap", c.step.amplitude_cap},
                {"min_step", c.step.min_step},
                {"grow", c.step.grow}};
  j["newton"] = {{"tol", c.step.newton.tol},
                 {"max_iters", c.step.newton.max_iters},
                 {"backtrack", c.step.newton.backtrack},
                 {"max_halvings", c.step.newton.max_halvings}};
  j["solve"] = {{"lambda_fraction", c.solve_fraction}};
  j["dynamics"] = {{"T", c.dynamics.T},
                   {"dt", c.dynamics.dt},
                   {"sample", c.dynamics.sample},
                   {"delta", c.deltas},
                   {"lambda_fractions", c.simulate_fractions}};
  j["waveguide"] = {{"omega_over_c", c.waveguide.omega_over_c}, {"eps_L", c.waveguide.eps_L}, {"c", c.waveguide.c}};
  j["output"] = {{"dir", c.out_dir}};
  j["seed"] = c.seed;
  return j;
}

void validate(const RunConfig& c) {
  if (auto v = c.model.violation()) throw DomainError(*v);
  if (!(c.R > 0.0)) throw DomainError("grid: R must be positive");
  if (c.N < 3 || c.N % 2 == 0) throw DomainError("grid: N must be odd and at least 3");
  if (!(0.0 < c.window_lo && c.window_lo < c.window_hi && c.window_hi < 1.0))
    throw DomainError("trace: need 0 < lo < hi < 1 (fractions of lambda_inf)");
  if (c.step.points < 2) throw DomainError("trace: points must be at least 2");
  if (!(c.step.fd_delta > 0.0 && c.step.amplitude_cap > 0.0 && c.step.min_step > 0.0 && c.step.grow >= 1.0))
    throw DomainError("trace: fd_delta, amplitude_cap, min_step must be positive and grow >= 1");
  if (!(c.step.newton.tol > 0.0 && c.step.newton.max_iters > 0 && c.step.newton.backtrack > 0.0 &&
        c.step.newton.backtrack < 1.0 && c.step.newton.max_halvings >= 0))
    throw DomainError("newton: need tol > 0, max_iters > 0, 0 < backtrack < 1, max_halvings >= 0");
  if (!(0.0 < c.solve_fraction && c.solve_fraction < 1.0)) throw DomainError("solve: lambda_fraction in (0, 1)");
  if (!(c.dynamics.T > 0.0 && c.dynamics.dt > 0.0 && c.dynamics.sample >= c.dynamics.dt))
    throw DomainError("dynamics: need T > 0 and sample >= dt > 0");
  if (c.deltas.empty()) throw DomainError("dynamics: delta list is empty");
  for (double d : c.deltas)
    if (!(d >= 0.0)) throw DomainError("dynamics: delta must be non-negative");
  for (double f : c.simulate_fractions)
    if (!(0.0 < f && f < 1.0)) throw DomainError("dynamics: lambda_fractions must lie in (0, 1)");
  if (!(c.waveguide.omega_over_c > 0.0 && c.waveguide.eps_L > 0.0 && c.waveguide.c > 0.0))
    throw DomainError("waveguide: omega_over_c, eps_L and c must be positive");
}

std::string config_hash(const RunConfig& c) {
  auto j = to_json(c);
  j.erase("output");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace satnls
