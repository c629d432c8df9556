#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "satnls/curve.hpp"
#include "satnls/dynamics.hpp"
#include "satnls/model.hpp"
#include "satnls/waveguide.hpp"

namespace satnls {

struct RunConfig {
  PrototypeParams model;
  double R = 40.0;
  std::size_t N = 4001;

  // trace window as fractions of lambda_inf
  double window_lo = 0.05;
  double window_hi = 0.95;
  StepConfig step;

  double solve_fraction = 0.5;  // `solve` target, fraction of lambda_inf

  ExperimentConfig dynamics;
  std::vector<double> deltas{1e-3};
  std::vector<double> simulate_fractions{0.3, 0.5, 0.8};

  WaveguideParams waveguide;

  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

/// Reads a TOML (.toml) or JSON (.json) config. Missing keys keep their
/// defaults; unknown keys and broken invariants throw DomainError.
RunConfig load_config(const std::string& path);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Throws DomainError naming the violated invariant.
void validate(const RunConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical JSON dump (the output
/// directory is excluded, the seed is not).
std::string config_hash(const RunConfig& cfg);

}  // namespace satnls
