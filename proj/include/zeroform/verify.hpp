#pragma once

// The cross-check battery run by `zeroform verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "zeroform/io.hpp"

namespace zeroform {

struct VerifyConfig {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t random_models = 500;     // tension closed form
  std::size_t max_dim = 5;             // boundary dimensions for random models
  std::size_t zero_root_draws = 2000;
  std::size_t oracle_models = 50;
  std::size_t positivity_models = 500;
  std::size_t bitension_models = 40;
  std::size_t curvature_samples = 100;
  double grid_step = 0.25;             // m = n = 2 model grid
  double grid_range = 2.0;
};

VerifyConfig verify_config_from_json(const io::Json& j);

struct CheckResult {
  std::string key;
  std::string description;
  bool pass = true;
  std::size_t cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
};

std::vector<CheckResult> run_verify(const VerifyConfig& config);

io::Json to_json(const std::vector<CheckResult>& checks, const VerifyConfig& config);

}  // namespace zeroform
