#pragma once

// Randomized equivariance checks: compares op(g . x) with g . op(x) over
// Haar-random rotations, each tried with and without the inversion.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "irrepcore/cgc.hpp"
#include "irrepcore/irreps.hpp"

namespace irrepcore::rotations {

struct FeatureShape {
  irreps::Layout layout;
  int max_degree;
  int num_features;
};

using FeatureOp = std::function<irreps::IrrepFeatures(const irreps::IrrepFeatures&)>;

struct EquivarianceReport {
  std::string op;
  int trials = 0;
  std::uint64_t seed = 0;
  double max_dev = 0.0;
  /// Keyed by "<l><+|->" for feature blocks (other checks may use their own keys).
  std::map<std::string, double> per_block;

  bool passed(double tolerance) const { return max_dev < tolerance; }
  /// One JSON object: {"op", "trials", "seed", "max_dev", "per_block"}.
  std::string to_json() const;
};

/// Per-trial generator: trial t draws from a stream seeded with (seed, t), so
/// trials are independent of each other and of evaluation order.
std::mt19937_64 trial_rng(std::uint64_t seed, int trial);

/// Features with independent standard-normal entries.
irreps::IrrepFeatures random_features(const FeatureShape& shape, std::mt19937_64& rng);

/// Max over trials and both reflection signs of |op(g x) - g op(x)|_max.
/// Exceptions from `op` are rethrown nested inside a std::runtime_error that
/// names the trial.
EquivarianceReport check_equivariance(const std::string& name, const FeatureOp& op, const FeatureShape& input,
                                      int out_max_degree, int trials, std::uint64_t seed,
                                      const cgc::CgcTable& table);

}  // namespace irrepcore::rotations
