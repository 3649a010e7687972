#include "irrepcore/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <json.hpp>
#include <random>
#include <stdexcept>

#include "irrepcore/errors.hpp"
#include "irrepcore/rotations.hpp"

namespace irrepcore::rotations {

using irreps::IrrepFeatures;
using irreps::Parity;

std::string EquivarianceReport::to_json() const {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["trials"] = trials;
  j["seed"] = seed;
  j["max_dev"] = max_dev;
  j["per_block"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : per_block) j["per_block"][key] = value;
  return j.dump();
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

IrrepFeatures random_features(const FeatureShape& shape, std::mt19937_64& rng) {
  IrrepFeatures x(shape.layout, shape.max_degree, shape.num_features);
  std::normal_distribution<double> normal;
  for (auto& v : x.data()) v = normal(rng);
  return x;
}

EquivarianceReport check_equivariance(const std::string& name, const FeatureOp& op, const FeatureShape& input,
                                      int out_max_degree, int trials, std::uint64_t seed,
                                      const cgc::CgcTable& table) {
  if (trials < 1) throw InvalidArgument("check_equivariance: need at least one trial");
  EquivarianceReport report;
  report.op = name;
  report.trials = trials;
  report.seed = seed;
  const int degree = std::max(input.max_degree, out_max_degree);

  for (int t = 0; t < trials; ++t) {
    try {
      auto rng = trial_rng(seed, t);
      const IrrepFeatures x = random_features(input, rng);
      const GroupElement rotation = random_rotation(rng);
      const WignerDSet d = wigner_d(rotation, degree, table);
      const IrrepFeatures fx = op(x);
      if (fx.max_degree() > degree) throw InvalidArgument("op output degree exceeds the declared output degree");
      for (int sign : {+1, -1}) {
        const GroupElement g(rotation.rotation(), sign);
        const IrrepFeatures lhs = op(irreps::transform(x, g, d));
        const IrrepFeatures rhs = irreps::transform(fx, g, d);
        if (lhs.layout() != rhs.layout() || lhs.max_degree() != rhs.max_degree() ||
            lhs.num_features() != rhs.num_features())
          throw InvalidArgument("op output shape depends on the input orientation");
        for (int l = 0; l <= lhs.max_degree(); ++l)
          for (Parity p : {Parity::even, Parity::odd}) {
            if (!lhs.stores(l, p)) continue;
            const double dev = (lhs.block(l, p) - rhs.block(l, p)).cwiseAbs().maxCoeff();
            auto& slot = report.per_block[std::to_string(l) + (p == Parity::even ? "+" : "-")];
            slot = std::max(slot, dev);
            report.max_dev = std::max(report.max_dev, dev);
          }
      }
    } catch (...) {
      std::throw_with_nested(std::runtime_error("equivariance check \"" + name + "\" failed in trial " +
                                                std::to_string(t)));
    }
  }
  return report;
}

}  // namespace irrepcore::rotations
