#include "irrepcore/suites.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "irrepcore/basis.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/layers.hpp"
#include "irrepcore/rotations.hpp"

namespace irrepcore::check {

namespace {

using irreps::IrrepFeatures;
using irreps::Layout;
using irreps::Parity;
using rotations::EquivarianceReport;
using rotations::FeatureShape;

constexpr const char* kNegativeControl = "broken-demo";

const std::vector<std::string>& names() {
  static const std::vector<std::string> all = {"sh",       "couple",     "dense",  "tensor",   "tensor_dense",
                                               "featurize", "activation", "wigner", kNegativeControl};
  return all;
}

void randomize(layers::DenseParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < p.bias().size(); ++j) p.bias()(j) = normal(rng);
}

void randomize(layers::TensorParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (auto& w : p.weights())
    for (Eigen::Index f = 0; f < w.size(); ++f) w(f) = normal(rng);
}

sh::Vec3 vector_of(const IrrepFeatures& x, int feature) {
  return {x(0, 1, feature), x(0, 2, feature), x(0, 3, feature)};
}

EquivarianceReport wigner_suite(const SuiteConfig& cfg, const cgc::CgcTable& table) {
  EquivarianceReport report;
  report.op = "wigner";
  report.trials = cfg.trials;
  report.seed = cfg.seed;
  auto record = [&](const std::string& key, double dev) {
    auto& slot = report.per_block[key];
    slot = std::max(slot, dev);
    report.max_dev = std::max(report.max_dev, dev);
  };
  for (int t = 0; t < cfg.trials; ++t) {
    auto rng = rotations::trial_rng(cfg.seed, t);
    const auto g1 = rotations::random_rotation(rng);
    const auto g2 = rotations::random_rotation(rng);
    const auto d1 = rotations::wigner_d(g1, cfg.max_degree, table);
    const auto d2 = rotations::wigner_d(g2, cfg.max_degree, table);
    const auto d12 = rotations::wigner_d(g1.compose(g2), cfg.max_degree, table);
    for (int l = 0; l <= cfg.max_degree; ++l) {
      const auto key = std::to_string(l);
      record(key, (d12[l] - d1[l] * d2[l]).cwiseAbs().maxCoeff());
      record(key, (d1[l] * d1[l].transpose() - Eigen::MatrixXd::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff());
    }
    if (cfg.max_degree >= 1) record("1", (d1[1] - g1.rotation()).cwiseAbs().maxCoeff());
  }
  return report;
}

}  // namespace

std::vector<std::string> suite_names() { return names(); }

std::vector<std::string> expand_suite(std::string_view name) {
  if (name == "all") {
    std::vector<std::string> out;
    for (const auto& n : names())
      if (n != kNegativeControl) out.push_back(n);
    return out;
  }
  if (std::find(names().begin(), names().end(), name) == names().end())
    throw InvalidArgument("unknown suite \"" + std::string(name) + "\"");
  return {std::string(name)};
}

EquivarianceReport run_suite(std::string_view name, const SuiteConfig& cfg, const cgc::CgcTable& table) {
  const int big_l = cfg.max_degree;
  const int f = cfg.num_features;
  if (big_l < 1 || f < 1) throw InvalidArgument("run_suite: need L >= 1 and F >= 1");
  if (big_l > table.max_degree()) throw CapacityError("run_suite: coupling table too small for L");
  std::mt19937_64 param_rng(cfg.seed ^ 0x5eed'0f'9a7a'3e7eULL);
  const std::string op_name(name);
  const FeatureShape general{Layout::general, big_l, f};
  const FeatureShape vectors{Layout::compact, 1, f};

  if (name == "sh") {
    auto op = [big_l, f](const IrrepFeatures& x) {
      IrrepFeatures y(Layout::compact, big_l, f);
      for (int k = 0; k < f; ++k) {
        const auto values = sh::eval_sh(vector_of(x, k), big_l).values();
        for (std::size_t i = 0; i < values.size(); ++i) y(0, static_cast<int>(i), k) = values[i];
      }
      return y;
    };
    return rotations::check_equivariance(op_name, op, vectors, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "couple") {
    // u from channel k, v from channel k+1, all degree/parity combinations.
    auto op = [&table, big_l, f](const IrrepFeatures& x) {
      IrrepFeatures y(Layout::general, big_l, f);
      for (int k = 0; k < f; ++k) {
        const int k2 = (k + 1) % f;
        for (int a = 0; a <= big_l; ++a)
          for (Parity alpha : {Parity::even, Parity::odd})
            for (int b = 0; b <= big_l; ++b)
              for (Parity beta : {Parity::even, Parity::odd}) {
                const Eigen::VectorXd u = x.block(a, alpha).col(k);
                const Eigen::VectorXd v = x.block(b, beta).col(k2);
                for (int c = std::abs(a - b); c <= std::min(a + b, big_l); ++c) {
                  const auto w = cgc::couple(table, a, std::span<const double>(u.data(), u.size()), b,
                                             std::span<const double>(v.data(), v.size()), c);
                  auto out = y.block(c, alpha * beta);
                  for (int m = 0; m <= 2 * c; ++m) out(m, k) += w[m];
                }
              }
      }
      return y;
    };
    return rotations::check_equivariance(op_name, op, general, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "dense") {
    auto p = layers::dense_init(cfg.seed, big_l, f, f, Layout::general);
    randomize(p, param_rng);
    auto op = [p](const IrrepFeatures& x) { return layers::dense_apply(p, x); };
    return rotations::check_equivariance(op_name, op, general, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "tensor") {
    layers::TensorParams p({Layout::general, big_l, Layout::general, big_l, big_l, f});
    randomize(p, param_rng);
    auto op = [p, &table, big_l, f](const IrrepFeatures& x) {
      // second operand: x with channels rotated by one, so the two factors differ
      IrrepFeatures y(x.layout(), x.max_degree(), f);
      for (int row = 0; row < x.parity_rows(); ++row)
        for (int i = 0; i < sh::num_components(big_l); ++i)
          for (int k = 0; k < f; ++k) y(row, i, k) = x(row, i, (k + 1) % f);
      return layers::tensor_apply(p, table, x, y, big_l);
    };
    return rotations::check_equivariance(op_name, op, general, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "tensor_dense") {
    auto p1 = layers::dense_init(cfg.seed + 1, big_l, f, f, Layout::general);
    auto p2 = layers::dense_init(cfg.seed + 2, big_l, f, f, Layout::general);
    randomize(p1, param_rng);
    randomize(p2, param_rng);
    layers::TensorParams pt({Layout::general, big_l, Layout::general, big_l, big_l, f});
    randomize(pt, param_rng);
    auto op = [p1, p2, pt, &table, big_l](const IrrepFeatures& x) {
      return layers::tensor_dense_apply(p1, p2, pt, table, x, big_l);
    };
    return rotations::check_equivariance(op_name, op, general, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "featurize") {
    const basis::RadialBasisSpec spec{f, basis::RadialKind::gaussian, 6.0, 1.0};
    auto op = [spec, big_l](const IrrepFeatures& x) { return basis::featurize(vector_of(x, 0), spec, big_l); };
    return rotations::check_equivariance(op_name, op, vectors, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "activation") {
    auto op = [](const IrrepFeatures& x) { return layers::activation(x, "swish"); };
    return rotations::check_equivariance(op_name, op, general, big_l, cfg.trials, cfg.seed, table);
  }
  if (name == "wigner") return wigner_suite(cfg, table);
  if (name == kNegativeControl) {
    // Flips the x component of every vector: not equivariant.
    auto op = [](const IrrepFeatures& x) {
      IrrepFeatures y = x;
      for (int k = 0; k < y.num_features(); ++k) y(0, 1, k) = -y(0, 1, k);
      return y;
    };
    return rotations::check_equivariance(op_name, op, {Layout::compact, big_l, f}, big_l, cfg.trials, cfg.seed,
                                         table);
  }
  throw InvalidArgument("unknown suite \"" + op_name + "\"");
}

}  // namespace irrepcore::check
