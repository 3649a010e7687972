#include "irrepcore/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "irrepcore/errors.hpp"

namespace irrepcore::basis {

RadialKind parse_radial_kind(std::string_view name) {
  if (name == "gaussian") return RadialKind::gaussian;
  if (name == "reciprocal-bernstein") return RadialKind::reciprocal_bernstein;
  throw InvalidArgument("unknown radial basis kind \"" + std::string(name) + "\"");
}

double cutoff_envelope(double r, double cutoff) {
  const double t = r / cutoff;
  if (t >= 1.0) return 0.0;
  const double t3 = t * t * t;
  return 1.0 - t3 * (10.0 - 15.0 * t + 6.0 * t * t);
}

std::vector<double> radial_basis(double r, const RadialBasisSpec& spec) {
  if (!(r >= 0.0)) throw InvalidArgument("radial_basis: distance must be nonnegative");
  if (spec.count < 1) throw InvalidArgument("radial_basis: need at least one basis function");
  if (!(spec.cutoff > 0.0)) throw InvalidArgument("radial_basis: cutoff must be positive");
  const int k_count = spec.count;
  std::vector<double> values(static_cast<std::size_t>(k_count), 0.0);
  const double envelope = cutoff_envelope(r, spec.cutoff);
  if (envelope == 0.0) return values;

  switch (spec.kind) {
    case RadialKind::gaussian: {
      if (k_count == 1) {
        values[0] = envelope;
        break;
      }
      const double spacing = spec.cutoff / (k_count - 1);
      for (int k = 0; k < k_count; ++k) {
        const double u = (r - k * spacing) / spacing;
        values[k] = std::exp(-u * u) * envelope;
      }
      break;
    }
    case RadialKind::reciprocal_bernstein: {
      if (!(spec.gamma > 0.0)) throw InvalidArgument("radial_basis: gamma must be positive");
      const double x = std::exp(-spec.gamma * r);
      const int n = k_count - 1;
      double binom = 1.0;
      for (int k = 0; k <= n; ++k) {
        values[k] = binom * std::pow(x, k) * std::pow(1.0 - x, n - k) * envelope;
        binom = binom * (n - k) / (k + 1);
      }
      break;
    }
  }
  return values;
}

irreps::IrrepFeatures featurize(const sh::Vec3& r, const RadialBasisSpec& spec, int max_degree) {
  if (max_degree < 0) throw InvalidArgument("featurize: negative degree");
  const double norm2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
  const double distance = std::sqrt(norm2);
  const auto radial = radial_basis(distance, spec);
  irreps::IrrepFeatures x(irreps::Layout::compact, max_degree, spec.count);
  if (norm2 <= sh::kZeroNormSquared) {
    const double y00 = 0.5 / std::sqrt(std::numbers::pi);
    for (int k = 0; k < spec.count; ++k) x(0, 0, k) = radial[k] * y00;
    return x;
  }
  const auto y = sh::eval_sh(r, max_degree);
  for (int i = 0; i < sh::num_components(max_degree); ++i)
    for (int k = 0; k < spec.count; ++k) x(0, i, k) = radial[k] * y.values()[i];
  return x;
}

}  // namespace irrepcore::basis
