#pragma once

// Featurization of displacement vectors as a_k(|r|) * Y_l^m(r/|r|).

#include <string_view>
#include <vector>

#include "irrepcore/irreps.hpp"
#include "irrepcore/sh.hpp"

namespace irrepcore::basis {

enum class RadialKind { gaussian, reciprocal_bernstein };

/// Parses "gaussian" / "reciprocal-bernstein"; throws InvalidArgument otherwise.
RadialKind parse_radial_kind(std::string_view name);

struct RadialBasisSpec {
  int count = 8;
  RadialKind kind = RadialKind::gaussian;
  double cutoff = 5.0;
  /// Decay rate of x = exp(-gamma r) for the reciprocal Bernstein family.
  double gamma = 1.0;
};

/// Smooth cutoff 1 - 10t^3 + 15t^4 - 6t^5 with t = r / cutoff, and 0 for t >= 1.
/// Value, first and second derivative vanish at the cutoff.
double cutoff_envelope(double r, double cutoff);

/// K basis values times the envelope.
///
/// gaussian: exp(-((r - mu_k)/w)^2) with mu_k = k * cutoff / (K - 1) and
/// w = cutoff / (K - 1); a single function (K = 1) is the constant 1, so the
/// result is the envelope alone.
///
/// reciprocal-bernstein: C(K-1, k) x^k (1 - x)^(K-1-k) with x = exp(-gamma r).
///
/// Throws InvalidArgument for r < 0 or invalid basis settings.
std::vector<double> radial_basis(double r, const RadialBasisSpec& spec);

/// Compact features (F = K): channel k, degree l holds a_k(|r|) Y_l^m(r/|r|).
/// At the origin only the scalars a_k(0) Y_0^0 are nonzero.
irreps::IrrepFeatures featurize(const sh::Vec3& r, const RadialBasisSpec& spec, int max_degree);

}  // namespace irrepcore::basis
