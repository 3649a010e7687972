#include <doctest.h>

#include <cmath>
#include <numeric>

#include "irrepcore/basis.hpp"
#include "irrepcore/errors.hpp"

using namespace irrepcore;
using namespace irrepcore::basis;
using doctest::Approx;

TEST_CASE("kinds parse by name") {
  CHECK(parse_radial_kind("gaussian") == RadialKind::gaussian);
  CHECK(parse_radial_kind("reciprocal-bernstein") == RadialKind::reciprocal_bernstein);
  CHECK_THROWS_AS(parse_radial_kind("bessel"), InvalidArgument);
}

TEST_CASE("envelope") {
  CHECK(cutoff_envelope(0.0, 5.0) == 1.0);
  CHECK(cutoff_envelope(5.0, 5.0) == 0.0);
  CHECK(cutoff_envelope(7.0, 5.0) == 0.0);
  CHECK(cutoff_envelope(2.5, 5.0) == Approx(0.5));
  for (double r = 0.0; r < 5.0; r += 0.37) {
    const double e = cutoff_envelope(r, 5.0);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("radial values vanish from the cutoff on and stay bounded") {
  for (RadialKind kind : {RadialKind::gaussian, RadialKind::reciprocal_bernstein}) {
    const RadialBasisSpec spec{6, kind, 4.0, 0.8};
    for (double r : {4.0, 4.5, 100.0}) {
      const auto v = radial_basis(r, spec);
      REQUIRE(v.size() == 6);
      for (double a : v) CHECK(a == 0.0);
    }
    for (double r = 0.0; r < 4.0; r += 0.13)
      for (double a : radial_basis(r, spec)) {
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
      }
  }
}

TEST_CASE("gaussian values at the origin") {
  const RadialBasisSpec spec{5, RadialKind::gaussian, 4.0};
  const auto v = radial_basis(0.0, spec);
  // centers at k * spacing with width equal to the spacing
  for (int k = 0; k < 5; ++k) CHECK(v[k] == Approx(std::exp(-static_cast<double>(k * k))).epsilon(1e-15));

  const RadialBasisSpec single{1, RadialKind::gaussian, 3.0};
  for (double r : {0.0, 1.0, 2.9}) CHECK(radial_basis(r, single)[0] == Approx(cutoff_envelope(r, 3.0)));
}

TEST_CASE("Bernstein polynomials sum to the envelope") {
  const RadialBasisSpec spec{7, RadialKind::reciprocal_bernstein, 5.0, 0.6};
  for (double r = 0.05; r < 5.0; r += 0.41) {
    const auto v = radial_basis(r, spec);
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == Approx(cutoff_envelope(r, 5.0)).epsilon(1e-13));
  }
}

TEST_CASE("smooth at the cutoff") {
  const double h = 1e-6;
  for (RadialKind kind : {RadialKind::gaussian, RadialKind::reciprocal_bernstein}) {
    const RadialBasisSpec spec{4, kind, 5.0};
    const auto inside = radial_basis(5.0 - h, spec);
    const auto further = radial_basis(5.0 - 2 * h, spec);
    for (std::size_t k = 0; k < inside.size(); ++k) {
      CHECK(std::abs(inside[k]) < 1e-12);
      // one-sided first difference goes to zero with the envelope's derivative
      CHECK(std::abs((inside[k] - further[k]) / h) < 1e-8);
    }
  }
}

TEST_CASE("invalid radial input") {
  CHECK_THROWS_AS(radial_basis(-0.1, {}), InvalidArgument);
  CHECK_THROWS_AS(radial_basis(std::nan(""), {}), InvalidArgument);
  CHECK_THROWS_AS(radial_basis(1.0, {0, RadialKind::gaussian, 5.0}), InvalidArgument);
  CHECK_THROWS_AS(radial_basis(1.0, {3, RadialKind::gaussian, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(radial_basis(1.0, {3, RadialKind::reciprocal_bernstein, 5.0, -1.0}), InvalidArgument);
}

TEST_CASE("featurize") {
  const RadialBasisSpec spec{3, RadialKind::gaussian, 5.0};

  const auto up = featurize({0, 0, 2}, spec, 2);
  CHECK(up.layout() == irreps::Layout::compact);
  CHECK(up.num_features() == 3);
  const auto radial = radial_basis(2.0, spec);
  const auto y = sh::eval_sh({0, 0, 1}, 2);
  for (int l = 0; l <= 2; ++l)
    for (int m = -l; m <= l; ++m)
      for (int k = 0; k < 3; ++k) CHECK(up(0, sh::flat_index(l, m), k) == Approx(radial[k] * y(l, m)).epsilon(1e-15));

  const auto origin = featurize({0, 0, 0}, spec, 2);
  const auto at_zero = radial_basis(0.0, spec);
  for (int k = 0; k < 3; ++k) CHECK(origin(0, 0, k) == Approx(at_zero[k] * y(0, 0)));
  for (int i = 1; i < 9; ++i)
    for (int k = 0; k < 3; ++k) CHECK(origin(0, i, k) == 0.0);

  const sh::Vec3 r{0.4, -1.1, 0.9};
  const auto a = featurize(r, spec, 3);
  const auto b = featurize({-r[0], -r[1], -r[2]}, spec, 3);
  for (int l = 0; l <= 3; ++l)
    for (int o = 0; o <= 2 * l; ++o)
      for (int k = 0; k < 3; ++k) CHECK(b(0, l * l + o, k) == (l % 2 == 0 ? 1.0 : -1.0) * a(0, l * l + o, k));

  CHECK_THROWS_AS(featurize(r, spec, -1), InvalidArgument);
}
