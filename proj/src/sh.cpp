#include "irrepcore/sh.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "irrepcore/errors.hpp"
#include "sh_extended.hpp"

namespace irrepcore::sh {

namespace {

using Int = __int128;

Int factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;  // exact at every step
  return b;
}

long double pi_scale(int l, int m) {
  const long double ratio =
      static_cast<long double>(factorial(l - m)) / static_cast<long double>(factorial(l + m));
  return std::sqrt(ratio) / std::ldexp(1.0L, l);
}

PiPolynomial make_pi(int l, int m) {
  PiPolynomial p;
  p.degree = l;
  p.order = m;
  for (int k = 0; k <= (l - m) / 2; ++k) {
    Int term = binomial(l, k) * binomial(2 * l - 2 * k, l) * (factorial(l - 2 * k) / factorial(l - 2 * k - m));
    p.numerators.push_back(k % 2 == 0 ? term : -term);
  }
  p.scale = static_cast<double>(pi_scale(l, m));
  return p;
}

struct PiTable {
  std::vector<std::vector<PiPolynomial>> polys;
  // scaled coefficients per (l, m) in extended precision
  std::vector<std::vector<std::vector<long double>>> coeffs;

  PiTable() {
    polys.resize(kHardMaxDegree + 1);
    coeffs.resize(kHardMaxDegree + 1);
    for (int l = 0; l <= kHardMaxDegree; ++l) {
      for (int m = 0; m <= l; ++m) {
        polys[l].push_back(make_pi(l, m));
        const long double scale = pi_scale(l, m);
        auto& c = coeffs[l].emplace_back();
        for (const Int numerator : polys[l][m].numerators) c.push_back(static_cast<long double>(numerator) * scale);
      }
    }
  }
};

const PiTable& pi_table() {
  static const PiTable table;
  return table;
}

void check_degree(int max_degree) {
  if (max_degree < 0) throw InvalidArgument("negative degree " + std::to_string(max_degree));
  if (max_degree > kHardMaxDegree)
    throw CapacityError("degree " + std::to_string(max_degree) + " exceeds the hard maximum " +
                        std::to_string(kHardMaxDegree));
}

double squared_norm(const Vec3& r) { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2]; }

// Homogeneous evaluation: degree-l block is |r|^l Y_l^m(r/|r|).
std::vector<long double> solid_values(const std::array<long double, 3>& r, int max_degree) {
  using Real = long double;
  const auto& table = pi_table();
  const Real x = r[0], y = r[1], z = r[2];
  const Real r2 = x * x + y * y + z * z;

  // Re/Im of (x + iy)^m by the rotation recurrence.
  std::vector<Real> re(max_degree + 1), im(max_degree + 1);
  re[0] = 1;
  im[0] = 0;
  for (int m = 1; m <= max_degree; ++m) {
    re[m] = x * re[m - 1] - y * im[m - 1];
    im[m] = x * im[m - 1] + y * re[m - 1];
  }
  std::vector<Real> zpow(max_degree + 1), r2pow(max_degree / 2 + 1);
  zpow[0] = 1;
  for (int i = 1; i <= max_degree; ++i) zpow[i] = zpow[i - 1] * z;
  r2pow[0] = 1;
  for (std::size_t i = 1; i < r2pow.size(); ++i) r2pow[i] = r2pow[i - 1] * r2;

  std::vector<Real> out(num_components(max_degree));
  for (int l = 0; l <= max_degree; ++l) {
    const Real norm = std::sqrt((2 * l + 1) / (4 * std::numbers::pi_v<Real>));
    for (int m = 0; m <= l; ++m) {
      const auto& c = table.coeffs[l][m];
      Real pi = 0;
      for (std::size_t k = 0; k < c.size(); ++k) pi += c[k] * r2pow[k] * zpow[l - 2 * k - m];
      if (m == 0) {
        out[flat_index(l, 0)] = norm * pi;
      } else {
        const Real a = norm * std::numbers::sqrt2_v<Real> * pi;
        out[flat_index(l, m)] = a * re[m];
        out[flat_index(l, -m)] = a * im[m];
      }
    }
  }
  return out;
}

// Evaluated in extended precision: the alternating Pi sums lose about
// l/3 digits in double, which exceeds 1e-12 above degree 12.
std::vector<double> rounded_solid_values(const std::array<long double, 3>& r, int max_degree) {
  const auto ext = solid_values(r, max_degree);
  return {ext.begin(), ext.end()};
}

}  // namespace

std::vector<long double> detail::solid_values_extended(const std::array<long double, 3>& r, int max_degree) {
  check_degree(max_degree);
  return solid_values(r, max_degree);
}

ShVector::ShVector(int max_degree, std::vector<double> values)
    : max_degree_(max_degree), values_(std::move(values)) {
  if (max_degree_ < 0 || static_cast<int>(values_.size()) != num_components(max_degree_))
    throw InvalidArgument("ShVector: expected " + std::to_string(num_components(max_degree_)) + " values, got " +
                          std::to_string(values_.size()));
}

std::span<const double> ShVector::block(int l) const {
  if (l < 0 || l > max_degree_) throw InvalidArgument("ShVector::block: degree out of range");
  return std::span<const double>(values_).subspan(l * l, 2 * l + 1);
}

double PiPolynomial::coefficient(std::size_t k) const {
  return static_cast<double>(static_cast<long double>(numerators.at(k)) * static_cast<long double>(scale));
}

double PiPolynomial::operator()(double z, double r_squared) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < numerators.size(); ++k)
    sum += coefficient(k) * std::pow(r_squared, static_cast<double>(k)) *
           std::pow(z, static_cast<double>(degree - 2 * static_cast<int>(k) - order));
  return sum;
}

const PiPolynomial& pi_polynomial(int l, int m) {
  check_degree(l);
  if (m < 0 || m > l) throw InvalidArgument("pi_polynomial: need 0 <= m <= l");
  return pi_table().polys[l][m];
}

ShVector eval_sh(const Vec3& r, int max_degree) {
  check_degree(max_degree);
  const double n2 = squared_norm(r);
  if (n2 <= kZeroNormSquared) throw InvalidArgument("eval_sh: spherical harmonics are undefined at the origin");
  const std::array<long double, 3> e{r[0], r[1], r[2]};
  const long double inv = 1.0L / std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  return ShVector(max_degree, rounded_solid_values({e[0] * inv, e[1] * inv, e[2] * inv}, max_degree));
}

double eval_sh_single(int l, int m, const Vec3& r) {
  if (l < 0 || m < -l || m > l)
    throw InvalidArgument("eval_sh_single: invalid (l, m) = (" + std::to_string(l) + ", " + std::to_string(m) + ")");
  return eval_sh(r, l)(l, m);
}

ShVector eval_solid_sh(const Vec3& r, int max_degree) {
  check_degree(max_degree);
  return ShVector(max_degree, rounded_solid_values({r[0], r[1], r[2]}, max_degree));
}

}  // namespace irrepcore::sh
