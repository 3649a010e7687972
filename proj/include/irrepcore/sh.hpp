#pragma once

// Real spherical harmonics in the ordering m = l, -l, l-1, -l+1, ..., 0.
//
// For l = 1 the three components are proportional to (x, y, z), so a plain
// Cartesian vector is already a degree-1 irrep in this basis.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace irrepcore::sh {

using Vec3 = std::array<double, 3>;

/// Squared-norm threshold below which a vector counts as the origin.
inline constexpr double kZeroNormSquared = 1e-30;

/// Number of components for all degrees 0..max_degree.
constexpr int num_components(int max_degree) { return (max_degree + 1) * (max_degree + 1); }

/// Position of order m inside its degree block.
constexpr int order_offset(int l, int m) { return m >= 0 ? 2 * (l - m) : 2 * (l + m) + 1; }

/// Flat index of (l, m) in a concatenation of degree blocks 0..L.
constexpr int flat_index(int l, int m) { return l * l + order_offset(l, m); }

/// Order stored at position `offset` of the degree-l block.
constexpr int order_at(int l, int offset) { return offset % 2 == 0 ? l - offset / 2 : -(l - offset / 2); }

/// Values of Y_l^m for l = 0..max_degree, blocks concatenated.
class ShVector {
 public:
  ShVector(int max_degree, std::vector<double> values);

  int max_degree() const { return max_degree_; }
  std::span<const double> values() const& { return values_; }
  /// On a temporary, hands over the storage instead of a dangling view.
  std::vector<double> values() && { return std::move(values_); }
  std::span<const double> block(int l) const;
  double operator()(int l, int m) const { return values_[flat_index(l, m)]; }

 private:
  int max_degree_;
  std::vector<double> values_;
};

/// The polynomial Pi_l^m(z) in monomials r^{2k} z^{l-2k-m}, k = 0..floor((l-m)/2).
///
/// Term k carries the exact rational (-1)^k C(l,k) C(2l-2k,l) (l-2k)!/(l-2k-m)! / 2^l;
/// the numerators are held as 128-bit integers, which is enough for l <= 15.
struct PiPolynomial {
  int degree = 0;
  int order = 0;
  std::vector<__int128> numerators;
  // sqrt((l-m)!/(l+m)!) / 2^l
  double scale = 1.0;

  std::size_t num_terms() const { return numerators.size(); }
  /// Coefficient of term k as a double, scale included.
  double coefficient(std::size_t k) const;
  /// Evaluates at a point given z and r^2 = x^2 + y^2 + z^2.
  double operator()(double z, double r_squared) const;
};

/// Exact Pi_l^m (l <= 15, 0 <= m <= l). Cached after first use.
const PiPolynomial& pi_polynomial(int l, int m);

/// All Y_l^m(r/|r|), l <= max_degree. Throws InvalidArgument for r = 0.
ShVector eval_sh(const Vec3& r, int max_degree);

/// Single Y_l^m(r/|r|). Throws InvalidArgument for |m| > l or r = 0.
double eval_sh_single(int l, int m, const Vec3& r);

/// Solid harmonics |r|^l Y_l^m(r/|r|); defined everywhere including r = 0.
ShVector eval_solid_sh(const Vec3& r, int max_degree);

}  // namespace irrepcore::sh
