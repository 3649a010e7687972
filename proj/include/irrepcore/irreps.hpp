#pragma once

// Irrep features of shape (P, (L+1)^2, F).
//
// P = 2 (general layout): row 0 holds the even-parity components, row 1 the
// odd-parity ones, for every degree. P = 1 (compact layout): only proper
// tensors are stored, i.e. the degree-l block implicitly has parity (-1)^l
// and all pseudotensor components are zero.
//
// Storage is parity-major, then degree block in harmonic ordering, then
// feature channel, so each (l, p) block is a contiguous row-major
// (2l+1) x F matrix.

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "irrepcore/rotations.hpp"

namespace irrepcore::irreps {

enum class Layout { compact, general };

enum class Parity : int { even = +1, odd = -1 };

constexpr Parity natural_parity(int l) { return l % 2 == 0 ? Parity::even : Parity::odd; }
constexpr Parity operator*(Parity a, Parity b) {
  return static_cast<int>(a) * static_cast<int>(b) > 0 ? Parity::even : Parity::odd;
}

using BlockMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class IrrepFeatures {
 public:
  /// Zero features.
  IrrepFeatures(Layout layout, int max_degree, int num_features);
  /// Takes ownership of `data` in storage order. Throws InvalidArgument on size mismatch.
  IrrepFeatures(Layout layout, int max_degree, int num_features, std::vector<double> data);

  Layout layout() const { return layout_; }
  int max_degree() const { return max_degree_; }
  int num_features() const { return num_features_; }
  int parity_rows() const { return layout_ == Layout::general ? 2 : 1; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double operator()(int row, int index, int feature) const { return data_[offset(row, index, feature)]; }
  double& operator()(int row, int index, int feature) { return data_[offset(row, index, feature)]; }

  /// Whether the (l, parity) block is stored in this layout.
  bool stores(int l, Parity parity) const;

  /// Mutable / read-only view of a stored (l, parity) block as a (2l+1) x F matrix.
  /// Throws InvalidArgument if the block is not stored.
  Eigen::Map<BlockMatrix> block(int l, Parity parity);
  Eigen::Map<const BlockMatrix> block(int l, Parity parity) const;

  bool operator==(const IrrepFeatures&) const = default;

 private:
  std::size_t offset(int row, int index, int feature) const {
    return (static_cast<std::size_t>(row) * components_ + index) * num_features_ + feature;
  }
  int row_of(int l, Parity parity) const;

  Layout layout_;
  int max_degree_;
  int num_features_;
  std::size_t components_;
  std::vector<double> data_;
};

/// Copy of the (l, parity) block with shape (2l+1) x F. In the compact
/// layout, pseudotensor blocks come back as zeros. Throws InvalidArgument for l > L.
BlockMatrix slice_degree_parity(const IrrepFeatures& x, int l, Parity parity);

/// Embeds compact features into the general layout; identity on general input.
IrrepFeatures to_general(const IrrepFeatures& x);

/// Drops the pseudotensor rows. Throws PreconditionError naming the first
/// offending (l, parity) block if any of them exceeds `tolerance` in magnitude.
IrrepFeatures to_compact(const IrrepFeatures& x, double tolerance = 1e-12);

/// Applies g: every (l, p) block is multiplied by D^l(R), and odd-parity
/// blocks additionally by g.sign(). Throws InvalidArgument if d is too small.
IrrepFeatures transform(const IrrepFeatures& x, const rotations::GroupElement& g, const rotations::WignerDSet& d);

/// Largest absolute componentwise difference. Throws InvalidArgument on shape mismatch.
double max_abs_difference(const IrrepFeatures& a, const IrrepFeatures& b);

/// "IRRF", u32 version, u32 P, u32 L, u32 F, float64 data; little endian.
void write_blob(std::ostream& out, const IrrepFeatures& x);
IrrepFeatures read_blob(std::istream& in);

inline constexpr std::uint32_t kBlobVersion = 1;

}  // namespace irrepcore::irreps
