#pragma once

// Equivariant layers on irrep features: gated activations, dense layers,
// tensor (coupling) layers and their tensor-dense composition.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irrepcore/cgc.hpp"
#include "irrepcore/irreps.hpp"

namespace irrepcore::layers {

using irreps::IrrepFeatures;
using irreps::Layout;
using irreps::Parity;

// ---------------------------------------------------------------------------
// Activations

/// An activation sigma written as sigma(x) = gate(x) * x. `reference` is the
/// ordinary scalar function, used to check the gate.
struct Activation {
  std::string name;
  std::function<double(double)> gate;
  std::function<double(double)> reference;
};

/// Built-in kinds: relu, leaky_relu, swish (alias silu), gelu, identity.
std::span<const Activation> activation_registry();

/// Throws InvalidArgument for unknown names.
const Activation& find_activation(std::string_view name);

/// Multiplies every component of channel i by gate(scalar_i), where scalar_i is
/// the even l = 0 component of that channel.
IrrepFeatures activation(const IrrepFeatures& x, const std::function<double(double)>& gate);
IrrepFeatures activation(const IrrepFeatures& x, std::string_view kind);

// ---------------------------------------------------------------------------
// Dense layers

/// One F_in x F_out weight matrix per stored (l, parity) block and a bias that
/// only touches the even scalars.
class DenseParams {
 public:
  /// Zero weights and bias.
  DenseParams(Layout layout, int max_degree, int in_features, int out_features);

  Layout layout() const { return layout_; }
  int max_degree() const { return max_degree_; }
  int in_features() const { return in_features_; }
  int out_features() const { return out_features_; }

  /// 2(L+1) in the general layout, L+1 in the compact one.
  std::size_t num_weight_matrices() const { return weights_.size(); }
  std::size_t num_weight_parameters() const;

  Eigen::MatrixXd& weight(int l, Parity parity);
  const Eigen::MatrixXd& weight(int l, Parity parity) const;
  /// Weight matrices in storage order (parity-major in the general layout).
  std::span<Eigen::MatrixXd> weights() { return weights_; }
  std::span<const Eigen::MatrixXd> weights() const { return weights_; }

  Eigen::VectorXd& bias() { return bias_; }
  const Eigen::VectorXd& bias() const { return bias_; }

  bool operator==(const DenseParams& other) const;

 private:
  std::size_t index_of(int l, Parity parity) const;

  Layout layout_;
  int max_degree_;
  int in_features_;
  int out_features_;
  std::vector<Eigen::MatrixXd> weights_;
  Eigen::VectorXd bias_;
};

/// Deterministic given the seed: weights uniform with variance 1/F_in, zero bias.
DenseParams dense_init(std::uint64_t seed, int max_degree, int in_features, int out_features, Layout layout);

/// y^(l_p) = x^(l_p) W_(l_p), plus the bias on the even scalar block.
/// Throws InvalidArgument if x does not match the parameter shapes.
IrrepFeatures dense_apply(const DenseParams& p, const IrrepFeatures& x);

// ---------------------------------------------------------------------------
// Tensor layers

/// Coupling path (a_alpha, b_beta) -> c_gamma with gamma = alpha * beta.
struct CouplingPath {
  int a;
  Parity alpha;
  int b;
  Parity beta;
  int c;
  Parity gamma;

  bool operator==(const CouplingPath&) const = default;
};

/// Input/output shape a tensor layer is built for.
struct TensorShape {
  Layout x_layout;
  int x_max_degree;
  Layout y_layout;
  int y_max_degree;
  int out_max_degree;
  int num_features;

  bool operator==(const TensorShape&) const = default;
};

/// All valid coupling paths for a shape, each with a length-F weight vector.
class TensorParams {
 public:
  /// Every path weight set to `value`. Throws InvalidArgument for invalid shapes
  /// (negative degrees, out_max_degree > x_max_degree + y_max_degree, F < 1).
  explicit TensorParams(const TensorShape& shape, double value = 1.0);

  const TensorShape& shape() const { return shape_; }
  std::span<const CouplingPath> paths() const { return paths_; }
  std::span<Eigen::VectorXd> weights() { return weights_; }
  std::span<const Eigen::VectorXd> weights() const { return weights_; }

  /// Compact only if both inputs are compact and every path lands on parity (-1)^c.
  Layout output_layout() const;

  bool operator==(const TensorParams& other) const;

 private:
  TensorShape shape_;
  std::vector<CouplingPath> paths_;
  std::vector<Eigen::VectorXd> weights_;
};

/// Path weights 1/sqrt(n), n the number of paths feeding the same output (c, gamma).
TensorParams tensor_init(const TensorShape& shape);

/// z^(c_gamma) = sum over paths of w o (x^(a_alpha) couple_c y^(b_beta)), channel by channel.
/// Throws InvalidArgument on shape mismatch and CapacityError if the table is too small.
IrrepFeatures tensor_apply(const TensorParams& p, const cgc::CgcTable& table, const IrrepFeatures& x,
                           const IrrepFeatures& y, int out_max_degree);

/// tensor(dense_1(x), dense_2(x)).
IrrepFeatures tensor_dense_apply(const DenseParams& p1, const DenseParams& p2, const TensorParams& pt,
                                 const cgc::CgcTable& table, const IrrepFeatures& x, int out_max_degree);

// ---------------------------------------------------------------------------
// Parameter blobs: "E3PR", u32 version, u32 kind (1 dense, 2 tensor), payload.

void write_blob(std::ostream& out, const DenseParams& p);
void write_blob(std::ostream& out, const TensorParams& p);
DenseParams read_dense_blob(std::istream& in);
TensorParams read_tensor_blob(std::istream& in);

inline constexpr std::uint32_t kBlobVersion = 1;

}  // namespace irrepcore::layers
