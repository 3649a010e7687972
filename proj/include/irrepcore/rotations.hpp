#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "irrepcore/cgc.hpp"

namespace irrepcore::rotations {

using Rng = std::mt19937_64;
using Matrix3 = Eigen::Matrix3d;

/// Element of O(3): a proper rotation, optionally composed with the inversion -e.
class GroupElement {
 public:
  /// Throws InvalidArgument unless `rotation` is orthogonal with det +1 (1e-12)
  /// and `sign` is +1 or -1.
  GroupElement(const Matrix3& rotation, int sign = +1);

  static GroupElement identity() { return {Matrix3::Identity(), +1}; }
  static GroupElement inversion() { return {Matrix3::Identity(), -1}; }

  const Matrix3& rotation() const { return rotation_; }
  int sign() const { return sign_; }
  /// The 3x3 matrix acting on Cartesian vectors, sign * rotation.
  Matrix3 matrix() const { return sign_ * rotation_; }

  /// this o other: apply `other` first.
  GroupElement compose(const GroupElement& other) const;

 private:
  Matrix3 rotation_;
  int sign_;
};

/// Haar-uniform rotation from a normalized 4-vector of standard normals.
GroupElement random_rotation(Rng& rng);

/// Rotation by `angle` about a unit axis (right-hand rule).
GroupElement axis_angle(const Eigen::Vector3d& axis, double angle);

/// Per-degree orthogonal matrices D^l(R) acting on degree-l irreps in the
/// harmonic ordering, so that Y(R r) = D(R) Y(r) block by block.
class WignerDSet {
 public:
  explicit WignerDSet(std::vector<Eigen::MatrixXd> matrices);

  int max_degree() const { return static_cast<int>(matrices_.size()) - 1; }
  const Eigen::MatrixXd& operator[](int l) const { return matrices_.at(static_cast<std::size_t>(l)); }

 private:
  std::vector<Eigen::MatrixXd> matrices_;
};

/// D^0 = [1], D^1 = R, and D^l = C (D^{l-1} kron D^1) C^T with C the
/// (l-1, 1, l) coupling block. Only the rotation part of `g` is used.
/// Throws CapacityError if the table is smaller than max_degree.
WignerDSet wigner_d(const GroupElement& g, int max_degree, const cgc::CgcTable& table);

}  // namespace irrepcore::rotations
