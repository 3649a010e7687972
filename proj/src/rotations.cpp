#include "irrepcore/rotations.hpp"

#include <cmath>
#include <string>

#include "irrepcore/errors.hpp"

namespace irrepcore::rotations {

namespace {
constexpr double kOrthogonalityTolerance = 1e-12;
}

GroupElement::GroupElement(const Matrix3& rotation, int sign) : rotation_(rotation), sign_(sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("GroupElement: sign must be +1 or -1");
  const double off = (rotation.transpose() * rotation - Matrix3::Identity()).cwiseAbs().maxCoeff();
  if (!(off < kOrthogonalityTolerance) || !(std::abs(rotation.determinant() - 1.0) < kOrthogonalityTolerance))
    throw InvalidArgument("GroupElement: rotation part is not in SO(3)");
}

GroupElement GroupElement::compose(const GroupElement& other) const {
  return {rotation_ * other.rotation_, sign_ * other.sign_};
}

GroupElement random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q;
  do {
    q.coeffs() << normal(rng), normal(rng), normal(rng), normal(rng);
  } while (q.coeffs().squaredNorm() < 1e-20);
  q.normalize();
  return {q.toRotationMatrix(), +1};
}

GroupElement axis_angle(const Eigen::Vector3d& axis, double angle) {
  return {Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(), +1};
}

WignerDSet::WignerDSet(std::vector<Eigen::MatrixXd> matrices) : matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw InvalidArgument("WignerDSet: need at least degree 0");
  for (std::size_t l = 0; l < matrices_.size(); ++l) {
    const auto d = static_cast<Eigen::Index>(2 * l + 1);
    if (matrices_[l].rows() != d || matrices_[l].cols() != d)
      throw InvalidArgument("WignerDSet: degree " + std::to_string(l) + " matrix has the wrong shape");
  }
}

WignerDSet wigner_d(const GroupElement& g, int max_degree, const cgc::CgcTable& table) {
  if (max_degree < 0) throw InvalidArgument("wigner_d: negative degree");
  if (max_degree > table.max_degree())
    throw CapacityError("wigner_d: degree " + std::to_string(max_degree) + " exceeds the coupling table (max " +
                        std::to_string(table.max_degree()) + ")");
  std::vector<Eigen::MatrixXd> d;
  d.push_back(Eigen::MatrixXd::Ones(1, 1));
  if (max_degree >= 1) d.emplace_back(g.rotation());
  const Matrix3& r = g.rotation();
  for (int l = 2; l <= max_degree; ++l) {
    const auto& prev = d[l - 1];
    const auto block = table.block(l - 1, 1, l);
    // t = C (D^{l-1} kron R), indexed (m3; m1', m2')
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * l + 1, (2 * l - 1) * 3);
    for (const auto& e : block)
      for (int a = 0; a < 2 * l - 1; ++a)
        for (int b = 0; b < 3; ++b) t(e.offset3, a * 3 + b) += e.value * prev(e.offset1, a) * r(e.offset2, b);
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(2 * l + 1, 2 * l + 1);
    for (const auto& e : block) next.col(e.offset3) += e.value * t.col(e.offset1 * 3 + e.offset2);
    d.push_back(std::move(next));
  }
  return WignerDSet(std::move(d));
}

}  // namespace irrepcore::rotations
