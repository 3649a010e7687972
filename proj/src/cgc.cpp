#include "irrepcore/cgc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/sh.hpp"
#include "sh_extended.hpp"

namespace irrepcore::cgc {

namespace {

// The construction runs in extended precision and is rounded to double once,
// so stored coefficients are (almost always) correctly rounded.
using Real = long double;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Generators = std::array<Matrix, 3>;
using Point = std::array<Real, 3>;

// Coefficients below this are round-off from the eigensolvers.
constexpr Real kSnapToZero = 1e-15L;
constexpr Real kSignThreshold = 1e-10L;

template <class M>
M kron(const M& a, const M& b) {
  M k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// so(3) generators of the degree-1 irrep in (x, y, z) order; D^1(exp(t J_i)) = exp(t J_i).
Generators vector_generators() {
  Generators g;
  for (auto& m : g) m = Matrix::Zero(3, 3);
  g[0](2, 1) = 1.0;
  g[0](1, 2) = -1.0;
  g[1](0, 2) = 1.0;
  g[1](2, 0) = -1.0;
  g[2](1, 0) = 1.0;
  g[2](0, 1) = -1.0;
  return g;
}

// Makes the rows of c orthonormal with the smallest change: c <- (c c^T)^{-1/2} c.
void orthonormalize_rows(Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c * c.transpose());
  const Vector inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  c = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * c;
}

// Product-space vectors use the flat index i1 * n2 + i2, so each column of v
// is an n2 x n1 column-major matrix X and (a (x) I + I (x) b) maps X to
// X a^T + b X. This avoids forming the dense product generators.
Matrix apply_product(const Matrix& a, const Matrix& b, const Matrix& v) {
  const Eigen::Index n1 = a.rows(), n2 = b.rows();
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const Eigen::Map<const Matrix> x(v.col(c).data(), n2, n1);
    Eigen::Map<Matrix> y(out.col(c).data(), n2, n1);
    y.noalias() = x * a.transpose();
    y.noalias() += b * x;
  }
  return out;
}

// Casimir -sum_i A_i^2 of V_la (x) V_lb applied to the columns of v, using
// -sum_i A_i^2 = (la(la+1) + lb(lb+1)) I - 2 sum_i a_i (x) b_i.
Matrix apply_casimir(const Generators& a, const Generators& b, Real diagonal, const Matrix& v) {
  const Eigen::Index n1 = a[0].rows(), n2 = b[0].rows();
  Matrix out = diagonal * v;
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const Eigen::Map<const Matrix> x(v.col(c).data(), n2, n1);
    Eigen::Map<Matrix> y(out.col(c).data(), n2, n1);
    for (int i = 0; i < 3; ++i) y.noalias() -= 2 * (b[i] * x * a[i].transpose());
  }
  return out;
}

int degree_of_casimir_eigenvalue(double lambda) {
  const int l = static_cast<int>(std::lround((-1.0 + std::sqrt(1.0 + 4.0 * std::max(lambda, 0.0))) / 2.0));
  if (std::abs(lambda - l * (l + 1.0)) > 1e-6) throw std::logic_error("Casimir eigenvalue is not l(l+1)");
  return l;
}

// Orthonormal bases of the degree-l isotypic subspaces of V_la (x) V_lb for
// l <= max_degree, as eigenspaces of the Casimir (eigenvalue l(l+1)).
//
// The eigensolve runs in double. Each basis is then corrected once in
// extended precision: the residual C B - l(l+1) B is expanded in the
// approximate eigenvectors and divided by the exact integer gaps.
std::vector<Matrix> isotypic_bases(const Generators& a, const Generators& b, int la, int lb, int max_degree) {
  const Eigen::Index n = a[0].rows() * b[0].rows();
  const Real diagonal = la * (la + 1) + lb * (lb + 1);
  Eigen::MatrixXd casimir = static_cast<double>(diagonal) * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < 3; ++i) casimir -= 2.0 * kron<Eigen::MatrixXd>(a[i].cast<double>(), b[i].cast<double>());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(casimir);
  const Matrix vectors = eig.eigenvectors().cast<Real>();

  std::vector<int> degree(static_cast<std::size_t>(n));
  std::vector<std::vector<Eigen::Index>> columns(max_degree + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    degree[k] = degree_of_casimir_eigenvalue(eig.eigenvalues()(k));
    if (degree[k] <= max_degree) columns[degree[k]].push_back(k);
  }

  std::vector<Matrix> bases(max_degree + 1);
  for (int l = 0; l <= max_degree; ++l) {
    Matrix basis(n, static_cast<Eigen::Index>(columns[l].size()));
    for (std::size_t c = 0; c < columns[l].size(); ++c) basis.col(c) = vectors.col(columns[l][c]);
    if (basis.cols() > 0) {
      const Real lambda = l * (l + 1);
      Matrix coeff = vectors.transpose() * (apply_casimir(a, b, diagonal, basis) - lambda * basis);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (degree[k] == l)
          coeff.row(k).setZero();
        else
          coeff.row(k) /= degree[k] * (degree[k] + 1) - lambda;
      }
      basis -= vectors * coeff;
      Matrix rows = basis.transpose();
      orthonormalize_rows(rows);
      basis = rows.transpose();
    }
    bases[l] = std::move(basis);
  }
  return bases;
}

// Solves M A_i = J_i M for the (unique up to scale) M, where A_i are the
// generators restricted to the isotypic subspace and J_i the target irrep's.
//
// With column-major vec, sum_i |vec(M A_i - J_i M)|^2 is the quadratic form of
// sum_i (A_i kron I - I kron J_i^T)(A_i^T kron I - I kron J_i), which for skew
// generators of a degree-l irrep collapses to 2 (l(l+1) I - sum_i A_i kron J_i).
// Its null vector is found by shifted inverse iteration; the next eigenvalue
// is 2, so a few steps suffice.
Matrix intertwiner(const Generators& restricted, const Generators& target) {
  const Eigen::Index d = target[0].rows();
  if (d == 1) return Matrix::Ones(1, 1);
  const Real casimir = (d - 1) / 2.0L * ((d - 1) / 2.0L + 1.0L);
  Matrix normal = 2.0L * casimir * Matrix::Identity(d * d, d * d);
  for (int i = 0; i < 3; ++i) normal -= 2.0L * kron(restricted[i], target[i]);
  normal.diagonal().array() += 1e-9L;
  const Eigen::LLT<Matrix> llt(normal);
  if (llt.info() != Eigen::Success) throw std::logic_error("intertwiner: normal matrix is not positive definite");
  // unstructured start so it is not orthogonal to the null vector
  Vector x(d * d);
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = std::cos(1.7L * static_cast<Real>(k) + 0.3L);
  for (int step = 0; step < 4; ++step) {
    x = llt.solve(x);
    x.normalize();
  }
  if ((normal * x).norm() > 1e-8L) throw std::logic_error("intertwiner is not unique");
  return Eigen::Map<const Matrix>(x.data(), d, d);
}

// Deterministic, roughly uniform points on the unit sphere.
std::vector<Point> fibonacci_sphere(int count) {
  std::vector<Point> points;
  const Real golden = std::numbers::pi_v<Real> * (3.0L - std::sqrt(5.0L));
  for (int i = 0; i < count; ++i) {
    const Real z = 1.0L - (2.0L * i + 1.0L) / count;
    const Real rho = std::sqrt(1.0L - z * z);
    points.push_back({rho * std::cos(golden * i), rho * std::sin(golden * i), z});
  }
  return points;
}

// The (l-1) x 1 -> l block, before the degree-l generators are known. The
// degree-l part of Y^{l-1}(r) (x) Y^1(r) is a positive multiple of Y^l(r),
// which pins the basis of the isotypic subspace to the harmonic basis.
Matrix top_coupling(const Matrix& basis, int l) {
  const int l1 = l - 1;
  const auto d1 = 2 * l1 + 1;
  const auto d3 = 2 * l + 1;
  const auto points = fibonacci_sphere(4 * d3);
  Matrix products(basis.rows(), static_cast<Eigen::Index>(points.size()));
  Matrix targets(d3, static_cast<Eigen::Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto y = sh::detail::solid_values_extended(points[p], l);
    const Real* y1 = y.data() + l1 * l1;
    const Real* yv = y.data() + 1;
    for (int a = 0; a < d1; ++a)
      for (int b = 0; b < 3; ++b) products(a * 3 + b, p) = y1[a] * yv[b];
    for (int c = 0; c < d3; ++c) targets(c, p) = y[l * l + c];
  }
  const Matrix z = basis.transpose() * products;
  const Matrix x = (z * z.transpose()).ldlt().solve(z * targets.transpose()).transpose();
  return x * basis.transpose();
}

void apply_sign_convention(Matrix& c, int l1, int l2, int l3) {
  const Real center = c(2 * l3, (2 * l1) * (2 * l2 + 1) + 2 * l2);  // (m3, m1, m2) = (0, 0, 0)
  Real sign = 0;
  if (std::abs(center) > kSignThreshold) {
    sign = center > 0 ? 1 : -1;
  } else {
    for (Eigen::Index r = 0; r < c.rows() && sign == 0.0; ++r)
      for (Eigen::Index k = 0; k < c.cols(); ++k)
        if (std::abs(c(r, k)) > kSignThreshold) {
          sign = c(r, k) > 0 ? 1 : -1;
          break;
        }
  }
  c *= sign;
}

std::size_t triple_index(int max_degree, int l1, int l2, int l3) {
  const auto n = static_cast<std::size_t>(max_degree + 1);
  return (static_cast<std::size_t>(l1) * n + l2) * n + l3;
}

}  // namespace

CgcTable::CgcTable(int max_degree, std::vector<double> values)
    : max_degree_(max_degree), extent_(sh::num_components(max_degree)), values_(std::move(values)) {
  const auto n = static_cast<std::size_t>(extent_);
  if (values_.size() != n * n * n)
    throw InvalidArgument("CgcTable: expected " + std::to_string(n * n * n) + " values, got " +
                          std::to_string(values_.size()));
  blocks_.resize(static_cast<std::size_t>(max_degree_ + 1) * (max_degree_ + 1) * (max_degree_ + 1));
  for (int l1 = 0; l1 <= max_degree_; ++l1)
    for (int l2 = 0; l2 <= max_degree_; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(l1 + l2, max_degree_); ++l3) {
        auto& entries = blocks_[triple_index(max_degree_, l1, l2, l3)];
        for (int o1 = 0; o1 <= 2 * l1; ++o1)
          for (int o2 = 0; o2 <= 2 * l2; ++o2)
            for (int o3 = 0; o3 <= 2 * l3; ++o3) {
              const double v = values_[((l1 * l1 + o1) * n + (l2 * l2 + o2)) * n + (l3 * l3 + o3)];
              if (v != 0.0) entries.push_back({o1, o2, o3, v});
            }
      }
}

CgcTable CgcTable::from_values(int max_degree, std::vector<double> values) {
  if (max_degree < 0 || max_degree > kHardMaxDegree) throw InvalidArgument("CgcTable: degree out of range");
  return CgcTable(max_degree, std::move(values));
}

double CgcTable::operator()(int l1, int m1, int l2, int m2, int l3, int m3) const {
  const auto n = static_cast<std::size_t>(extent_);
  return values_[(static_cast<std::size_t>(sh::flat_index(l1, m1)) * n + sh::flat_index(l2, m2)) * n +
                 sh::flat_index(l3, m3)];
}

double CgcTable::at(int l1, int m1, int l2, int m2, int l3, int m3) const {
  for (auto [l, m] : {std::pair{l1, m1}, std::pair{l2, m2}, std::pair{l3, m3}})
    if (l < 0 || l > max_degree_ || m < -l || m > l)
      throw InvalidArgument("cgc: index (" + std::to_string(l) + ", " + std::to_string(m) +
                            ") out of range for a table of max degree " + std::to_string(max_degree_));
  return (*this)(l1, m1, l2, m2, l3, m3);
}

std::span<const CgcTable::Entry> CgcTable::block(int l1, int l2, int l3) const {
  if (std::min({l1, l2, l3}) < 0 || std::max({l1, l2, l3}) > max_degree_)
    throw InvalidArgument("CgcTable::block: degree out of range");
  return blocks_[triple_index(max_degree_, l1, l2, l3)];
}

CgcTable build_cgc_table(int max_degree) {
  if (max_degree < 0) throw InvalidArgument("build_cgc_table: negative degree");
  if (max_degree > max_supported_degree())
    throw CapacityError("build_cgc_table: degree " + std::to_string(max_degree) + " exceeds the configured maximum " +
                        std::to_string(max_supported_degree()));

  const int big_l = max_degree;
  const auto n = static_cast<std::size_t>(sh::num_components(big_l));
  std::vector<double> values(n * n * n, 0.0);
  // c has columns (m1, m2); `swapped` stores it as the (l2, l1, l3) block.
  auto store = [&](const Matrix& c, int l1, int l2, int l3, bool swapped) {
    for (int o3 = 0; o3 <= 2 * l3; ++o3)
      for (int o1 = 0; o1 <= 2 * l1; ++o1)
        for (int o2 = 0; o2 <= 2 * l2; ++o2) {
          const Real v = c(o3, o1 * (2 * l2 + 1) + o2);
          const std::size_t first = l1 * l1 + o1, second = l2 * l2 + o2;
          const std::size_t at = swapped ? (second * n + first) * n + (l3 * l3 + o3) : (first * n + second) * n + (l3 * l3 + o3);
          values[at] = std::abs(v) < kSnapToZero ? 0.0 : static_cast<double>(v);
        }
  };

  // Generators for every degree, each new one obtained from the top
  // component of (l-1) x 1.
  std::vector<Generators> gens(big_l + 1);
  for (auto& m : gens[0]) m = Matrix::Zero(1, 1);
  if (big_l >= 1) gens[1] = vector_generators();
  for (int l = 2; l <= big_l; ++l) {
    const auto bases = isotypic_bases(gens[l - 1], gens[1], l - 1, 1, l);
    Matrix c = top_coupling(bases[l], l);
    orthonormalize_rows(c);
    const Matrix ct = c.transpose();
    for (int i = 0; i < 3; ++i) gens[l][i] = c * apply_product(gens[l - 1][i], gens[1][i], ct);
  }

  // Blocks with l1 > l2 follow from the swap symmetry
  // C^{l3 m3}_{l2 m2 l1 m1} = (-1)^{l1+l2-l3} C^{l3 m3}_{l1 m1 l2 m2}.
  for (int l1 = 0; l1 <= big_l; ++l1) {
    for (int l2 = l1; l2 <= big_l; ++l2) {
      const auto bases = isotypic_bases(gens[l1], gens[l2], l1, l2, std::min(l1 + l2, big_l));
      for (int l3 = l2 - l1; l3 <= std::min(l1 + l2, big_l); ++l3) {
        const Matrix& basis = bases[l3];
        if (basis.cols() != 2 * l3 + 1) throw std::logic_error("isotypic subspace has unexpected dimension");
        Generators restricted;
        for (int i = 0; i < 3; ++i) restricted[i] = basis.transpose() * apply_product(gens[l1][i], gens[l2][i], basis);
        Matrix c = intertwiner(restricted, gens[l3]) * basis.transpose();
        c *= std::sqrt(2.0L * l3 + 1.0L) / c.norm();
        orthonormalize_rows(c);
        apply_sign_convention(c, l1, l2, l3);
        store(c, l1, l2, l3, false);
        if (l1 != l2) {
          if ((l1 + l2 - l3) % 2 != 0) c = -c;
          store(c, l1, l2, l3, true);
        }
      }
    }
  }
  return CgcTable::from_values(big_l, std::move(values));
}

double cgc(const CgcTable& table, int l1, int m1, int l2, int m2, int l3, int m3) {
  return table.at(l1, m1, l2, m2, l3, m3);
}

std::vector<double> couple(const CgcTable& table, int l1, std::span<const double> u, int l2,
                           std::span<const double> v, int l3) {
  for (int l : {l1, l2, l3})
    if (l < 0 || l > table.max_degree())
      throw InvalidArgument("couple: degree " + std::to_string(l) + " outside table range");
  if (u.size() != static_cast<std::size_t>(2 * l1 + 1) || v.size() != static_cast<std::size_t>(2 * l2 + 1))
    throw InvalidArgument("couple: vector length does not match its declared degree");
  std::vector<double> w(2 * l3 + 1, 0.0);
  for (const auto& e : table.block(l1, l2, l3)) w[e.offset3] += e.value * u[e.offset1] * v[e.offset2];
  return w;
}

std::uint64_t checksum(const CgcTable& table) {
  std::uint64_t h = detail::kFnvOffset;
  for (double v : table.values()) h = detail::fnv1a(h, std::bit_cast<std::uint64_t>(v));
  return h;
}

void write_csv(std::ostream& out, const CgcTable& table) {
  out << "l1,m1,l2,m2,l3,m3,value\n";
  const int big_l = table.max_degree();
  char buf[64];
  for (int l1 = 0; l1 <= big_l; ++l1)
    for (int o1 = 0; o1 <= 2 * l1; ++o1)
      for (int l2 = 0; l2 <= big_l; ++l2)
        for (int o2 = 0; o2 <= 2 * l2; ++o2)
          for (int l3 = 0; l3 <= big_l; ++l3)
            for (int o3 = 0; o3 <= 2 * l3; ++o3) {
              const int m1 = sh::order_at(l1, o1), m2 = sh::order_at(l2, o2), m3 = sh::order_at(l3, o3);
              const double v = table(l1, m1, l2, m2, l3, m3);
              if (v == 0.0) continue;
              std::snprintf(buf, sizeof buf, "%.17g", v);
              out << l1 << ',' << m1 << ',' << l2 << ',' << m2 << ',' << l3 << ',' << m3 << ',' << buf << '\n';
            }
}

void write_blob(std::ostream& out, const CgcTable& table) {
  detail::write_magic(out, "CGCT");
  detail::write_u32(out, kBlobVersion);
  detail::write_u32(out, static_cast<std::uint32_t>(table.max_degree()));
  detail::write_f64s(out, table.values());
}

CgcTable read_blob(std::istream& in) {
  detail::expect_magic(in, "CGCT");
  if (const auto version = detail::read_u32(in); version != kBlobVersion)
    throw InvalidArgument("CGCT blob: unsupported version " + std::to_string(version));
  const auto big_l = static_cast<int>(detail::read_u32(in));
  if (big_l > kHardMaxDegree) throw InvalidArgument("CGCT blob: degree out of range");
  const auto n = static_cast<std::size_t>(sh::num_components(big_l));
  return CgcTable::from_values(big_l, detail::read_f64s(in, n * n * n));
}

}  // namespace irrepcore::cgc
