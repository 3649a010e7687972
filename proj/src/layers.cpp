#include "irrepcore/layers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "binary_io.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/sh.hpp"

namespace irrepcore::layers {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double gelu_gate(double x) {
  const double k = std::sqrt(2.0 / std::numbers::pi);
  return 0.5 * (1.0 + std::tanh(k * (x + 0.044715 * x * x * x)));
}

constexpr double kLeakySlope = 0.01;

const std::vector<Activation>& registry() {
  static const std::vector<Activation> kinds = {
      {"relu", [](double x) { return x > 0.0 ? 1.0 : 0.0; }, [](double x) { return std::max(0.0, x); }},
      {"leaky_relu", [](double x) { return x > 0.0 ? 1.0 : kLeakySlope; },
       [](double x) { return x > 0.0 ? x : kLeakySlope * x; }},
      {"swish", sigmoid, [](double x) { return x / (1.0 + std::exp(-x)); }},
      {"silu", sigmoid, [](double x) { return x / (1.0 + std::exp(-x)); }},
      {"gelu", gelu_gate,
       [](double x) {
         const double k = std::sqrt(2.0 / std::numbers::pi);
         return 0.5 * x * (1.0 + std::tanh(k * (x + 0.044715 * x * x * x)));
       }},
      {"identity", [](double) { return 1.0; }, [](double x) { return x; }},
  };
  return kinds;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

std::string shape_string(const IrrepFeatures& x) {
  return std::string(x.layout() == Layout::general ? "general" : "compact") + " L=" +
         std::to_string(x.max_degree()) + " F=" + std::to_string(x.num_features());
}

std::vector<Parity> stored_parities(Layout layout, int l) {
  if (layout == Layout::general) return {Parity::even, Parity::odd};
  return {irreps::natural_parity(l)};
}

}  // namespace

// ---------------------------------------------------------------------------

std::span<const Activation> activation_registry() { return registry(); }

const Activation& find_activation(std::string_view name) {
  for (const auto& a : registry())
    if (a.name == name) return a;
  throw InvalidArgument("unknown activation \"" + std::string(name) + "\"");
}

IrrepFeatures activation(const IrrepFeatures& x, const std::function<double(double)>& gate) {
  IrrepFeatures y = x;
  const int rows = x.parity_rows();
  const int components = sh::num_components(x.max_degree());
  for (int f = 0; f < x.num_features(); ++f) {
    const double g = gate(x(0, 0, f));
    for (int row = 0; row < rows; ++row)
      for (int i = 0; i < components; ++i) y(row, i, f) *= g;
  }
  return y;
}

IrrepFeatures activation(const IrrepFeatures& x, std::string_view kind) {
  return activation(x, find_activation(kind).gate);
}

// ---------------------------------------------------------------------------

DenseParams::DenseParams(Layout layout, int max_degree, int in_features, int out_features)
    : layout_(layout), max_degree_(max_degree), in_features_(in_features), out_features_(out_features) {
  require(max_degree >= 0 && in_features >= 1 && out_features >= 1, "DenseParams: need L >= 0 and positive sizes");
  const int count = (layout == Layout::general ? 2 : 1) * (max_degree + 1);
  weights_.assign(static_cast<std::size_t>(count), Eigen::MatrixXd::Zero(in_features, out_features));
  bias_ = Eigen::VectorXd::Zero(out_features);
}

std::size_t DenseParams::index_of(int l, Parity parity) const {
  require(l >= 0 && l <= max_degree_, "DenseParams: degree out of range");
  if (layout_ == Layout::compact) {
    require(parity == irreps::natural_parity(l), "DenseParams: compact layout has no pseudotensor weights");
    return static_cast<std::size_t>(l);
  }
  return static_cast<std::size_t>((parity == Parity::even ? 0 : 1) * (max_degree_ + 1) + l);
}

Eigen::MatrixXd& DenseParams::weight(int l, Parity parity) { return weights_[index_of(l, parity)]; }
const Eigen::MatrixXd& DenseParams::weight(int l, Parity parity) const { return weights_[index_of(l, parity)]; }

std::size_t DenseParams::num_weight_parameters() const {
  return weights_.size() * static_cast<std::size_t>(in_features_) * out_features_;
}

bool DenseParams::operator==(const DenseParams& other) const {
  if (layout_ != other.layout_ || max_degree_ != other.max_degree_ || in_features_ != other.in_features_ ||
      out_features_ != other.out_features_ || bias_ != other.bias_)
    return false;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] != other.weights_[i]) return false;
  return true;
}

DenseParams dense_init(std::uint64_t seed, int max_degree, int in_features, int out_features, Layout layout) {
  DenseParams p(layout, max_degree, in_features, out_features);
  std::mt19937_64 rng(seed);
  const double limit = std::sqrt(3.0 / in_features);  // Var U(-a, a) = a^2 / 3
  std::uniform_real_distribution<double> uniform(-limit, limit);
  for (auto& w : p.weights())
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = uniform(rng);
  return p;
}

IrrepFeatures dense_apply(const DenseParams& p, const IrrepFeatures& x) {
  require(x.layout() == p.layout() && x.max_degree() == p.max_degree() && x.num_features() == p.in_features(),
          "dense_apply: features (" + shape_string(x) + ") do not match parameters");
  IrrepFeatures y(x.layout(), x.max_degree(), p.out_features());
  for (int l = 0; l <= x.max_degree(); ++l)
    for (Parity parity : stored_parities(x.layout(), l)) y.block(l, parity).noalias() = x.block(l, parity) * p.weight(l, parity);
  y.block(0, Parity::even).row(0) += p.bias().transpose();
  return y;
}

// ---------------------------------------------------------------------------

TensorParams::TensorParams(const TensorShape& shape, double value) : shape_(shape) {
  require(shape.x_max_degree >= 0 && shape.y_max_degree >= 0 && shape.out_max_degree >= 0,
          "TensorParams: negative degree");
  require(shape.out_max_degree <= shape.x_max_degree + shape.y_max_degree,
          "TensorParams: output degree exceeds the sum of the input degrees");
  require(shape.num_features >= 1, "TensorParams: need at least one feature");
  for (int a = 0; a <= shape.x_max_degree; ++a)
    for (Parity alpha : stored_parities(shape.x_layout, a))
      for (int b = 0; b <= shape.y_max_degree; ++b)
        for (Parity beta : stored_parities(shape.y_layout, b))
          for (int c = std::abs(a - b); c <= std::min(a + b, shape.out_max_degree); ++c)
            paths_.push_back({a, alpha, b, beta, c, alpha * beta});
  weights_.assign(paths_.size(), Eigen::VectorXd::Constant(shape.num_features, value));
}

Layout TensorParams::output_layout() const {
  if (shape_.x_layout != Layout::compact || shape_.y_layout != Layout::compact) return Layout::general;
  for (const auto& path : paths_)
    if (path.gamma != irreps::natural_parity(path.c)) return Layout::general;
  return Layout::compact;
}

bool TensorParams::operator==(const TensorParams& other) const {
  if (!(shape_ == other.shape_) || paths_ != other.paths_) return false;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] != other.weights_[i]) return false;
  return true;
}

TensorParams tensor_init(const TensorShape& shape) {
  TensorParams p(shape);
  std::map<std::pair<int, int>, int> fan_in;
  for (const auto& path : p.paths()) ++fan_in[{path.c, static_cast<int>(path.gamma)}];
  for (std::size_t i = 0; i < p.paths().size(); ++i) {
    const auto& path = p.paths()[i];
    p.weights()[i].setConstant(1.0 / std::sqrt(static_cast<double>(fan_in[{path.c, static_cast<int>(path.gamma)}])));
  }
  return p;
}

IrrepFeatures tensor_apply(const TensorParams& p, const cgc::CgcTable& table, const IrrepFeatures& x,
                           const IrrepFeatures& y, int out_max_degree) {
  const auto& s = p.shape();
  require(x.num_features() == y.num_features(), "tensor_apply: x has " + std::to_string(x.num_features()) +
                                                     " features but y has " + std::to_string(y.num_features()));
  require(x.num_features() == s.num_features, "tensor_apply: feature count does not match parameters");
  require(x.layout() == s.x_layout && x.max_degree() == s.x_max_degree,
          "tensor_apply: x (" + shape_string(x) + ") does not match parameters");
  require(y.layout() == s.y_layout && y.max_degree() == s.y_max_degree,
          "tensor_apply: y (" + shape_string(y) + ") does not match parameters");
  require(out_max_degree == s.out_max_degree, "tensor_apply: output degree does not match parameters");
  if (std::max({s.x_max_degree, s.y_max_degree, s.out_max_degree}) > table.max_degree())
    throw CapacityError("tensor_apply: coupling table of degree " + std::to_string(table.max_degree()) +
                        " is too small");

  IrrepFeatures z(p.output_layout(), out_max_degree, x.num_features());
  for (std::size_t k = 0; k < p.paths().size(); ++k) {
    const auto& path = p.paths()[k];
    const auto w = p.weights()[k].transpose().array();
    const auto xa = x.block(path.a, path.alpha);
    const auto yb = y.block(path.b, path.beta);
    auto zc = z.block(path.c, path.gamma);
    for (const auto& e : table.block(path.a, path.b, path.c))
      zc.row(e.offset3).array() += e.value * w * xa.row(e.offset1).array() * yb.row(e.offset2).array();
  }
  return z;
}

IrrepFeatures tensor_dense_apply(const DenseParams& p1, const DenseParams& p2, const TensorParams& pt,
                                 const cgc::CgcTable& table, const IrrepFeatures& x, int out_max_degree) {
  const IrrepFeatures a = dense_apply(p1, x);
  const IrrepFeatures b = dense_apply(p2, x);
  return tensor_apply(pt, table, a, b, out_max_degree);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kDenseKind = 1;
constexpr std::uint32_t kTensorKind = 2;

std::uint32_t encode(Layout layout) { return layout == Layout::general ? 1 : 0; }
std::uint32_t encode(Parity parity) { return parity == Parity::even ? 0 : 1; }

Layout decode_layout(std::uint32_t v) {
  if (v > 1) throw InvalidArgument("E3PR blob: bad layout code");
  return v == 1 ? Layout::general : Layout::compact;
}

Parity decode_parity(std::uint32_t v) {
  if (v > 1) throw InvalidArgument("E3PR blob: bad parity code");
  return v == 0 ? Parity::even : Parity::odd;
}

int read_small(std::istream& in, std::uint32_t limit, const char* what) {
  const auto v = detail::read_u32(in);
  if (v > limit) throw InvalidArgument(std::string("E3PR blob: ") + what + " out of range");
  return static_cast<int>(v);
}

void read_header(std::istream& in, std::uint32_t kind) {
  detail::expect_magic(in, "E3PR");
  if (const auto version = detail::read_u32(in); version != kBlobVersion)
    throw InvalidArgument("E3PR blob: unsupported version " + std::to_string(version));
  if (detail::read_u32(in) != kind) throw InvalidArgument("E3PR blob: wrong parameter kind");
}

constexpr std::uint32_t kMaxFeatures = 1u << 20;

}  // namespace

void write_blob(std::ostream& out, const DenseParams& p) {
  detail::write_magic(out, "E3PR");
  detail::write_u32(out, kBlobVersion);
  detail::write_u32(out, kDenseKind);
  detail::write_u32(out, encode(p.layout()));
  detail::write_u32(out, static_cast<std::uint32_t>(p.max_degree()));
  detail::write_u32(out, static_cast<std::uint32_t>(p.in_features()));
  detail::write_u32(out, static_cast<std::uint32_t>(p.out_features()));
  for (const auto& w : p.weights())
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) detail::write_f64(out, w(i, j));
  detail::write_f64s(out, std::span<const double>(p.bias().data(), static_cast<std::size_t>(p.bias().size())));
}

DenseParams read_dense_blob(std::istream& in) {
  read_header(in, kDenseKind);
  const Layout layout = decode_layout(detail::read_u32(in));
  const int big_l = read_small(in, kHardMaxDegree, "degree");
  const int fin = read_small(in, kMaxFeatures, "input features");
  const int fout = read_small(in, kMaxFeatures, "output features");
  DenseParams p(layout, big_l, fin, fout);
  for (auto& w : p.weights())
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = detail::read_f64(in);
  for (Eigen::Index j = 0; j < p.bias().size(); ++j) p.bias()(j) = detail::read_f64(in);
  return p;
}

void write_blob(std::ostream& out, const TensorParams& p) {
  const auto& s = p.shape();
  detail::write_magic(out, "E3PR");
  detail::write_u32(out, kBlobVersion);
  detail::write_u32(out, kTensorKind);
  detail::write_u32(out, encode(s.x_layout));
  detail::write_u32(out, static_cast<std::uint32_t>(s.x_max_degree));
  detail::write_u32(out, encode(s.y_layout));
  detail::write_u32(out, static_cast<std::uint32_t>(s.y_max_degree));
  detail::write_u32(out, static_cast<std::uint32_t>(s.out_max_degree));
  detail::write_u32(out, static_cast<std::uint32_t>(s.num_features));
  detail::write_u32(out, static_cast<std::uint32_t>(p.paths().size()));
  for (std::size_t k = 0; k < p.paths().size(); ++k) {
    const auto& path = p.paths()[k];
    for (std::uint32_t v : {static_cast<std::uint32_t>(path.a), encode(path.alpha), static_cast<std::uint32_t>(path.b),
                            encode(path.beta), static_cast<std::uint32_t>(path.c), encode(path.gamma)})
      detail::write_u32(out, v);
    const auto& w = p.weights()[k];
    detail::write_f64s(out, std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
  }
}

TensorParams read_tensor_blob(std::istream& in) {
  read_header(in, kTensorKind);
  TensorShape s{};
  s.x_layout = decode_layout(detail::read_u32(in));
  s.x_max_degree = read_small(in, kHardMaxDegree, "x degree");
  s.y_layout = decode_layout(detail::read_u32(in));
  s.y_max_degree = read_small(in, kHardMaxDegree, "y degree");
  s.out_max_degree = read_small(in, 2 * kHardMaxDegree, "output degree");
  s.num_features = read_small(in, kMaxFeatures, "features");
  TensorParams p(s);
  if (detail::read_u32(in) != p.paths().size()) throw InvalidArgument("E3PR blob: path count does not match shape");
  for (std::size_t k = 0; k < p.paths().size(); ++k) {
    CouplingPath path{};
    path.a = static_cast<int>(detail::read_u32(in));
    path.alpha = decode_parity(detail::read_u32(in));
    path.b = static_cast<int>(detail::read_u32(in));
    path.beta = decode_parity(detail::read_u32(in));
    path.c = static_cast<int>(detail::read_u32(in));
    path.gamma = decode_parity(detail::read_u32(in));
    if (!(path == p.paths()[k])) throw InvalidArgument("E3PR blob: path list does not match shape");
    for (Eigen::Index f = 0; f < s.num_features; ++f) p.weights()[k](f) = detail::read_f64(in);
  }
  return p;
}

}  // namespace irrepcore::layers
