#include "irrepcore/irreps.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "binary_io.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/sh.hpp"

namespace irrepcore::irreps {

namespace {

std::string block_name(int l, Parity p) { return std::to_string(l) + (p == Parity::even ? "+" : "-"); }

}  // namespace

IrrepFeatures::IrrepFeatures(Layout layout, int max_degree, int num_features)
    : IrrepFeatures(layout, max_degree, num_features,
                    std::vector<double>((layout == Layout::general ? 2 : 1) *
                                            static_cast<std::size_t>(sh::num_components(std::max(max_degree, 0))) *
                                            static_cast<std::size_t>(std::max(num_features, 0)),
                                        0.0)) {}

IrrepFeatures::IrrepFeatures(Layout layout, int max_degree, int num_features, std::vector<double> data)
    : layout_(layout),
      max_degree_(max_degree),
      num_features_(num_features),
      components_(static_cast<std::size_t>(sh::num_components(std::max(max_degree, 0)))),
      data_(std::move(data)) {
  if (max_degree < 0 || num_features < 1) throw InvalidArgument("IrrepFeatures: need L >= 0 and F >= 1");
  const std::size_t expected = static_cast<std::size_t>(parity_rows()) * components_ * num_features_;
  if (data_.size() != expected)
    throw InvalidArgument("IrrepFeatures: expected " + std::to_string(expected) + " values, got " +
                          std::to_string(data_.size()));
}

bool IrrepFeatures::stores(int l, Parity parity) const {
  return l >= 0 && l <= max_degree_ && (layout_ == Layout::general || parity == natural_parity(l));
}

int IrrepFeatures::row_of(int l, Parity parity) const {
  if (!stores(l, parity)) throw InvalidArgument("IrrepFeatures: block " + block_name(l, parity) + " is not stored");
  return layout_ == Layout::general && parity == Parity::odd ? 1 : 0;
}

Eigen::Map<BlockMatrix> IrrepFeatures::block(int l, Parity parity) {
  return {data_.data() + offset(row_of(l, parity), l * l, 0), 2 * l + 1, num_features_};
}

Eigen::Map<const BlockMatrix> IrrepFeatures::block(int l, Parity parity) const {
  return {data_.data() + offset(row_of(l, parity), l * l, 0), 2 * l + 1, num_features_};
}

BlockMatrix slice_degree_parity(const IrrepFeatures& x, int l, Parity parity) {
  if (l < 0 || l > x.max_degree())
    throw InvalidArgument("slice_degree_parity: degree " + std::to_string(l) + " outside 0.." +
                          std::to_string(x.max_degree()));
  if (!x.stores(l, parity)) return BlockMatrix::Zero(2 * l + 1, x.num_features());
  return x.block(l, parity);
}

IrrepFeatures to_general(const IrrepFeatures& x) {
  if (x.layout() == Layout::general) return x;
  IrrepFeatures y(Layout::general, x.max_degree(), x.num_features());
  for (int l = 0; l <= x.max_degree(); ++l) y.block(l, natural_parity(l)) = x.block(l, natural_parity(l));
  return y;
}

IrrepFeatures to_compact(const IrrepFeatures& x, double tolerance) {
  if (x.layout() == Layout::compact) return x;
  IrrepFeatures y(Layout::compact, x.max_degree(), x.num_features());
  for (int l = 0; l <= x.max_degree(); ++l) {
    const Parity pseudo = natural_parity(l) * Parity::odd;
    const double magnitude = x.block(l, pseudo).cwiseAbs().maxCoeff();
    if (magnitude > tolerance) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", magnitude);
      throw PreconditionError("to_compact: pseudotensor block " + block_name(l, pseudo) +
                              " is nonzero (max magnitude " + buf + ")");
    }
    y.block(l, natural_parity(l)) = x.block(l, natural_parity(l));
  }
  return y;
}

IrrepFeatures transform(const IrrepFeatures& x, const rotations::GroupElement& g, const rotations::WignerDSet& d) {
  if (d.max_degree() < x.max_degree())
    throw InvalidArgument("transform: Wigner-D set has degree " + std::to_string(d.max_degree()) +
                          ", features need " + std::to_string(x.max_degree()));
  IrrepFeatures y(x.layout(), x.max_degree(), x.num_features());
  for (int l = 0; l <= x.max_degree(); ++l)
    for (Parity p : {Parity::even, Parity::odd}) {
      if (!x.stores(l, p)) continue;
      const double s = p == Parity::odd ? g.sign() : 1.0;
      y.block(l, p).noalias() = s * d[l] * x.block(l, p);
    }
  return y;
}

double max_abs_difference(const IrrepFeatures& a, const IrrepFeatures& b) {
  if (a.layout() != b.layout() || a.max_degree() != b.max_degree() || a.num_features() != b.num_features())
    throw InvalidArgument("max_abs_difference: feature shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

void write_blob(std::ostream& out, const IrrepFeatures& x) {
  detail::write_magic(out, "IRRF");
  detail::write_u32(out, kBlobVersion);
  detail::write_u32(out, static_cast<std::uint32_t>(x.parity_rows()));
  detail::write_u32(out, static_cast<std::uint32_t>(x.max_degree()));
  detail::write_u32(out, static_cast<std::uint32_t>(x.num_features()));
  detail::write_f64s(out, x.data());
}

IrrepFeatures read_blob(std::istream& in) {
  detail::expect_magic(in, "IRRF");
  if (const auto version = detail::read_u32(in); version != kBlobVersion)
    throw InvalidArgument("IRRF blob: unsupported version " + std::to_string(version));
  const auto rows = detail::read_u32(in);
  const auto big_l = detail::read_u32(in);
  const auto f = detail::read_u32(in);
  if ((rows != 1 && rows != 2) || big_l > static_cast<std::uint32_t>(kHardMaxDegree) || f == 0 || f > (1u << 24))
    throw InvalidArgument("IRRF blob: bad header");
  const std::size_t n = rows * static_cast<std::size_t>(sh::num_components(static_cast<int>(big_l))) * f;
  return {rows == 2 ? Layout::general : Layout::compact, static_cast<int>(big_l), static_cast<int>(f),
          detail::read_f64s(in, n)};
}

}  // namespace irrepcore::irreps
