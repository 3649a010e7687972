// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "irrepcore/cgc.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/irreps.hpp"
#include "irrepcore/layers.hpp"
#include "irrepcore/rotations.hpp"
#include "irrepcore/sh.hpp"
#include "irrepcore/suites.hpp"
#include "support/oracles.hpp"

namespace {

using namespace irrepcore;
using irreps::IrrepFeatures;
using irreps::Layout;
using irreps::Parity;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

sh::Vec3 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return {normal(rng), normal(rng), normal(rng)};
}

Outcome golden_vector_couplings() {
  const auto start = std::chrono::steady_clock::now();
  const auto table = cgc::build_cgc_table(2);
  std::mt19937_64 rng(1);
  double err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto u = random_vec(rng), v = random_vec(rng);
    for (int c = 0; c <= 2; ++c) {
      const auto got = cgc::couple(table, 1, u, 1, v, c);
      const auto want = oracle::vector_coupling(u, v, c);
      for (std::size_t k = 0; k < want.size(); ++k) err = std::max(err, std::abs(got[k] - want[k]));
    }
  }
  const double t = seconds_since(start);
  return {err < 1e-12 && t < 1.0, fmt("max_err=%.3g (tol 1e-12) time=%.3fs (limit 1s)", err, t)};
}

Outcome sh_orthonormality() {
  const auto start = std::chrono::steady_clock::now();
  constexpr int kL = 8;
  const int n = sh::num_components(kL);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : oracle::sphere_rule<9>(17)) {
    const auto y = sh::eval_sh(p.r, kL).values();
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), n);
    gram.noalias() += p.weight * v * v.transpose();
  }
  const double err = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  const double t = seconds_since(start);
  return {err < 1e-10 && t < 5.0, fmt("max|G-I|=%.3g (tol 1e-10) time=%.3fs (limit 5s)", err, t)};
}

Outcome cgc_oracle() {
  const auto& table = oracle::table(8);
  double err = 0.0;
  for (int l1 = 0; l1 <= 3; ++l1)
    for (int l2 = 0; l2 <= 3; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(l1 + l2, 3); ++l3) {
        const auto got = oracle::from_table(table, l1, l2, l3);
        err = std::max(err, oracle::max_abs_diff(got, oracle::group_average_oracle(l1, l2, l3)));
        if ((l1 + l2 + l3) % 2 == 0) err = std::max(err, oracle::max_abs_diff(got, oracle::gaunt_oracle(l1, l2, l3)));
      }
  int violations = 0;
  const int big_l = table.max_degree();
  for (int l1 = 0; l1 <= big_l; ++l1)
    for (int l2 = 0; l2 <= big_l; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(l1 + l2, big_l); ++l3) {
        const double c = table.at(l1, 0, l2, 0, l3, 0);
        if (c != 0.0 && c < 0.0) ++violations;
      }
  return {err < 1e-10 && violations == 0,
          fmt("max_err=%.3g (tol 1e-10) sign_violations=%.0f over L=%.0f", err, violations, big_l)};
}

Outcome norm_preservation() {
  const auto& table = oracle::table(8);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  double err = 0.0;
  for (int l1 = 0; l1 <= 4; ++l1)
    for (int l2 = 0; l2 <= 4; ++l2)
      for (int i = 0; i < 1000; ++i) {
        std::vector<double> u(2 * l1 + 1), v(2 * l2 + 1);
        double nu = 0.0, nv = 0.0;
        for (double& x : u) nu += (x = normal(rng)) * x;
        for (double& x : v) nv += (x = normal(rng)) * x;
        double total = 0.0;
        for (int c = std::abs(l1 - l2); c <= l1 + l2; ++c)
          for (double w : cgc::couple(table, l1, u, l2, v, c)) total += w * w;
        err = std::max(err, std::abs(total - nu * nv) / std::max(1.0, nu * nv));
      }
  return {err < 1e-12, fmt("max_rel_err=%.3g (tol 1e-12)", err)};
}

Outcome equivariance_suite() {
  const auto start = std::chrono::steady_clock::now();
  const auto& table = oracle::table(8);
  double worst = 0.0;
  std::string detail;
  for (const char* name : {"sh", "couple", "dense", "tensor", "tensor_dense", "featurize"}) {
    const auto report = check::run_suite(name, {4, 8, 100, 2024}, table);
    worst = std::max(worst, report.max_dev);
    detail += std::string(name) + "=" + fmt("%.2g", report.max_dev) + " ";
  }
  const double t = seconds_since(start);
  return {worst < 1e-10 && t < 30.0, detail + fmt("(tol 1e-10) time=%.2fs (limit 30s)", t)};
}

Outcome wigner_properties() {
  const auto& table = oracle::table(8);
  double hom = 0.0, orth = 0.0, vec = 0.0;
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto g1 = rotations::random_rotation(rng), g2 = rotations::random_rotation(rng);
    const auto d1 = rotations::wigner_d(g1, 8, table), d2 = rotations::wigner_d(g2, 8, table);
    const auto d12 = rotations::wigner_d(g1.compose(g2), 8, table);
    for (int l = 0; l <= 8; ++l) {
      hom = std::max(hom, (d12[l] - d1[l] * d2[l]).cwiseAbs().maxCoeff());
      orth = std::max(orth, (d1[l] * d1[l].transpose() - Eigen::MatrixXd::Identity(2 * l + 1, 2 * l + 1))
                                .cwiseAbs()
                                .maxCoeff());
    }
    vec = std::max(vec, (d1[1] - g1.rotation()).cwiseAbs().maxCoeff());
  }
  return {hom < 1e-10 && orth < 1e-10 && vec < 1e-14,
          fmt("homomorphism=%.3g orthogonality=%.3g (tol 1e-10) |D1-R|=%.3g (tol 1e-14)", hom, orth, vec)};
}

Outcome ordinary_network() {
  constexpr int kIn = 7, kOut = 5;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  auto p = layers::dense_init(11, 0, kIn, kOut, Layout::compact);
  for (int j = 0; j < kOut; ++j) p.bias()(j) = normal(rng);
  double err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    IrrepFeatures x(Layout::compact, 0, kIn);
    for (auto& v : x.data()) v = normal(rng);
    const auto y = layers::activation(layers::dense_apply(p, x), "relu");
    for (int j = 0; j < kOut; ++j) {
      double affine = p.bias()(j);
      for (int i = 0; i < kIn; ++i) affine += x(0, 0, i) * p.weight(0, Parity::even)(i, j);
      err = std::max(err, std::abs(y(0, 0, j) - std::max(0.0, affine)));
    }
  }
  return {err < 1e-15, fmt("max_err=%.3g (tol 1e-15)", err)};
}

Outcome parity_bookkeeping() {
  const auto& table = oracle::table(2);
  std::mt19937_64 rng(8);
  IrrepFeatures x(Layout::compact, 1, 1), y(Layout::compact, 1, 1);
  const auto u = random_vec(rng), v = random_vec(rng);
  for (int k = 0; k < 3; ++k) {
    x(0, 1 + k, 0) = u[k];
    y(0, 1 + k, 0) = v[k];
  }
  layers::TensorParams p({Layout::compact, 1, Layout::compact, 1, 1, 1});
  const auto out = layers::tensor_apply(p, table, x, y, 1);
  bool ok = out.stores(1, Parity::even);
  const auto inversion = rotations::GroupElement::inversion();
  const auto d = rotations::wigner_d(inversion, 1, table);
  const auto xi = irreps::transform(x, inversion, d), yi = irreps::transform(y, inversion, d);
  const auto out_i = layers::tensor_apply(p, table, xi, yi, 1);
  int mismatches = 0;
  for (int k = 0; k < 3; ++k) {
    mismatches += xi.block(1, Parity::odd)(k, 0) != -x.block(1, Parity::odd)(k, 0);
    mismatches += out_i.block(1, Parity::even)(k, 0) != out.block(1, Parity::even)(k, 0);
    mismatches += out_i.block(1, Parity::odd)(k, 0) != -out.block(1, Parity::odd)(k, 0);
  }
  // The pseudovector block is the cross product up to the coupling constant.
  const auto cross = oracle::vector_coupling(u, v, 1);
  double err = 0.0;
  for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(out.block(1, Parity::even)(k, 0) - cross[k]));
  ok = ok && mismatches == 0 && err < 1e-14;
  return {ok, fmt("sign_mismatches=%.0f pseudovector_vs_cross=%.3g output_layout_general=%.0f", mismatches, err,
                  out.layout() == Layout::general)};
}

Outcome negative_control() {
  const auto report = check::run_suite("broken-demo", {4, 8, 100, 9}, oracle::table(8));
  return {report.max_dev > 1e-2, fmt("max_dev=%.3g (must exceed 1e-2)", report.max_dev)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"golden vector couplings", golden_vector_couplings},
      {"spherical harmonic orthonormality", sh_orthonormality},
      {"coupling coefficients match oracle", cgc_oracle},
      {"tensor decomposition preserves norm", norm_preservation},
      {"equivariance suite", equivariance_suite},
      {"Wigner-D properties", wigner_properties},
      {"ordinary network reduction", ordinary_network},
      {"parity bookkeeping", parity_bookkeeping},
      {"negative control detected", negative_control},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] criterion %d: %s  %s\n", o.pass ? "PASS" : "FAIL", index, c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
