#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "irrepcore/equivariance.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/rotations.hpp"
#include "support/oracles.hpp"

using namespace irrepcore;
using rotations::GroupElement;
using doctest::Approx;

TEST_CASE("group elements validate their input") {
  CHECK_NOTHROW(GroupElement(Eigen::Matrix3d::Identity(), -1));
  CHECK_THROWS_AS(GroupElement(2.0 * Eigen::Matrix3d::Identity()), InvalidArgument);
  CHECK_THROWS_AS(GroupElement(-Eigen::Matrix3d::Identity()), InvalidArgument);
  CHECK_THROWS_AS(GroupElement(Eigen::Matrix3d::Identity(), 0), InvalidArgument);

  const auto inv = GroupElement::inversion();
  CHECK(inv.matrix() == -Eigen::Matrix3d::Identity());
  CHECK(inv.compose(inv).sign() == 1);

  const auto a = rotations::axis_angle(Eigen::Vector3d::UnitZ(), 0.3);
  const auto b = rotations::axis_angle(Eigen::Vector3d::UnitX(), -1.1);
  const auto ab = a.compose(b);
  CHECK((ab.rotation() - a.rotation() * b.rotation()).cwiseAbs().maxCoeff() < 1e-15);
  const auto quarter = rotations::axis_angle(Eigen::Vector3d::UnitZ(), std::numbers::pi / 2);
  CHECK((quarter.rotation() * Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitY()).norm() < 1e-15);
}

TEST_CASE("random rotations are proper, reproducible and centered") {
  std::mt19937_64 a(99), b(99);
  const auto ga = rotations::random_rotation(a);
  const auto gb = rotations::random_rotation(b);
  CHECK(ga.rotation() == gb.rotation());
  CHECK(ga.sign() == 1);
  CHECK(ga.rotation().determinant() == Approx(1.0).epsilon(1e-14));

  constexpr int kSamples = 100000;
  std::mt19937_64 rng(1);
  Eigen::Matrix3d mean = Eigen::Matrix3d::Zero();
  for (int i = 0; i < kSamples; ++i) mean += rotations::random_rotation(rng).rotation();
  mean /= kSamples;
  // each entry of a Haar rotation has mean 0 and variance 1/3
  const double sigma = std::sqrt(1.0 / 3.0) / std::sqrt(static_cast<double>(kSamples));
  CHECK(mean.cwiseAbs().maxCoeff() < 5 * sigma);
}

TEST_CASE("Wigner-D at the identity and at degree one") {
  const auto& table = oracle::table(8);
  const auto id = rotations::wigner_d(GroupElement::identity(), 8, table);
  CHECK(id.max_degree() == 8);
  for (int l = 0; l <= 8; ++l) CHECK((id[l] - Eigen::MatrixXd::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() < 1e-13);

  std::mt19937_64 rng(4);
  const auto g = rotations::random_rotation(rng);
  const auto d = rotations::wigner_d(g, 1, table);
  CHECK((d[1] - g.rotation()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(d[0](0, 0) == 1.0);
  // only the rotation part enters
  const auto flipped = rotations::wigner_d(GroupElement(g.rotation(), -1), 3, table);
  const auto plain = rotations::wigner_d(g, 3, table);
  for (int l = 0; l <= 3; ++l) CHECK(flipped[l] == plain[l]);
}

TEST_CASE("quarter turn about z at degree 2 matches a sampled fit") {
  const auto& table = oracle::table(2);
  const auto g = rotations::axis_angle(Eigen::Vector3d::UnitZ(), std::numbers::pi / 2);
  const auto d = rotations::wigner_d(g, 2, table);
  const auto fit = oracle::wigner_from_sh(g.rotation(), 2);
  CHECK((d[2] - fit).cwiseAbs().maxCoeff() < 1e-12);
  // xy changes sign and x^2 - y^2 changes sign under the quarter turn; z^2 is fixed
  CHECK(d[2](0, 0) == Approx(-1.0));
  CHECK(d[2](1, 1) == Approx(-1.0));
  CHECK(d[2](4, 4) == Approx(1.0));
}

TEST_CASE("Wigner-D is an orthogonal homomorphism") {
  const auto& table = oracle::table(8);
  std::mt19937_64 rng(6);
  double hom = 0.0, orth = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto a = rotations::random_rotation(rng), b = rotations::random_rotation(rng);
    const auto da = rotations::wigner_d(a, 8, table), db = rotations::wigner_d(b, 8, table);
    const auto dab = rotations::wigner_d(a.compose(b), 8, table);
    for (int l = 0; l <= 8; ++l) {
      hom = std::max(hom, (dab[l] - da[l] * db[l]).cwiseAbs().maxCoeff());
      orth = std::max(orth, (da[l] * da[l].transpose() - Eigen::MatrixXd::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff());
    }
  }
  CHECK(hom < 1e-10);
  CHECK(orth < 1e-12);
}

TEST_CASE("Wigner-D beyond the table is a capacity error") {
  CHECK_THROWS_AS(rotations::wigner_d(GroupElement::identity(), 3, oracle::table(2)), CapacityError);
  CHECK_THROWS_AS(rotations::WignerDSet({}), InvalidArgument);
}

TEST_CASE("equivariance harness") {
  const auto& table = oracle::table(3);
  const rotations::FeatureShape shape{irreps::Layout::general, 3, 4};

  SUBCASE("identity is exact") {
    const auto report = rotations::check_equivariance(
        "identity", [](const irreps::IrrepFeatures& x) { return x; }, shape, 3, 10, 5, table);
    CHECK(report.max_dev == 0.0);
    CHECK(report.trials == 10);
    CHECK(report.passed(1e-10));
  }

  SUBCASE("a broken op is flagged") {
    const auto report = rotations::check_equivariance(
        "broken",
        [](irreps::IrrepFeatures x) {
          for (int f = 0; f < x.num_features(); ++f) x(1, 1, f) = -x(1, 1, f);
          return x;
        },
        shape, 3, 10, 5, table);
    CHECK(report.max_dev > 1e-2);
    CHECK_FALSE(report.passed(1e-10));
  }

  SUBCASE("failures carry the trial") {
    int calls = 0;
    const rotations::FeatureOp op = [&calls](const irreps::IrrepFeatures& x) {
      if (++calls == 3) throw std::runtime_error("boom");
      return x;
    };
    bool saw_nested = false;
    try {
      rotations::check_equivariance("flaky", op, shape, 3, 5, 1, table);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("trial") != std::string::npos);
      try {
        std::rethrow_if_nested(e);
      } catch (const std::runtime_error& inner) {
        saw_nested = std::string(inner.what()) == "boom";
      }
    }
    CHECK(saw_nested);
  }

  SUBCASE("reports are deterministic and serialize in a fixed key order") {
    const auto op = [](const irreps::IrrepFeatures& x) { return x; };
    const auto a = rotations::check_equivariance("id", op, shape, 3, 3, 42, table);
    const auto b = rotations::check_equivariance("id", op, shape, 3, 3, 42, table);
    CHECK(a.to_json() == b.to_json());
    const std::string json = a.to_json();
    const auto pos = [&json](const char* key) { return json.find(std::string("\"") + key + "\""); };
    CHECK(pos("op") < pos("trials"));
    CHECK(pos("trials") < pos("seed"));
    CHECK(pos("seed") < pos("max_dev"));
    CHECK(pos("max_dev") < pos("per_block"));
  }

  SUBCASE("trial streams are independent of order") {
    auto first = rotations::trial_rng(7, 3);
    auto again = rotations::trial_rng(7, 3);
    auto other = rotations::trial_rng(7, 4);
    const auto x = first();
    CHECK(x == again());
    CHECK(x != other());
  }
}
