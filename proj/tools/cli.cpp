#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "irrepcore/basis.hpp"
#include "irrepcore/cgc.hpp"
#include "irrepcore/errors.hpp"
#include "irrepcore/irreps.hpp"
#include "irrepcore/layers.hpp"
#include "irrepcore/sh.hpp"
#include "irrepcore/suites.hpp"

namespace irrepcore::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

sh::Vec3 parse_vector(const std::string& text) {
  sh::Vec3 r{};
  const char* p = text.data();
  const char* end = p + text.size();
  for (int k = 0; k < 3; ++k) {
    const auto [next, ec] = std::from_chars(p, end, r[k]);
    if (ec != std::errc()) throw UsageError("--r: expected three comma-separated numbers, got \"" + text + "\"");
    p = next;
    if (k < 2) {
      if (p == end || *p != ',') throw UsageError("--r: expected three comma-separated numbers, got \"" + text + "\"");
      ++p;
    }
  }
  if (p != end) throw UsageError("--r: trailing characters in \"" + text + "\"");
  return r;
}

irreps::Layout parse_layout(const std::string& name) {
  if (name == "compact") return irreps::Layout::compact;
  if (name == "general") return irreps::Layout::general;
  throw UsageError("unknown layout \"" + name + "\"");
}

/// Writes through `out` or, when a path is given, a binary file.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open \"" + path + "\" for writing");
  body(file);
  if (!file) throw InvalidArgument("failed writing \"" + path + "\"");
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ShArgs {
  std::string r;
  int max_degree = 2;
  bool solid = false;
};

int cmd_sh(const ShArgs& a, std::ostream& out) {
  const auto r = parse_vector(a.r);
  const auto y = a.solid ? sh::eval_solid_sh(r, a.max_degree) : sh::eval_sh(r, a.max_degree);
  out << "l,m,value\n";
  for (int l = 0; l <= a.max_degree; ++l)
    for (int o = 0; o <= 2 * l; ++o) {
      const int m = sh::order_at(l, o);
      out << l << ',' << m << ',' << number(y(l, m)) << '\n';
    }
  return kExitOk;
}

struct CgcArgs {
  int max_degree = 2;
  std::string format = "csv";
  std::string path;
};

int cmd_cgc(const CgcArgs& a, std::ostream& out, std::ostream& err) {
  const auto table = cgc::build_cgc_table(a.max_degree);
  emit(a.path, out, [&](std::ostream& os) {
    if (a.format == "csv") {
      cgc::write_csv(os, table);
    } else if (a.format == "blob") {
      cgc::write_blob(os, table);
    } else {
      nlohmann::ordered_json j;
      j["max_degree"] = table.max_degree();
      j["checksum"] = hex64(cgc::checksum(table));
      auto& entries = j["entries"] = nlohmann::ordered_json::array();
      for (int l1 = 0; l1 <= a.max_degree; ++l1)
        for (int l2 = 0; l2 <= a.max_degree; ++l2)
          for (int l3 = std::abs(l1 - l2); l3 <= std::min(l1 + l2, a.max_degree); ++l3)
            for (const auto& e : table.block(l1, l2, l3))
              entries.push_back({l1, sh::order_at(l1, e.offset1), l2, sh::order_at(l2, e.offset2), l3,
                                 sh::order_at(l3, e.offset3), e.value});
      os << j.dump() << '\n';
    }
  });
  err << "checksum " << hex64(cgc::checksum(table)) << '\n';
  return kExitOk;
}

struct CheckArgs {
  std::string suite = "all";
  check::SuiteConfig config{4, 8, 100, 0};
  double tolerance = 1e-10;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
  std::vector<std::string> suites;
  try {
    suites = check::expand_suite(a.suite);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto table = cgc::build_cgc_table(a.config.max_degree);
  bool all_passed = true;
  for (const auto& name : suites) {
    const auto report = check::run_suite(name, a.config, table);
    all_passed = all_passed && report.passed(a.tolerance);
    out << report.to_json() << '\n';
  }
  return all_passed ? kExitOk : kExitVerificationFailed;
}

struct BenchArgs {
  int iterations = 10000;
  std::uint64_t seed = 0;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  const auto elapsed = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };
  std::mt19937_64 rng(a.seed);
  std::normal_distribution<double> normal;

  auto t0 = clock::now();
  const auto table = cgc::build_cgc_table(std::min(8, max_supported_degree()));
  const double cgc_s = elapsed(t0);

  constexpr int kTensorDegree = 2, kTensorFeatures = 64;
  const auto params = layers::tensor_init(
      {irreps::Layout::compact, kTensorDegree, irreps::Layout::compact, kTensorDegree, kTensorDegree, kTensorFeatures});
  irreps::IrrepFeatures x(irreps::Layout::compact, kTensorDegree, kTensorFeatures);
  irreps::IrrepFeatures y(irreps::Layout::compact, kTensorDegree, kTensorFeatures);
  for (auto& v : x.data()) v = normal(rng);
  for (auto& v : y.data()) v = normal(rng);
  double tensor_sum = 0.0;
  t0 = clock::now();
  for (int i = 0; i < a.iterations; ++i) tensor_sum += layers::tensor_apply(params, table, x, y, kTensorDegree).data()[0];
  const double tensor_s = elapsed(t0);

  const int sh_degree = std::min(8, table.max_degree());
  std::vector<sh::Vec3> points(static_cast<std::size_t>(a.iterations));
  for (auto& p : points) p = {normal(rng), normal(rng), normal(rng)};
  double sh_sum = 0.0;
  t0 = clock::now();
  for (const auto& p : points) sh_sum += sh::eval_sh(p, sh_degree)(sh_degree, 0);
  const double sh_s = elapsed(t0);

  nlohmann::ordered_json j;
  j["cgc_build"] = {{"max_degree", table.max_degree()}, {"seconds", cgc_s}, {"checksum", hex64(cgc::checksum(table))}};
  j["tensor_apply"] = {{"calls", a.iterations}, {"max_degree", kTensorDegree}, {"features", kTensorFeatures},
                       {"seconds", tensor_s}, {"result_sum", tensor_sum}};
  j["eval_sh"] = {{"calls", a.iterations}, {"max_degree", sh_degree}, {"seconds", sh_s}, {"result_sum", sh_sum}};
  out << j.dump() << '\n';
  return kExitOk;
}

struct FeaturizeArgs {
  std::string r;
  int max_degree = 2;
  std::string kind = "gaussian";
  basis::RadialBasisSpec spec;
};

int cmd_featurize(const FeaturizeArgs& a, std::ostream& out) {
  auto spec = a.spec;
  spec.kind = basis::parse_radial_kind(a.kind);
  const auto x = basis::featurize(parse_vector(a.r), spec, a.max_degree);
  out << "feature,l,m,value\n";
  for (int k = 0; k < spec.count; ++k)
    for (int l = 0; l <= a.max_degree; ++l)
      for (int o = 0; o <= 2 * l; ++o)
        out << k << ',' << l << ',' << sh::order_at(l, o) << ',' << number(x(0, l * l + o, k)) << '\n';
  return kExitOk;
}

struct DenseInitArgs {
  std::uint64_t seed = 0;
  int max_degree = 2;
  int in_features = 8;
  int out_features = 8;
  std::string layout = "compact";
  std::string path;
};

int cmd_dense_init(const DenseInitArgs& a, std::ostream& out, std::ostream& err) {
  const auto p = layers::dense_init(a.seed, a.max_degree, a.in_features, a.out_features, parse_layout(a.layout));
  emit(a.path, out, [&](std::ostream& os) { layers::write_blob(os, p); });
  err << "parameters " << p.num_weight_parameters() + static_cast<std::size_t>(p.out_features()) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real spherical harmonics, coupling tables and equivariant layers"};
  app.require_subcommand(1);

  ShArgs sh_args;
  auto* sh_cmd = app.add_subcommand("sh", "Evaluate real spherical harmonics at a point");
  sh_cmd->add_option("--r", sh_args.r, "Point as x,y,z")->required();
  sh_cmd->add_option("--L", sh_args.max_degree, "Maximum degree")->check(CLI::NonNegativeNumber);
  sh_cmd->add_flag("--solid", sh_args.solid, "Unnormalized solid harmonics r^l Y_l^m");

  CgcArgs cgc_args;
  auto* cgc_cmd = app.add_subcommand("cgc", "Build and export the coupling coefficient table");
  cgc_cmd->add_option("--L", cgc_args.max_degree, "Maximum degree")->check(CLI::NonNegativeNumber);
  cgc_cmd->add_option("--format", cgc_args.format, "csv, json or blob")
      ->check(CLI::IsMember({"csv", "json", "blob"}));
  cgc_cmd->add_option("--out", cgc_args.path, "Output file (default stdout)");

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Run randomized equivariance suites");
  check_cmd->add_option("--suite", check_args.suite, "Suite name or \"all\"");
  check_cmd->add_option("--L", check_args.config.max_degree, "Maximum degree")->check(CLI::PositiveNumber);
  check_cmd->add_option("--F", check_args.config.num_features, "Features per block")->check(CLI::PositiveNumber);
  check_cmd->add_option("--trials", check_args.config.trials, "Random rotations")->check(CLI::PositiveNumber);
  check_cmd->add_option("--tol", check_args.tolerance, "Pass threshold on the max deviation")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", check_args.config.seed, "RNG seed");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Micro-benchmarks, reported as JSON");
  bench_cmd->add_option("--iterations", bench_args.iterations, "Calls per timed loop")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_args.seed, "RNG seed");

  FeaturizeArgs feat_args;
  auto* feat_cmd = app.add_subcommand("featurize", "Radial basis times spherical harmonics of one vector");
  feat_cmd->add_option("--r", feat_args.r, "Vector as x,y,z")->required();
  feat_cmd->add_option("--L", feat_args.max_degree, "Maximum degree")->check(CLI::NonNegativeNumber);
  feat_cmd->add_option("--radial-kind", feat_args.kind, "gaussian or reciprocal-bernstein")
      ->check(CLI::IsMember({"gaussian", "reciprocal-bernstein"}));
  feat_cmd->add_option("--radial-count", feat_args.spec.count, "Number of radial functions")
      ->check(CLI::PositiveNumber);
  feat_cmd->add_option("--cutoff", feat_args.spec.cutoff, "Cutoff radius")->check(CLI::PositiveNumber);

  DenseInitArgs dense_args;
  auto* dense_cmd = app.add_subcommand("dense-init", "Write freshly initialized dense-layer parameters");
  dense_cmd->add_option("--seed", dense_args.seed, "RNG seed");
  dense_cmd->add_option("--L", dense_args.max_degree, "Maximum degree")->check(CLI::NonNegativeNumber);
  dense_cmd->add_option("--Fin", dense_args.in_features, "Input features")->check(CLI::PositiveNumber);
  dense_cmd->add_option("--Fout", dense_args.out_features, "Output features")->check(CLI::PositiveNumber);
  dense_cmd->add_option("--layout", dense_args.layout, "compact or general")
      ->check(CLI::IsMember({"compact", "general"}));
  dense_cmd->add_option("--out", dense_args.path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sh_cmd->parsed()) return cmd_sh(sh_args, out);
    if (cgc_cmd->parsed()) return cmd_cgc(cgc_args, out, err);
    if (check_cmd->parsed()) return cmd_check(check_args, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_args, out);
    if (feat_cmd->parsed()) return cmd_featurize(feat_args, out);
    if (dense_cmd->parsed()) return cmd_dense_init(dense_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace irrepcore::cli
