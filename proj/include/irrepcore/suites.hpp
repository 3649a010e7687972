#pragma once

// Named equivariance suites shared by the `check` subcommand and the
// acceptance tests. Parameters for the layer suites are drawn from the seed,
// so a report is reproducible from (suite, L, F, trials, seed).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "irrepcore/cgc.hpp"
#include "irrepcore/equivariance.hpp"

namespace irrepcore::check {

struct SuiteConfig {
  int max_degree = 4;
  int num_features = 8;
  int trials = 100;
  std::uint64_t seed = 0;
};

/// Every registered suite, including the negative control "broken-demo".
std::vector<std::string> suite_names();

/// "all" expands to every suite except "broken-demo". Throws InvalidArgument
/// for unknown names.
std::vector<std::string> expand_suite(std::string_view name);

/// Runs one suite. The table must cover cfg.max_degree.
rotations::EquivarianceReport run_suite(std::string_view name, const SuiteConfig& cfg, const cgc::CgcTable& table);

}  // namespace irrepcore::check
