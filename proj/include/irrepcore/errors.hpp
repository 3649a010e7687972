#pragma once

#include <stdexcept>
#include <string>

namespace irrepcore {

// Bad index, wrong shape, undefined input (e.g. Y_l^m at the origin).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested degree exceeds the configured maximum.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Input violates a documented precondition that depends on its values,
// e.g. pseudotensor content where only proper tensors are allowed.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Largest degree any table in this process may be built for. Defaults to
/// 8; the environment variable IRREPCORE_MAX_L overrides it up to
/// kHardMaxDegree.
int max_supported_degree();

inline constexpr int kDefaultMaxDegree = 8;
inline constexpr int kHardMaxDegree = 15;

}  // namespace irrepcore
