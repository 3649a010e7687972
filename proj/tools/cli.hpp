#pragma once

#include <iosfwd>

namespace irrepcore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitDomainError = 2;
inline constexpr int kExitUsage = 64;

/// Entry point shared by the executable and the tests. Binary payloads go to
/// `out` unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irrepcore::cli
