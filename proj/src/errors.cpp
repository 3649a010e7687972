#include "irrepcore/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace irrepcore {

int max_supported_degree() {
  if (const char* env = std::getenv("IRREPCORE_MAX_L"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end == '\0' && value >= 0) return static_cast<int>(std::min<long>(value, kHardMaxDegree));
  }
  return kDefaultMaxDegree;
}

}  // namespace irrepcore
