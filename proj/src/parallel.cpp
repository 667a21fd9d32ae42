#include "xycorr/parallel.hpp"

#include <cstdlib>
#include <string>

namespace xycorr {

int workers_from_env(int fallback) {
  const char* v = std::getenv("XYCORR_WORKERS");
  if (v == nullptr || *v == '\0') return std::max(1, fallback);
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used != std::string(v).size() || n < 1) return 1;
    return n;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace xycorr
