#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace aimg {

inline constexpr std::int64_t kDefaultCapOrder = 10'000'000;

/// Upper bound on the number of elements any materialized finite group may
/// hold. `AIMG_CAP_ORDER` overrides the default.
inline std::int64_t default_cap_order() {
  static const std::int64_t cap = [] {
    if (const char* env = std::getenv("AIMG_CAP_ORDER")) {
      try {
        auto v = std::stoll(env);
        if (v > 0) return static_cast<std::int64_t>(v);
      } catch (...) {
      }
    }
    return kDefaultCapOrder;
  }();
  return cap;
}

}  // namespace aimg
