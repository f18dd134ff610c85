#pragma once

#include <cstdint>

namespace matchsim {

// Counts elementary letter operations: one tick per comparison of two
// letters, whether for equality or for adjacency in the compatibility
// graph. Kernels, detection predicates and coalescence-equality tests all
// report through the active meter; everything else (counting formulas,
// trace enumeration) runs unmetered.
struct OperationMeter {
  std::uint64_t count = 0;
};

namespace detail {
inline thread_local OperationMeter* active_meter = nullptr;
}

inline void note_op() {
  if (detail::active_meter != nullptr) ++detail::active_meter->count;
}

// RAII activation; scopes nest, inner scope wins.
class MeterScope {
public:
  explicit MeterScope(OperationMeter& meter) : prev_(detail::active_meter) {
    detail::active_meter = &meter;
  }
  ~MeterScope() { detail::active_meter = prev_; }
  MeterScope(const MeterScope&) = delete;
  MeterScope& operator=(const MeterScope&) = delete;

private:
  OperationMeter* prev_;
};

}  // namespace matchsim
