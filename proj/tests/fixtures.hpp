#pragma once

#include <numbers>
#include <vector>

#include "sparseproc/system_model.hpp"

namespace fixtures {

using sparseproc::build_system;
using sparseproc::cplx;
using sparseproc::PoleZeroSystem;

inline PoleZeroSystem levy() { return build_system({0.0}); }
inline PoleZeroSystem levy2() { return build_system({0.0, 0.0}); }
inline PoleZeroSystem oscillator() {
  constexpr double w = 3.0 * std::numbers::pi / 4.0;
  return build_system({cplx(0.0, w), cplx(0.0, -w)});
}
inline PoleZeroSystem car2() {
  constexpr double w = std::numbers::pi / 2.0;
  return build_system({cplx(-0.05, w), cplx(-0.05, -w)});
}
inline std::vector<PoleZeroSystem> worked_examples() { return {levy(), levy2(), oscillator(), car2()}; }

}  // namespace fixtures
