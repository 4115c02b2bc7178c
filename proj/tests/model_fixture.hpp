#pragma once

#include "shockform/model.hpp"

namespace shockform::testing {

// Shared pipelines at default resolution; built once per test binary.
inline const ShockModel& burgers_model() {
  static ShockModel m{burgers_standard()};
  return m;
}

inline const ShockModel& exponential_model() {
  static ShockModel m{exponential_standard()};
  return m;
}

}  // namespace shockform::testing
