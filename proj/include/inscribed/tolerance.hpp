#pragma once

namespace inscribed {

struct ToleranceConfig {
  double ortho_tol = 1e-10;
  double inscribed_tol = 1e-9;
  double equalizer_tol = 1e-10;
  double bound_slack = 1e-9;

  bool valid() const {
    return ortho_tol > 0 && inscribed_tol > 0 && equalizer_tol > 0 && bound_slack > 0;
  }
};

// Absolute tolerance for the Σλ² = 4 and Σβ² = 1 constraint predicates.
inline constexpr double kConstraintTol = 1e-10;

}  // namespace inscribed
