#pragma once

namespace motivic {

/// Every numerical threshold used by root finding and the invariant checks.
struct Tolerances {
  double root_update = 1e-13; ///< Aberth stops once every correction is below this
  double residual = 1e-10;    ///< |P(z)| / |P'(z)| at each accepted root
  double assertion = 1e-9;    ///< palindrome pairing and Weil-circle checks
  int max_iterations = 500;
};

} // namespace motivic
