#pragma once

#include <cmath>
#include <stdexcept>

namespace fps {

// Chebyshev polynomial of the second kind, U_n(x), n >= -1 (U_{-1} = 0).
//
// Inside [-1, 1] the forward recurrence U_{m+1} = 2x U_m - U_{m-1} is stable.
// Outside, the recurrence amplifies rounding exponentially, so the hyperbolic
// closed form U_n(cosh t) = sinh((n+1)t)/sinh(t) is used instead, with
// U_n(-x) = (-1)^n U_n(x) handling the negative branch.
inline double chebyshev_u(int n, double x) {
  if (n < -1) throw std::invalid_argument("chebyshev_u: order must be >= -1");
  if (n == -1) return 0.0;
  const double ax = std::abs(x);
  if (ax <= 1.0) {
    double prev = 0.0;
    double cur = 1.0;
    for (int m = 0; m < n; ++m) {
      const double next = 2.0 * x * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  const double t = std::acosh(ax);
  const double mag = std::sinh((n + 1) * t) / std::sinh(t);
  return (x < 0.0 && n % 2 == 1) ? -mag : mag;
}

}  // namespace fps
