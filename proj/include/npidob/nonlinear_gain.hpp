#pragma once

namespace npidob {

// Saturating proportional gain used by both disturbance observers:
//   mu(x) = l_p x / ((x / x_max)^2 + 1)
// Odd, peaks at +-l_p x_max / 2 when |x| = x_max, decays like 1/x beyond.
double mu(double x, double l_p, double x_max);

// d mu / dx = l_p (1 - (x/x_max)^2) / ((x/x_max)^2 + 1)^2. Equals l_p at 0,
// vanishes at +-x_max, and |d_mu| <= l_p everywhere.
double d_mu(double x, double l_p, double x_max);

}  // namespace npidob
