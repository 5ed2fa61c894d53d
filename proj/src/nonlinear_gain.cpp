#include "npidob/nonlinear_gain.hpp"

namespace npidob {

double mu(double x, double l_p, double x_max) {
  const double r = x / x_max;
  return l_p * x / (r * r + 1.0);
}

double d_mu(double x, double l_p, double x_max) {
  const double r2 = (x / x_max) * (x / x_max);
  const double den = r2 + 1.0;
  return l_p * (1.0 - r2) / (den * den);
}

}  // namespace npidob
