#include "npidob/inner_loop.hpp"

#include <cmath>

#include "npidob/errors.hpp"
#include "npidob/nonlinear_gain.hpp"

namespace npidob {

AlphaBeta current_control(AlphaBeta e, AlphaBeta d_hat, const GainSet& g) {
  const double v = e.alpha * e.alpha + e.beta * e.beta;
  const double k = g.eta1 / (v + g.eta2);
  return {-k * e.alpha + d_hat.alpha, -k * e.beta + d_hat.beta};
}

AlphaBeta voltage_reference(AlphaBeta i_d, double omega, double theta, AlphaBeta u,
                            const MotorParams& p) {
  const double el = p.P * theta;
  const double emf = p.P * p.Phi * omega;
  return {p.R * i_d.alpha - emf * std::sin(el) - u.alpha,
          p.R * i_d.beta + emf * std::cos(el) - u.beta};
}

AxisObserverState init_inner_axis(double e_meas) { return {e_meas, 0.0, 0.0}; }

double inner_dob_output(const AxisObserverState& s, double e_meas, const GainSet& g) {
  return -mu(e_meas - s.e_hat, g.l_p_e, g.e_tilde_max) - g.l_i_e * s.z;
}

AxisUpdate inner_dob_update(const AxisObserverState& s, double e_meas, double u, double dt,
                            const GainSet& g, const MotorParams& p) {
  const double e_tilde = e_meas - s.e_hat;
  const double m = mu(e_tilde, g.l_p_e, g.e_tilde_max);
  const double d_hat = -m - g.l_i_e * s.z;

  AxisObserverState next;
  next.z = s.z + dt * e_tilde;
  const double d_hat_next = -m - g.l_i_e * next.z;
  next.e_hat = s.e_hat + dt * (-p.R * s.e_hat + u - d_hat_next) / p.L;
  next.d_hat = d_hat;

  if (!std::isfinite(next.e_hat) || !std::isfinite(next.z))
    throw Error::non_finite("inner observer state");
  return {next, d_hat};
}

}  // namespace npidob
