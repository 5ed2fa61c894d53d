#include "npidob/outer_loop.hpp"

#include <cmath>

#include "npidob/errors.hpp"
#include "npidob/nonlinear_gain.hpp"

namespace npidob {

double torque_modulation(double e_theta, double e_omega, double omega_d, double omega_dot_d,
                         double tau_L_hat, const GainSet& g, const MotorParams& p) {
  return p.J * omega_dot_d + p.B * omega_d + g.k_theta * e_theta + g.k_omega * e_omega + tau_L_hat;
}

AlphaBeta current_references(double tau_m_d, double theta, const MotorParams& p) {
  const double el = p.P * theta;
  const double amp = 2.0 * tau_m_d / (3.0 * p.P * p.Phi);
  return {-amp * std::sin(el), amp * std::cos(el)};
}

OuterCommand outer_command(double tau_m_d, double theta, const MotorParams& p) {
  const AlphaBeta i = current_references(tau_m_d, theta, p);
  return {tau_m_d, i.alpha, i.beta};
}

OuterObserverState init_outer_observer(double omega_meas) { return {omega_meas, 0.0, 0.0}; }

double outer_dob_output(const OuterObserverState& s, double omega_meas, const GainSet& g) {
  const double omega_tilde = omega_meas - s.omega_hat;
  return -mu(omega_tilde, g.l_p_tau, g.omega_tilde_max) - g.l_i_tau * s.z_tau;
}

OuterUpdate outer_dob_update(const OuterObserverState& s, double omega_meas, double tau_m_d,
                             double dt, const GainSet& g, const MotorParams& p) {
  const double omega_tilde = omega_meas - s.omega_hat;
  const double m = mu(omega_tilde, g.l_p_tau, g.omega_tilde_max);
  const double tau_hat = -m - g.l_i_tau * s.z_tau;

  OuterObserverState next;
  next.z_tau = s.z_tau + dt * omega_tilde;
  const double tau_hat_next = -m - g.l_i_tau * next.z_tau;
  next.omega_hat = s.omega_hat + dt * (-p.B * s.omega_hat + tau_m_d - tau_hat_next) / p.J;
  next.tau_L_hat = tau_hat;

  if (!std::isfinite(next.omega_hat) || !std::isfinite(next.z_tau))
    throw Error::non_finite("outer observer state");
  return {next, tau_hat};
}

}  // namespace npidob
