#include "npidob/plant.hpp"

#include <cmath>

#include "npidob/errors.hpp"

namespace npidob {

namespace {

MotorState axpy(const MotorState& x, double h, const StateDerivative& d) {
  return {x.theta + h * d.theta_dot, x.omega + h * d.omega_dot, x.i_alpha + h * d.i_alpha_dot,
          x.i_beta + h * d.i_beta_dot};
}

}  // namespace

double motor_torque(double i_alpha, double i_beta, double theta, const MotorParams& p) {
  const double el = p.P * theta;
  return -p.k_m() * std::sin(el) * i_alpha + p.k_m() * std::cos(el) * i_beta;
}

StateDerivative plant_derivative(const MotorState& x, const PlantInputs& u, const MotorParams& p) {
  const double el = p.P * x.theta;
  const double s = std::sin(el);
  const double c = std::cos(el);
  const double back_emf = p.P * p.Phi * x.omega;
  const double tau_m = motor_torque(x.i_alpha, x.i_beta, x.theta, p);

  StateDerivative d;
  d.theta_dot = x.omega;
  d.omega_dot = (-p.B * x.omega + tau_m - u.tau_L) / p.J;
  d.i_alpha_dot = (-p.R * x.i_alpha + back_emf * s + u.v_alpha) / p.L;
  d.i_beta_dot = (-p.R * x.i_beta - back_emf * c + u.v_beta) / p.L;
  return d;
}

MotorState rk4_step(const MotorState& x, const PlantInputs& u, double dt, const MotorParams& p) {
  const StateDerivative k1 = plant_derivative(x, u, p);
  const StateDerivative k2 = plant_derivative(axpy(x, 0.5 * dt, k1), u, p);
  const StateDerivative k3 = plant_derivative(axpy(x, 0.5 * dt, k2), u, p);
  const StateDerivative k4 = plant_derivative(axpy(x, dt, k3), u, p);

  const double w = dt / 6.0;
  MotorState next{
      x.theta + w * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot),
      x.omega + w * (k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot + k4.omega_dot),
      x.i_alpha + w * (k1.i_alpha_dot + 2.0 * k2.i_alpha_dot + 2.0 * k3.i_alpha_dot + k4.i_alpha_dot),
      x.i_beta + w * (k1.i_beta_dot + 2.0 * k2.i_beta_dot + 2.0 * k3.i_beta_dot + k4.i_beta_dot)};
  if (!is_finite(next)) throw Error::non_finite("motor state");
  return next;
}

Measurement measure(const MotorState& x) { return x; }

bool is_finite(const MotorState& x) {
  return std::isfinite(x.theta) && std::isfinite(x.omega) && std::isfinite(x.i_alpha) &&
         std::isfinite(x.i_beta);
}

}  // namespace npidob
