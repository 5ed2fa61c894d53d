#pragma once

#include "npidob/params.hpp"

namespace npidob {

// Continuous plant state. theta is never wrapped.
struct MotorState {
  double theta = 0.0;    // [rad]
  double omega = 0.0;    // [rad/s]
  double i_alpha = 0.0;  // [A]
  double i_beta = 0.0;   // [A]

  bool operator==(const MotorState&) const = default;
};

struct StateDerivative {
  double theta_dot = 0.0;
  double omega_dot = 0.0;
  double i_alpha_dot = 0.0;
  double i_beta_dot = 0.0;
};

struct PlantInputs {
  double v_alpha = 0.0;  // terminal voltage [V]
  double v_beta = 0.0;
  double tau_L = 0.0;  // load torque [N m]
};

// Ideal sensors; same layout as the state.
using Measurement = MotorState;

// Electromagnetic torque of a surface-mounted PMSM in the alpha-beta frame.
double motor_torque(double i_alpha, double i_beta, double theta, const MotorParams& p);

StateDerivative plant_derivative(const MotorState& x, const PlantInputs& u, const MotorParams& p);

// Classical RK4 step with inputs held over the step.
// Throws Error(NonFiniteState) if the result is not finite.
MotorState rk4_step(const MotorState& x, const PlantInputs& u, double dt, const MotorParams& p);

Measurement measure(const MotorState& x);

bool is_finite(const MotorState& x);

}  // namespace npidob
