#pragma once

#include "npidob/params.hpp"

namespace npidob {

// Load-torque observer state. tau_L_hat holds the output produced from the
// most recent measurement (before the integrators were advanced).
struct OuterObserverState {
  double omega_hat = 0.0;  // [rad/s]
  double z_tau = 0.0;      // integral of omega - omega_hat [rad]
  double tau_L_hat = 0.0;  // [N m]

  bool operator==(const OuterObserverState&) const = default;
};

struct OuterCommand {
  double tau_m_d = 0.0;
  double i_alpha_d = 0.0;
  double i_beta_d = 0.0;
};

// Desired torque: J w_dot_d + B w_d + k_theta e_theta + k_omega e_omega + tau_L_hat.
double torque_modulation(double e_theta, double e_omega, double omega_d, double omega_dot_d,
                         double tau_L_hat, const GainSet& g, const MotorParams& p);

// Alpha-beta currents producing tau_m_d at rotor angle theta.
AlphaBeta current_references(double tau_m_d, double theta, const MotorParams& p);

OuterCommand outer_command(double tau_m_d, double theta, const MotorParams& p);

// Starts the observer at the measured velocity with an empty integrator.
OuterObserverState init_outer_observer(double omega_meas);

// tau_L_hat = -mu_tau(omega_meas - omega_hat) - l_i_tau z_tau.
double outer_dob_output(const OuterObserverState& s, double omega_meas, const GainSet& g);

struct OuterUpdate {
  OuterObserverState state;
  double tau_L_hat = 0.0;
};

// One control period of the load-torque observer. The output is formed from
// the incoming state; then z_tau advances, and omega_hat advances through the
// model using the output re-evaluated with the new integral.
OuterUpdate outer_dob_update(const OuterObserverState& s, double omega_meas, double tau_m_d,
                             double dt, const GainSet& g, const MotorParams& p);

}  // namespace npidob
