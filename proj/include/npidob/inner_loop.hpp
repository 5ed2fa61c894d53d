#pragma once

#include "npidob/params.hpp"

namespace npidob {

// Per-axis state of the inner disturbance observer.
struct AxisObserverState {
  double e_hat = 0.0;  // estimate of the current tracking error [A]
  double z = 0.0;      // integral of e - e_hat [A s]
  double d_hat = 0.0;  // output from the most recent measurement [V]

  bool operator==(const AxisObserverState&) const = default;
};

struct InnerObserverState {
  AxisObserverState alpha;
  AxisObserverState beta;

  bool operator==(const InnerObserverState&) const = default;
};

struct InnerCommand {
  AlphaBeta u;    // feedback inputs [V]
  AlphaBeta v_d;  // voltage references [V]
};

// Lyapunov-redesign current law with shared V = e_a^2 + e_b^2:
//   u_j = -eta1 e_j / (V + eta2) + d_hat_j
AlphaBeta current_control(AlphaBeta e, AlphaBeta d_hat, const GainSet& g);

// v_a = R i_a^d - P Phi sin(P theta) omega - u_a
// v_b = R i_b^d + P Phi cos(P theta) omega - u_b
AlphaBeta voltage_reference(AlphaBeta i_d, double omega, double theta, AlphaBeta u,
                            const MotorParams& p);

AxisObserverState init_inner_axis(double e_meas);

// d_hat = -mu_e(e_meas - e_hat) - l_i_e z.
double inner_dob_output(const AxisObserverState& s, double e_meas, const GainSet& g);

struct AxisUpdate {
  AxisObserverState state;
  double d_hat = 0.0;
};

// Same integral-first scheme as the load-torque observer, on the model
// e_hat' = -(R/L) e_hat + u/L - d_hat/L.
AxisUpdate inner_dob_update(const AxisObserverState& s, double e_meas, double u, double dt,
                            const GainSet& g, const MotorParams& p);

}  // namespace npidob
