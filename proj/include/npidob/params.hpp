#pragma once

// Physical constants and controller gains. All quantities SI.

namespace npidob {

struct MotorParams {
  double R = 0.0;    // winding resistance [ohm]
  double L = 0.0;    // winding inductance [H]
  double Phi = 0.0;  // rotor flux linkage [Wb]
  int P = 0;         // pole pairs
  double J = 0.0;    // rotor inertia [kg m^2]
  double B = 0.0;    // viscous friction [N m s/rad]

  // Torque constant (3/2) P Phi [N m/A].
  double k_m() const { return 1.5 * P * Phi; }

  bool operator==(const MotorParams&) const = default;
};

struct GainSet {
  double k_theta = 0.0;
  double k_omega = 0.0;
  double l_p_tau = 0.0;
  double l_i_tau = 0.0;
  double omega_tilde_max = 0.0;  // [rad/s]
  double l_p_e = 0.0;
  double l_i_e = 0.0;
  double e_tilde_max = 0.0;  // [A]
  double eta1 = 0.0;
  double eta2 = 0.0;

  bool operator==(const GainSet&) const = default;
};

// A quantity resolved on the stationary two-axis frame.
struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;

  bool operator==(const AlphaBeta&) const = default;
};

inline AlphaBeta operator+(AlphaBeta a, AlphaBeta b) { return {a.alpha + b.alpha, a.beta + b.beta}; }
inline AlphaBeta operator-(AlphaBeta a, AlphaBeta b) { return {a.alpha - b.alpha, a.beta - b.beta}; }

// Motor data and gains of the reference test bench (inductance 0.275 mH).
MotorParams reference_motor();
GainSet reference_gains();

}  // namespace npidob
