#include <doctest.h>

#include <cmath>
#include <random>

#include "npidob/nonlinear_gain.hpp"
#include "npidob/outer_loop.hpp"
#include "npidob/plant.hpp"

using namespace npidob;

namespace {
const MotorParams kMotor = reference_motor();
const GainSet kGains = reference_gains();

// Load-observer pair with a well-damped discrete loop at 10 kHz.
GainSet damped_gains() {
  GainSet g = kGains;
  g.l_p_tau = 0.0885;
  g.l_i_tau = 4.46;
  return g;
}
}  // namespace

TEST_CASE("torque modulation") {
  CHECK(torque_modulation(0, 0, 52.36, 0, 0, kGains, kMotor) == doctest::Approx(0.036652).epsilon(1e-12));
  CHECK(torque_modulation(0, 0, 0, 0, 0, kGains, kMotor) == 0.0);
  CHECK(torque_modulation(1, 0, 0, 0, 0, kGains, kMotor) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(torque_modulation(0, 1, 0, 0, 0, kGains, kMotor) == doctest::Approx(0.0214).epsilon(1e-15));
  CHECK(torque_modulation(0, 0, 0, 1, 0, kGains, kMotor) == doctest::Approx(4.46e-4).epsilon(1e-15));
  CHECK(torque_modulation(0, 0, 0, 0, -0.3, kGains, kMotor) == -0.3);
}

TEST_CASE("current references") {
  const AlphaBeta i = current_references(0.0948, 0.0, kMotor);
  CHECK(i.alpha == 0.0);
  CHECK(i.beta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(current_references(0.0, 1.234, kMotor) == AlphaBeta{0.0, 0.0});
  const OuterCommand c = outer_command(0.0948, 0.0, kMotor);
  CHECK(c.tau_m_d == 0.0948);
  CHECK(c.i_beta_d == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("references reproduce the requested torque") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> tau(-2.0, 2.0), th(-100.0, 100.0);
  for (int n = 0; n < 2000; ++n) {
    const double t = tau(rng), theta = th(rng);
    const AlphaBeta i = current_references(t, theta, kMotor);
    CHECK(std::abs(motor_torque(i.alpha, i.beta, theta, kMotor) - t) < 1e-12 * std::max(1.0, std::abs(t)));
  }
}

TEST_CASE("observer at rest produces nothing") {
  const OuterObserverState s = init_outer_observer(52.36);
  CHECK(s.omega_hat == 52.36);
  CHECK(s.z_tau == 0.0);
  CHECK(outer_dob_output(s, 52.36, kGains) == 0.0);
  const double tau_m = kMotor.B * 52.36;
  const OuterUpdate u = outer_dob_update(s, 52.36, tau_m, 1e-4, kGains, kMotor);
  CHECK(u.tau_L_hat == 0.0);
  CHECK(u.state.z_tau == 0.0);
  CHECK(u.state.omega_hat == doctest::Approx(52.36).epsilon(1e-15));
}

TEST_CASE("output is formed before the integrators move") {
  const OuterObserverState s{10.0, 0.02, 0.0};
  const double w = 10.5;
  const double expected = -mu(w - s.omega_hat, kGains.l_p_tau, kGains.omega_tilde_max) - kGains.l_i_tau * s.z_tau;
  const OuterUpdate u = outer_dob_update(s, w, 0.1, 1e-4, kGains, kMotor);
  CHECK(u.tau_L_hat == expected);
  CHECK(u.state.tau_L_hat == expected);
  CHECK(outer_dob_output(s, w, kGains) == expected);
  CHECK(u.state.z_tau == doctest::Approx(0.02 + 1e-4 * 0.5).epsilon(1e-15));
}

TEST_CASE("observer recovers a constant load torque") {
  // Mechanical model with ideal torque tracking, integrated finely between ticks.
  const GainSet g = damped_gains();
  const double tau_L = -0.3, tau_m = 0.05, dt = 1e-4;
  double omega = 52.36;
  OuterObserverState s = init_outer_observer(omega);
  double est = 0.0;
  for (int k = 0; k < 30000; ++k) {
    const OuterUpdate u = outer_dob_update(s, omega, tau_m, dt, g, kMotor);
    s = u.state;
    est = u.tau_L_hat;
    for (int j = 0; j < 10; ++j) omega += dt / 10 * (tau_m - tau_L - kMotor.B * omega) / kMotor.J;
  }
  CHECK(est == doctest::Approx(tau_L).epsilon(1e-6));
}
