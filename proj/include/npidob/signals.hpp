#pragma once

#include <cstdint>
#include <vector>

#include "npidob/params.hpp"

namespace npidob {

// Default velocity slew: a 52.36 -> 104.72 rad/s step completes in 0.1 s.
inline constexpr double kDefaultSlew = 523.6;

struct VelocitySegment {
  double start = 0.0;  // [s]
  double omega = 0.0;  // target velocity [rad/s]

  bool operator==(const VelocitySegment&) const = default;
};

// Velocity set-points joined by slew-limited ramps. The first segment must
// start at t = 0 and gives omega_d(0) directly.
struct ReferenceProfile {
  std::vector<VelocitySegment> segments;
  double slew = kDefaultSlew;  // [rad/s^2]

  bool operator==(const ReferenceProfile&) const = default;
};

struct ReferenceSample {
  double theta_d = 0.0;
  double omega_d = 0.0;
  double omega_dot_d = 0.0;
};

// Piecewise-polynomial evaluation of a ReferenceProfile. omega_d is piecewise
// linear, theta_d its exact integral; ramps that are still running when the
// next segment starts continue from the current value.
class ReferenceTrajectory {
 public:
  ReferenceTrajectory(const ReferenceProfile& profile, double theta0);

  ReferenceSample at(double t) const;

  // Times where omega_dot_d jumps (segment starts and ramp completions).
  std::vector<double> breakpoints() const;

  struct Interval {
    double start;
    double end;
  };
  // Intervals with nonzero omega_dot_d; the last may be open-ended (end = inf).
  std::vector<Interval> ramps() const;

 private:
  struct Piece {
    double t0;
    double theta0;
    double omega0;
    double accel;
  };
  void append(double t0, double omega0, double accel);

  std::vector<Piece> pieces_;
};

ReferenceSample reference(double t, const ReferenceProfile& profile, double theta0 = 0.0);

struct TorqueStep {
  double time = 0.0;   // [s]
  double value = 0.0;  // [N m]

  bool operator==(const TorqueStep&) const = default;
};

// Piecewise-constant load torque (0 before the first step), optionally passed
// through a first-order lag with time constant `smoothing`.
struct LoadProfile {
  std::vector<TorqueStep> steps;
  double smoothing = 0.0;  // [s]; 0 disables

  bool operator==(const LoadProfile&) const = default;
};

double load_torque(double t, const LoadProfile& profile);

enum class InverterErrorKind { None, Harmonic, DeadTimeSign };

struct InverterErrorModel {
  InverterErrorKind kind = InverterErrorKind::None;
  double amplitude_1 = 0.0;  // first electrical harmonic [V]
  double amplitude_2 = 0.0;  // second electrical harmonic [V]
  double phase_1 = 0.0;      // [rad]
  double phase_2 = 0.0;      // [rad]
  double v_dead = 0.0;       // [V]
  // Draw phase_1/phase_2 uniformly from the run seed instead of using the fields.
  bool random_phase = false;

  bool operator==(const InverterErrorModel&) const = default;
};

// Additive voltage error between commanded and applied voltage.
// DeadTimeSign uses the commanded currents' signs (sign(0) = 0).
AlphaBeta inverter_error(double theta, int pole_pairs, AlphaBeta cmd_currents,
                         const InverterErrorModel& model);

// Replaces phases with seeded draws when `random_phase` is set; identity otherwise.
InverterErrorModel resolve_phases(const InverterErrorModel& model, std::uint64_t seed);

}  // namespace npidob
