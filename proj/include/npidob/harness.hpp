#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "npidob/config.hpp"

namespace npidob {

// One row per control tick, sampled before the tick's plant integration.
struct LogRecord {
  double t = 0.0;
  double theta = 0.0;
  double omega = 0.0;
  double i_alpha = 0.0;
  double i_beta = 0.0;
  double theta_d = 0.0;
  double omega_d = 0.0;
  double tau_L = 0.0;
  double tau_m_d = 0.0;
  double i_alpha_d = 0.0;
  double i_beta_d = 0.0;
  double v_alpha_d = 0.0;
  double v_beta_d = 0.0;
  double u_alpha = 0.0;
  double u_beta = 0.0;
  double tau_L_hat = 0.0;
  double omega_hat = 0.0;
  double e_hat_alpha = 0.0;
  double e_hat_beta = 0.0;
  double d_hat_alpha = 0.0;
  double d_hat_beta = 0.0;
  double e_theta = 0.0;
  double e_omega = 0.0;
  double e_alpha = 0.0;
  double e_beta = 0.0;
  double e_v_alpha = 0.0;
  double e_v_beta = 0.0;
  // -L d(i_j^d)/dt + e_vj, with the derivative taken by symmetric differences
  // across ticks (one-sided at the ends).
  double d_true_alpha = 0.0;
  double d_true_beta = 0.0;

  bool operator==(const LogRecord&) const = default;
};

struct LogColumn {
  std::string_view name;
  double LogRecord::*member;
};

// CSV column order; matches the field order above.
extern const std::array<LogColumn, 29> kLogColumns;

// Closed-loop simulation of plant, controllers and observers. Throws
// Error(NonFiniteState) carrying the control tick on divergence.
std::vector<LogRecord> run_scenario(const MotorParams& p, const GainSet& g, const Scenario& s);

// Header plus one row per record, 17 significant digits in scientific notation.
void write_csv(std::ostream& out, std::span<const LogRecord> log);
std::vector<LogRecord> read_csv(std::istream& in);

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;  // exclusive
};

struct WindowMetrics {
  TimeWindow window;
  std::size_t samples = 0;
  double rms_e_ab = 0.0;  // RMS of ||(e_alpha, e_beta)||
  double rms_e_omega = 0.0;
  double rms_tau_tilde = 0.0;  // tau_L - tau_L_hat
  double sup_e_ab = 0.0;
  double sup_e_omega = 0.0;  // also the transient peak when the window is a transient
  double sup_tau_tilde = 0.0;
  double occupancy = 0.0;  // fraction of ticks with ||e_ab|| < ball radius
};

struct RunMetrics {
  double ball_radius = 0.0;
  std::vector<WindowMetrics> windows;
};

double rms(std::span<const double> x);
double sup_abs(std::span<const double> x);
double occupancy(std::span<const double> magnitude, double radius);

// Throws Error(EmptyWindow) for a window that holds no ticks.
RunMetrics compute_metrics(std::span<const LogRecord> log, std::span<const TimeWindow> windows,
                           double ball_radius = 0.05);

struct ResidualStats {
  double max = 0.0;
  double rms = 0.0;
  std::size_t samples = 0;
  // sup |x''| over the signals that make up the error (true and estimate).
  double scale = 0.0;
  double bound = 0.0;  // 10 dt scale
  bool within_bound() const { return max <= bound; }
};

struct ConsistencyOptions {
  bool include_current_coupling = true;
  // Ticks within `guard_ticks` of any of these times are excluded.
  std::vector<double> event_times;
  std::size_t guard_ticks = 2;
  // Ticks before this time are excluded (observer start-up).
  double skip_before = 0.0;
};

struct ConsistencyReport {
  ResidualStats omega_tilde;
  ResidualStats tau_tilde;
  ResidualStats e_tilde;  // both axes pooled
  ResidualStats d_tilde;  // both axes pooled
};

// Central differences of the logged estimation errors against the continuous
// error-dynamics right-hand sides. Intended for logs of the Full variant.
// Throws Error(Precondition) for fewer than 3 records.
ConsistencyReport consistency_check(std::span<const LogRecord> log, const MotorParams& p,
                                    const GainSet& g, const ConsistencyOptions& opts = {});

struct WindowComparison {
  TimeWindow window;
  double rms_e_ab_ratio = 1.0;
  double peak_e_omega_ratio = 1.0;
  double rms_tau_tilde_ratio = 1.0;
};

struct ComparisonReport {
  RunMetrics a;
  RunMetrics b;
  std::vector<WindowComparison> windows;
};

// Per-window ratios a/b. Throws Error(ScenarioMismatch) unless both logs share
// the time grid, reference and load signals.
ComparisonReport compare_runs(std::span<const LogRecord> a, std::span<const LogRecord> b,
                              std::span<const TimeWindow> windows, double ball_radius = 0.05);

// Reference breakpoints and load-step times inside (0, duration).
std::vector<double> event_times(const Scenario& s);

struct WindowPlan {
  std::vector<TimeWindow> steady;     // between events, after `settle` seconds
  std::vector<TimeWindow> transient;  // reference ramps
};

WindowPlan default_windows(const Scenario& s, double settle = 0.5);

}  // namespace npidob
