#include "npidob/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "npidob/errors.hpp"
#include "npidob/inner_loop.hpp"
#include "npidob/outer_loop.hpp"
#include "npidob/plant.hpp"
#include "npidob/signals.hpp"
#include "npidob/stability.hpp"

namespace npidob {

const std::array<LogColumn, 29> kLogColumns{{
    {"t", &LogRecord::t},
    {"theta", &LogRecord::theta},
    {"omega", &LogRecord::omega},
    {"i_alpha", &LogRecord::i_alpha},
    {"i_beta", &LogRecord::i_beta},
    {"theta_d", &LogRecord::theta_d},
    {"omega_d", &LogRecord::omega_d},
    {"tau_L", &LogRecord::tau_L},
    {"tau_m_d", &LogRecord::tau_m_d},
    {"i_alpha_d", &LogRecord::i_alpha_d},
    {"i_beta_d", &LogRecord::i_beta_d},
    {"v_alpha_d", &LogRecord::v_alpha_d},
    {"v_beta_d", &LogRecord::v_beta_d},
    {"u_alpha", &LogRecord::u_alpha},
    {"u_beta", &LogRecord::u_beta},
    {"tau_L_hat", &LogRecord::tau_L_hat},
    {"omega_hat", &LogRecord::omega_hat},
    {"e_hat_alpha", &LogRecord::e_hat_alpha},
    {"e_hat_beta", &LogRecord::e_hat_beta},
    {"d_hat_alpha", &LogRecord::d_hat_alpha},
    {"d_hat_beta", &LogRecord::d_hat_beta},
    {"e_theta", &LogRecord::e_theta},
    {"e_omega", &LogRecord::e_omega},
    {"e_alpha", &LogRecord::e_alpha},
    {"e_beta", &LogRecord::e_beta},
    {"e_v_alpha", &LogRecord::e_v_alpha},
    {"e_v_beta", &LogRecord::e_v_beta},
    {"d_true_alpha", &LogRecord::d_true_alpha},
    {"d_true_beta", &LogRecord::d_true_beta},
}};

namespace {

void fill_true_disturbance(std::vector<LogRecord>& log, double dt, double inductance) {
  const std::size_t n = log.size();
  if (n == 0) return;
  for (std::size_t k = 0; k < n; ++k) {
    double da = 0.0;
    double db = 0.0;
    if (n >= 2) {
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 == n ? k : k + 1;
      const double span = (hi - lo) * dt;
      da = (log[hi].i_alpha_d - log[lo].i_alpha_d) / span;
      db = (log[hi].i_beta_d - log[lo].i_beta_d) / span;
    }
    log[k].d_true_alpha = -inductance * da + log[k].e_v_alpha;
    log[k].d_true_beta = -inductance * db + log[k].e_v_beta;
  }
}

}  // namespace

std::vector<LogRecord> run_scenario(const MotorParams& p, const GainSet& g, const Scenario& s) {
  const std::size_t ticks = s.timing.ticks();
  std::vector<LogRecord> log;
  if (ticks == 0) return log;
  log.reserve(ticks);

  const double dt = s.timing.dt_ctrl;
  const int substeps = s.timing.substeps();
  const double h = dt / substeps;
  const bool use_outer = s.variant != ControllerVariant::NoDob;
  const bool use_inner = s.variant == ControllerVariant::Full;

  const ReferenceTrajectory ref(s.reference, s.initial_state.theta);
  const InverterErrorModel inverter = resolve_phases(s.inverter_error, s.seed);

  MotorState x = s.initial_state;
  OuterObserverState outer;
  InnerObserverState inner;

  for (std::size_t k = 0; k < ticks; ++k) {
    const double t = k * dt;
    const Measurement m = measure(x);
    const ReferenceSample r = ref.at(t);

    if (k == 0 && use_outer) outer = init_outer_observer(m.omega);
    const double tau_hat = use_outer ? outer_dob_output(outer, m.omega, g) : 0.0;

    const double e_theta = r.theta_d - m.theta;
    const double e_omega = r.omega_d - m.omega;
    const double tau_m_d = torque_modulation(e_theta, e_omega, r.omega_d, r.omega_dot_d, tau_hat, g, p);
    const AlphaBeta i_d = current_references(tau_m_d, m.theta, p);
    const AlphaBeta e = i_d - AlphaBeta{m.i_alpha, m.i_beta};

    if (k == 0 && use_inner) inner = {init_inner_axis(e.alpha), init_inner_axis(e.beta)};
    const AlphaBeta d_hat = use_inner ? AlphaBeta{inner_dob_output(inner.alpha, e.alpha, g),
                                                  inner_dob_output(inner.beta, e.beta, g)}
                                      : AlphaBeta{};
    const AlphaBeta u = current_control(e, d_hat, g);
    const AlphaBeta v_d = voltage_reference(i_d, m.omega, m.theta, u, p);
    const AlphaBeta e_v = inverter_error(m.theta, p.P, i_d, inverter);

    LogRecord rec;
    rec.t = t;
    rec.theta = m.theta;
    rec.omega = m.omega;
    rec.i_alpha = m.i_alpha;
    rec.i_beta = m.i_beta;
    rec.theta_d = r.theta_d;
    rec.omega_d = r.omega_d;
    rec.tau_L = load_torque(t, s.load);
    rec.tau_m_d = tau_m_d;
    rec.i_alpha_d = i_d.alpha;
    rec.i_beta_d = i_d.beta;
    rec.v_alpha_d = v_d.alpha;
    rec.v_beta_d = v_d.beta;
    rec.u_alpha = u.alpha;
    rec.u_beta = u.beta;
    rec.tau_L_hat = tau_hat;
    rec.omega_hat = use_outer ? outer.omega_hat : 0.0;
    rec.e_hat_alpha = use_inner ? inner.alpha.e_hat : 0.0;
    rec.e_hat_beta = use_inner ? inner.beta.e_hat : 0.0;
    rec.d_hat_alpha = d_hat.alpha;
    rec.d_hat_beta = d_hat.beta;
    rec.e_theta = e_theta;
    rec.e_omega = e_omega;
    rec.e_alpha = e.alpha;
    rec.e_beta = e.beta;
    rec.e_v_alpha = e_v.alpha;
    rec.e_v_beta = e_v.beta;
    log.push_back(rec);

    try {
      if (use_outer) outer = outer_dob_update(outer, m.omega, tau_m_d, dt, g, p).state;
      if (use_inner) {
        inner.alpha = inner_dob_update(inner.alpha, e.alpha, u.alpha, dt, g, p).state;
        inner.beta = inner_dob_update(inner.beta, e.beta, u.beta, dt, g, p).state;
      }
      const double v_alpha = v_d.alpha + e_v.alpha;
      const double v_beta = v_d.beta + e_v.beta;
      for (int j = 0; j < substeps; ++j) {
        x = rk4_step(x, {v_alpha, v_beta, load_torque(t + j * h, s.load)}, h, p);
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::NonFiniteState) throw Error::non_finite(err.subject(), k);
      throw;
    }
  }

  fill_true_disturbance(log, dt, p.L);
  return log;
}

void write_csv(std::ostream& out, std::span<const LogRecord> log) {
  for (std::size_t c = 0; c < kLogColumns.size(); ++c) {
    if (c) out << ',';
    out << kLogColumns[c].name;
  }
  out << '\n';
  char buf[32];
  for (const LogRecord& rec : log) {
    for (std::size_t c = 0; c < kLogColumns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.16e", rec.*(kLogColumns[c].member));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

std::vector<LogRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Precondition, "csv", "empty CSV input");
  std::string expected;
  for (std::size_t c = 0; c < kLogColumns.size(); ++c) {
    if (c) expected += ',';
    expected += kLogColumns[c].name;
  }
  if (line != expected) throw Error(ErrorCode::Precondition, "csv", "unexpected CSV header");

  std::vector<LogRecord> log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    LogRecord rec;
    const char* cursor = line.c_str();
    for (std::size_t c = 0; c < kLogColumns.size(); ++c) {
      char* end = nullptr;
      rec.*(kLogColumns[c].member) = std::strtod(cursor, &end);
      if (end == cursor) throw Error(ErrorCode::Precondition, "csv", "malformed CSV row");
      cursor = *end == ',' ? end + 1 : end;
    }
    log.push_back(rec);
  }
  return log;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / x.size());
}

double sup_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double occupancy(std::span<const double> magnitude, double radius) {
  if (magnitude.empty()) return 0.0;
  const auto inside = std::count_if(magnitude.begin(), magnitude.end(),
                                    [radius](double v) { return std::abs(v) < radius; });
  return static_cast<double>(inside) / magnitude.size();
}

namespace {

WindowMetrics window_metrics(std::span<const LogRecord> log, TimeWindow w, double radius) {
  std::vector<double> e_ab, e_omega, tau_tilde;
  for (const LogRecord& r : log) {
    if (r.t < w.start || r.t >= w.end) continue;
    e_ab.push_back(std::hypot(r.e_alpha, r.e_beta));
    e_omega.push_back(r.e_omega);
    tau_tilde.push_back(r.tau_L - r.tau_L_hat);
  }
  if (e_ab.empty()) {
    throw Error(ErrorCode::EmptyWindow, "window",
                "window [" + std::to_string(w.start) + ", " + std::to_string(w.end) + ") holds no ticks");
  }
  WindowMetrics m;
  m.window = w;
  m.samples = e_ab.size();
  m.rms_e_ab = rms(e_ab);
  m.rms_e_omega = rms(e_omega);
  m.rms_tau_tilde = rms(tau_tilde);
  m.sup_e_ab = sup_abs(e_ab);
  m.sup_e_omega = sup_abs(e_omega);
  m.sup_tau_tilde = sup_abs(tau_tilde);
  m.occupancy = occupancy(e_ab, radius);
  return m;
}

}  // namespace

RunMetrics compute_metrics(std::span<const LogRecord> log, std::span<const TimeWindow> windows,
                           double ball_radius) {
  RunMetrics out;
  out.ball_radius = ball_radius;
  for (const TimeWindow& w : windows) out.windows.push_back(window_metrics(log, w, ball_radius));
  return out;
}

namespace {

class ResidualAccumulator {
 public:
  void add(double r) {
    max_ = std::max(max_, std::abs(r));
    sq_ += r * r;
    ++n_;
  }
  ResidualStats finish(double scale, double dt) const {
    ResidualStats s;
    s.max = max_;
    s.rms = n_ ? std::sqrt(sq_ / n_) : 0.0;
    s.samples = n_;
    s.scale = scale;
    s.bound = 10.0 * dt * scale;
    return s;
  }

 private:
  double max_ = 0.0;
  double sq_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace

ConsistencyReport consistency_check(std::span<const LogRecord> log, const MotorParams& p,
                                    const GainSet& g, const ConsistencyOptions& opts) {
  const std::size_t n = log.size();
  if (n < 3) throw Error(ErrorCode::Precondition, "log", "consistency check needs at least 3 records");
  const double dt = log[1].t - log[0].t;
  const double guard = (opts.guard_ticks + 0.5) * dt;

  const auto excluded = [&](std::size_t k) {
    if (log[k].t < opts.skip_before) return true;
    for (double ev : opts.event_times)
      if (std::abs(log[k].t - ev) <= guard) return true;
    return false;
  };
  const auto central = [&](std::size_t k, auto&& f) {
    return (f(log[k + 1]) - f(log[k - 1])) / (2.0 * dt);
  };
  const auto curvature = [&](std::size_t k, auto&& f) {
    return std::abs(f(log[k + 1]) - 2.0 * f(log[k]) + f(log[k - 1])) / (dt * dt);
  };

  const auto omega_tilde = [](const LogRecord& r) { return r.omega - r.omega_hat; };
  const auto tau_tilde = [](const LogRecord& r) { return r.tau_L - r.tau_L_hat; };
  const auto e_tilde_a = [](const LogRecord& r) { return r.e_alpha - r.e_hat_alpha; };
  const auto e_tilde_b = [](const LogRecord& r) { return r.e_beta - r.e_hat_beta; };
  const auto d_tilde_a = [](const LogRecord& r) { return r.d_true_alpha - r.d_hat_alpha; };
  const auto d_tilde_b = [](const LogRecord& r) { return r.d_true_beta - r.d_hat_beta; };

  ResidualAccumulator acc_w, acc_t, acc_e, acc_d;
  double scale_w = 0.0, scale_t = 0.0, scale_e = 0.0, scale_d = 0.0;

  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (excluded(k)) continue;
    const LogRecord& r = log[k];

    const double el = p.P * r.theta;
    const double coupling =
        opts.include_current_coupling ? std::sin(el) * r.e_alpha - std::cos(el) * r.e_beta : 0.0;
    const double tau_L_dot = central(k, [](const LogRecord& x) { return x.tau_L; });
    const Vector2 rhs_outer = outer_error_rhs(omega_tilde(r), tau_tilde(r), coupling, tau_L_dot, p, g);
    acc_w.add(central(k, omega_tilde) - rhs_outer.x);
    acc_t.add(central(k, tau_tilde) - rhs_outer.y);

    const double d_dot_a = central(k, [](const LogRecord& x) { return x.d_true_alpha; });
    const double d_dot_b = central(k, [](const LogRecord& x) { return x.d_true_beta; });
    const Vector2 rhs_a = inner_error_rhs(e_tilde_a(r), d_tilde_a(r), d_dot_a, p, g);
    const Vector2 rhs_b = inner_error_rhs(e_tilde_b(r), d_tilde_b(r), d_dot_b, p, g);
    acc_e.add(central(k, e_tilde_a) - rhs_a.x);
    acc_e.add(central(k, e_tilde_b) - rhs_b.x);
    acc_d.add(central(k, d_tilde_a) - rhs_a.y);
    acc_d.add(central(k, d_tilde_b) - rhs_b.y);

    scale_w = std::max({scale_w, curvature(k, [](const LogRecord& x) { return x.omega; }),
                        curvature(k, [](const LogRecord& x) { return x.omega_hat; })});
    scale_t = std::max({scale_t, curvature(k, [](const LogRecord& x) { return x.tau_L; }),
                        curvature(k, [](const LogRecord& x) { return x.tau_L_hat; })});
    scale_e = std::max({scale_e, curvature(k, [](const LogRecord& x) { return x.e_alpha; }),
                        curvature(k, [](const LogRecord& x) { return x.e_hat_alpha; }),
                        curvature(k, [](const LogRecord& x) { return x.e_beta; }),
                        curvature(k, [](const LogRecord& x) { return x.e_hat_beta; })});
    scale_d = std::max({scale_d, curvature(k, [](const LogRecord& x) { return x.d_true_alpha; }),
                        curvature(k, [](const LogRecord& x) { return x.d_hat_alpha; }),
                        curvature(k, [](const LogRecord& x) { return x.d_true_beta; }),
                        curvature(k, [](const LogRecord& x) { return x.d_hat_beta; })});
  }

  return {acc_w.finish(scale_w, dt), acc_t.finish(scale_t, dt), acc_e.finish(scale_e, dt),
          acc_d.finish(scale_d, dt)};
}

namespace {

double ratio(double a, double b) {
  if (a == b) return 1.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a / b;
}

}  // namespace

ComparisonReport compare_runs(std::span<const LogRecord> a, std::span<const LogRecord> b,
                              std::span<const TimeWindow> windows, double ball_radius) {
  if (a.size() != b.size())
    throw Error(ErrorCode::ScenarioMismatch, "log", "logs have different lengths");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].t != b[k].t || a[k].theta_d != b[k].theta_d || a[k].omega_d != b[k].omega_d ||
        a[k].tau_L != b[k].tau_L) {
      throw Error(ErrorCode::ScenarioMismatch, "log",
                  "logs differ in time grid, reference or load at tick " + std::to_string(k));
    }
  }
  ComparisonReport rep;
  rep.a = compute_metrics(a, windows, ball_radius);
  rep.b = compute_metrics(b, windows, ball_radius);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const WindowMetrics& ma = rep.a.windows[i];
    const WindowMetrics& mb = rep.b.windows[i];
    rep.windows.push_back({windows[i], ratio(ma.rms_e_ab, mb.rms_e_ab),
                           ratio(ma.sup_e_omega, mb.sup_e_omega),
                           ratio(ma.rms_tau_tilde, mb.rms_tau_tilde)});
  }
  return rep;
}

std::vector<double> event_times(const Scenario& s) {
  std::set<double> ev;
  const double end = s.timing.duration;
  const ReferenceTrajectory ref(s.reference, s.initial_state.theta);
  for (double t : ref.breakpoints())
    if (t > 0.0 && t < end) ev.insert(t);
  for (const TorqueStep& st : s.load.steps)
    if (st.time > 0.0 && st.time < end) ev.insert(st.time);
  return {ev.begin(), ev.end()};
}

WindowPlan default_windows(const Scenario& s, double settle) {
  WindowPlan plan;
  std::vector<double> bounds{0.0};
  const std::vector<double> ev = event_times(s);
  bounds.insert(bounds.end(), ev.begin(), ev.end());
  bounds.push_back(s.timing.duration);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double start = bounds[i] + settle;
    if (start < bounds[i + 1]) plan.steady.push_back({start, bounds[i + 1]});
  }
  const ReferenceTrajectory ref(s.reference, s.initial_state.theta);
  for (const auto& r : ref.ramps()) {
    if (r.start >= s.timing.duration) continue;
    plan.transient.push_back({r.start, std::min(r.end, s.timing.duration)});
  }
  return plan;
}

}  // namespace npidob
