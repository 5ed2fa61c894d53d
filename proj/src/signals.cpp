#include "npidob/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "npidob/errors.hpp"

namespace npidob {

ReferenceTrajectory::ReferenceTrajectory(const ReferenceProfile& profile, double theta0) {
  const auto& segs = profile.segments;
  if (segs.empty()) throw Error::invalid_value("reference.segments", "must not be empty");
  if (!(profile.slew > 0.0)) throw Error::invalid_value("reference.slew", "must be positive");
  if (segs.front().start != 0.0)
    throw Error::invalid_value("reference.segments", "first segment must start at t = 0");
  for (std::size_t i = 1; i < segs.size(); ++i)
    if (!(segs[i].start > segs[i - 1].start))
      throw Error::invalid_value("reference.segments", "start times must be strictly increasing");

  pieces_.push_back({0.0, theta0, segs.front().omega, 0.0});
  double omega = segs.front().omega;
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const double t_start = segs[i].start;
    const double target = segs[i].omega;
    // Close out whatever was running up to t_start.
    const Piece& last = pieces_.back();
    omega = last.omega0 + last.accel * (t_start - last.t0);
    if (target == omega) {
      append(t_start, omega, 0.0);
      continue;
    }
    const double accel = target > omega ? profile.slew : -profile.slew;
    append(t_start, omega, accel);
    const double t_reach = t_start + std::abs(target - omega) / profile.slew;
    const double t_next = i + 1 < segs.size() ? segs[i + 1].start : INFINITY;
    if (t_reach < t_next) append(t_reach, target, 0.0);
  }
}

void ReferenceTrajectory::append(double t0, double omega0, double accel) {
  const Piece& last = pieces_.back();
  const double tau = t0 - last.t0;
  const double theta = last.theta0 + last.omega0 * tau + 0.5 * last.accel * tau * tau;
  pieces_.push_back({t0, theta, omega0, accel});
}

ReferenceSample ReferenceTrajectory::at(double t) const {
  // Last piece whose start is <= t (pieces are right-continuous).
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const Piece& pc) { return v < pc.t0; });
  const Piece& pc = it == pieces_.begin() ? pieces_.front() : *std::prev(it);
  const double tau = t - pc.t0;
  return {pc.theta0 + pc.omega0 * tau + 0.5 * pc.accel * tau * tau, pc.omega0 + pc.accel * tau,
          pc.accel};
}

std::vector<double> ReferenceTrajectory::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].t0);
  return out;
}

std::vector<ReferenceTrajectory::Interval> ReferenceTrajectory::ramps() const {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].accel == 0.0) continue;
    const double end = i + 1 < pieces_.size() ? pieces_[i + 1].t0 : INFINITY;
    out.push_back({pieces_[i].t0, end});
  }
  return out;
}

ReferenceSample reference(double t, const ReferenceProfile& profile, double theta0) {
  return ReferenceTrajectory(profile, theta0).at(t);
}

double load_torque(double t, const LoadProfile& profile) {
  double value = 0.0;
  if (profile.smoothing <= 0.0) {
    for (const auto& s : profile.steps) {
      if (s.time > t) break;
      value = s.value;
    }
    return value;
  }
  // First-order lag evaluated in closed form across each constant stretch.
  double y = 0.0;
  double target = 0.0;
  double t_prev = -INFINITY;
  for (const auto& s : profile.steps) {
    if (s.time > t) break;
    if (std::isfinite(t_prev)) y = target + (y - target) * std::exp(-(s.time - t_prev) / profile.smoothing);
    target = s.value;
    t_prev = s.time;
  }
  if (!std::isfinite(t_prev)) return 0.0;
  return target + (y - target) * std::exp(-(t - t_prev) / profile.smoothing);
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

AlphaBeta inverter_error(double theta, int pole_pairs, AlphaBeta cmd_currents,
                         const InverterErrorModel& model) {
  switch (model.kind) {
    case InverterErrorKind::None:
      return {};
    case InverterErrorKind::Harmonic: {
      const double el = pole_pairs * theta;
      const double a1 = el + model.phase_1;
      const double a2 = 2.0 * el + model.phase_2;
      return {model.amplitude_1 * std::sin(a1) + model.amplitude_2 * std::sin(a2),
              model.amplitude_1 * std::cos(a1) + model.amplitude_2 * std::cos(a2)};
    }
    case InverterErrorKind::DeadTimeSign:
      return {-model.v_dead * sign(cmd_currents.alpha), -model.v_dead * sign(cmd_currents.beta)};
  }
  return {};
}

InverterErrorModel resolve_phases(const InverterErrorModel& model, std::uint64_t seed) {
  if (!model.random_phase) return model;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  InverterErrorModel out = model;
  out.phase_1 = dist(rng);
  out.phase_2 = dist(rng);
  out.random_phase = false;
  return out;
}

}  // namespace npidob
