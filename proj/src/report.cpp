#include "npidob/report.hpp"

#include <cmath>

namespace npidob {

using nlohmann::json;

namespace {

// JSON has no infinity; ratios against an all-zero baseline are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json window_json(const TimeWindow& w) { return json::array({w.start, w.end}); }

json residual_json(const ResidualStats& s) {
  return {{"max", s.max}, {"rms", s.rms}, {"samples", s.samples},
          {"scale", s.scale}, {"bound", s.bound}, {"within_bound", s.within_bound()}};
}

}  // namespace

json to_json(const Matrix2& m) { return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})}); }

json to_json(const StabilityReport& r) {
  json j = {
      {"loop", to_string(r.loop)},
      {"P", to_json(r.P)},
      {"Q1", to_json(r.Q1)},
      {"hurwitz", r.hurwitz},
      {"lambda_min_P", r.lambda_min_P},
      {"lambda_max_P", r.lambda_max_P},
      {"epsilon", r.epsilon},
      {"delta", r.delta},
      {"l_p", r.l_p},
      {"norm", "spectral"},
      {"terms", {{"decay", r.decay_term}, {"mu", r.mu_term}, {"disturbance", r.disturbance_term}}},
      {"gamma_star", r.gamma_star},
      {"gamma_star_frobenius", r.gamma_star_frobenius},
      {"certified", r.certified()},
  };
  j["rho"] = r.rho ? json(*r.rho) : json(nullptr);
  return j;
}

json to_json(const RunMetrics& m) {
  json windows = json::array();
  for (const WindowMetrics& w : m.windows) {
    windows.push_back({{"window", window_json(w.window)},
                       {"samples", w.samples},
                       {"rms_e_ab", w.rms_e_ab},
                       {"rms_e_omega", w.rms_e_omega},
                       {"rms_tau_tilde", w.rms_tau_tilde},
                       {"sup_e_ab", w.sup_e_ab},
                       {"sup_e_omega", w.sup_e_omega},
                       {"sup_tau_tilde", w.sup_tau_tilde},
                       {"occupancy", w.occupancy}});
  }
  return {{"ball_radius", m.ball_radius}, {"windows", windows}};
}

json to_json(const ComparisonReport& r) {
  json ratios = json::array();
  for (const WindowComparison& w : r.windows) {
    ratios.push_back({{"window", window_json(w.window)},
                      {"rms_e_ab_ratio", number(w.rms_e_ab_ratio)},
                      {"peak_e_omega_ratio", number(w.peak_e_omega_ratio)},
                      {"rms_tau_tilde_ratio", number(w.rms_tau_tilde_ratio)}});
  }
  return {{"a", to_json(r.a)}, {"b", to_json(r.b)}, {"ratios", ratios}};
}

json to_json(const ConsistencyReport& r) {
  return {{"omega_tilde", residual_json(r.omega_tilde)},
          {"tau_tilde", residual_json(r.tau_tilde)},
          {"e_tilde", residual_json(r.e_tilde)},
          {"d_tilde", residual_json(r.d_tilde)}};
}

}  // namespace npidob
