#include "npidob/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "npidob/errors.hpp"

namespace npidob {

using nlohmann::json;

MotorParams reference_motor() {
  MotorParams p;
  p.R = 0.875;
  p.L = 2.75e-4;  // 0.275 mH
  p.Phi = 1.58e-2;
  p.P = 4;
  p.J = 4.46e-4;
  p.B = 7e-4;
  return p;
}

GainSet reference_gains() {
  GainSet g;
  g.k_theta = 0.4;
  g.k_omega = 0.0214;
  g.l_p_tau = 0.001;
  g.l_i_tau = 10e4;
  g.omega_tilde_max = 52.36;  // rad/s (500 rpm)
  g.l_p_e = 0.0025;
  g.l_i_e = 6e4;
  g.e_tilde_max = 15.6;  // A
  g.eta1 = 2000.0;
  g.eta2 = 1300.0;
  return g;
}

SimConfig default_config() {
  SimConfig c;
  c.motor = reference_motor();
  c.gains = reference_gains();
  // Critically damped load observer at 100 rad/s:
  //   l_i_tau = J w^2, l_p_tau = 2 J w - B.
  c.gains.l_p_tau = 0.0885;
  c.gains.l_i_tau = 4.46;

  Scenario& s = c.scenario;
  s.reference.segments = {{0.0, 52.36}, {13.5, 104.72}};
  s.reference.slew = kDefaultSlew;
  s.load.steps = {{8.5, -0.3}, {10.9, 0.0}, {16.2, 0.3}};
  s.inverter_error.kind = InverterErrorKind::Harmonic;
  s.inverter_error.amplitude_1 = 0.5;
  s.inverter_error.amplitude_2 = 0.2;
  s.variant = ControllerVariant::Full;
  s.timing = {1e-4, 1e-5, 20.0};
  s.initial_state = {0.0, 52.36, 0.0, 0.0};
  return c;
}

const char* to_string(ControllerVariant v) {
  switch (v) {
    case ControllerVariant::Full: return "full";
    case ControllerVariant::OuterOnly: return "outer-only";
    case ControllerVariant::NoDob: return "no-dob";
  }
  return "full";
}

ControllerVariant parse_variant(std::string_view text) {
  if (text == "full") return ControllerVariant::Full;
  if (text == "outer-only") return ControllerVariant::OuterOnly;
  if (text == "no-dob") return ControllerVariant::NoDob;
  throw Error::invalid_value("variant", "must be one of full, outer-only, no-dob");
}

int TimingConfig::substeps() const { return static_cast<int>(std::llround(dt_ctrl / dt_plant)); }

std::size_t TimingConfig::ticks() const {
  if (!(duration > 0.0)) return 0;
  return static_cast<std::size_t>(std::llround(duration / dt_ctrl));
}

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) throw Error::invalid_value(name, "must be positive");
}

void require_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) throw Error::invalid_value(name, "must be nonnegative");
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw Error::invalid_value(name, "must be finite");
}

}  // namespace

void validate(const MotorParams& p) {
  require_positive(p.R, "R");
  require_positive(p.L, "L");
  require_positive(p.Phi, "Phi");
  if (p.P <= 0) throw Error::invalid_value("P", "must be a positive integer");
  require_positive(p.J, "J");
  require_positive(p.B, "B");
}

void validate(const GainSet& g) {
  require_positive(g.k_theta, "k_theta");
  require_positive(g.k_omega, "k_omega");
  require_nonnegative(g.l_p_tau, "l_p_tau");
  require_positive(g.l_i_tau, "l_i_tau");
  require_positive(g.omega_tilde_max, "omega_tilde_max");
  require_nonnegative(g.l_p_e, "l_p_e");
  require_positive(g.l_i_e, "l_i_e");
  require_positive(g.e_tilde_max, "e_tilde_max");
  require_positive(g.eta1, "eta1");
  require_positive(g.eta2, "eta2");
}

void validate(const TimingConfig& t) {
  require_positive(t.dt_ctrl, "dt_ctrl");
  require_positive(t.dt_plant, "dt_plant");
  require_positive(t.duration, "duration");
  const double ratio = t.dt_ctrl / t.dt_plant;
  if (ratio < 0.5 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw Error::invalid_value("dt_plant", "must divide dt_ctrl exactly");
}

void validate(const Scenario& s) {
  validate(s.timing);
  const auto& segs = s.reference.segments;
  if (segs.empty()) throw Error::invalid_value("reference.segments", "must not be empty");
  if (segs.front().start != 0.0)
    throw Error::invalid_value("reference.segments", "first segment must start at t = 0");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    require_finite(segs[i].omega, "reference.segments.omega");
    if (i > 0 && !(segs[i].start > segs[i - 1].start))
      throw Error::invalid_value("reference.segments", "start times must be strictly increasing");
  }
  require_positive(s.reference.slew, "reference.slew");

  const auto& steps = s.load.steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    require_finite(steps[i].time, "load.steps.t");
    require_finite(steps[i].value, "load.steps.tau");
    if (i > 0 && !(steps[i].time > steps[i - 1].time))
      throw Error::invalid_value("load.steps", "times must be strictly increasing");
  }
  require_nonnegative(s.load.smoothing, "load.smoothing");

  const auto& ie = s.inverter_error;
  require_nonnegative(ie.amplitude_1, "inverter_error.amplitude_1");
  require_nonnegative(ie.amplitude_2, "inverter_error.amplitude_2");
  require_finite(ie.phase_1, "inverter_error.phase_1");
  require_finite(ie.phase_2, "inverter_error.phase_2");
  require_nonnegative(ie.v_dead, "inverter_error.v_dead");

  if (!is_finite(s.initial_state)) throw Error::invalid_value("initial_state", "must be finite");
}

namespace {

// Thin accessor that turns JSON shape problems into typed errors with a dotted path.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const char* key) const { return j_.contains(key); }

  Node child(const char* key) const {
    if (!j_.contains(key)) throw Error::missing_field(key);
    const json& c = j_.at(key);
    if (!c.is_object()) throw Error::invalid_value(join(key), "must be an object");
    return {c, join(key)};
  }

  double number(const char* key) const {
    if (!j_.contains(key)) throw Error::missing_field(key);
    const json& v = j_.at(key);
    if (!v.is_number()) throw Error::invalid_value(join(key), "must be a number");
    return v.get<double>();
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const char* key) const {
    if (!j_.contains(key)) throw Error::missing_field(key);
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw Error::invalid_value(key, "must be a positive integer");
    return v.get<int>();
  }

  std::string text_or(const char* key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw Error::invalid_value(join(key), "must be a string");
    return v.get<std::string>();
  }

  bool boolean_or(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw Error::invalid_value(join(key), "must be true or false");
    return v.get<bool>();
  }

  std::uint64_t unsigned_or(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) throw Error::invalid_value(join(key), "must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  const json& array(const char* key) const {
    if (!j_.contains(key)) throw Error::missing_field(key);
    const json& v = j_.at(key);
    if (!v.is_array()) throw Error::invalid_value(join(key), "must be an array");
    return v;
  }

  const std::string& path() const { return path_; }

 private:
  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

MotorParams parse_motor(const Node& n) {
  MotorParams p;
  p.R = n.number("R");
  p.L = n.number("L");
  p.Phi = n.number("Phi");
  p.P = n.integer("P");
  p.J = n.number("J");
  p.B = n.number("B");
  return p;
}

GainSet parse_gains(const Node& n) {
  GainSet g;
  g.k_theta = n.number("k_theta");
  g.k_omega = n.number("k_omega");
  g.l_p_tau = n.number("l_p_tau");
  g.l_i_tau = n.number("l_i_tau");
  g.omega_tilde_max = n.number("omega_tilde_max");
  g.l_p_e = n.number("l_p_e");
  g.l_i_e = n.number("l_i_e");
  g.e_tilde_max = n.number("e_tilde_max");
  g.eta1 = n.number("eta1");
  g.eta2 = n.number("eta2");
  return g;
}

TimingConfig parse_timing(const Node& n) {
  TimingConfig t;
  t.dt_ctrl = n.number_or("dt_ctrl", t.dt_ctrl);
  t.dt_plant = n.number_or("dt_plant", t.dt_plant);
  t.duration = n.number("duration");
  return t;
}

InverterErrorKind parse_kind(const std::string& s) {
  if (s == "none") return InverterErrorKind::None;
  if (s == "harmonic") return InverterErrorKind::Harmonic;
  if (s == "dead-time") return InverterErrorKind::DeadTimeSign;
  throw Error::invalid_value("inverter_error.kind", "must be one of none, harmonic, dead-time");
}

const char* kind_name(InverterErrorKind k) {
  switch (k) {
    case InverterErrorKind::None: return "none";
    case InverterErrorKind::Harmonic: return "harmonic";
    case InverterErrorKind::DeadTimeSign: return "dead-time";
  }
  return "none";
}

Scenario parse_scenario(const Node& n) {
  Scenario s;
  s.variant = parse_variant(n.text_or("variant", "full"));

  const Node ref = n.child("reference");
  for (const json& item : ref.array("segments")) {
    if (!item.is_object()) throw Error::invalid_value("reference.segments", "entries must be objects");
    const Node seg(item, "reference.segments");
    s.reference.segments.push_back({seg.number("t"), seg.number("omega")});
  }
  s.reference.slew = ref.number_or("slew", kDefaultSlew);

  if (n.has("load")) {
    const Node load = n.child("load");
    if (load.has("steps")) {
      for (const json& item : load.array("steps")) {
        if (!item.is_object()) throw Error::invalid_value("load.steps", "entries must be objects");
        const Node st(item, "load.steps");
        s.load.steps.push_back({st.number("t"), st.number("tau")});
      }
    }
    s.load.smoothing = load.number_or("smoothing", 0.0);
  }

  if (n.has("inverter_error")) {
    const Node ie = n.child("inverter_error");
    auto& m = s.inverter_error;
    m.kind = parse_kind(ie.text_or("kind", "none"));
    if (m.kind == InverterErrorKind::Harmonic) {
      m.amplitude_1 = ie.number("amplitude_1");
      m.amplitude_2 = ie.number_or("amplitude_2", 0.0);
      m.phase_1 = ie.number_or("phase_1", 0.0);
      m.phase_2 = ie.number_or("phase_2", 0.0);
      m.random_phase = ie.boolean_or("random_phase", false);
    } else if (m.kind == InverterErrorKind::DeadTimeSign) {
      m.v_dead = ie.number("v_dead");
    }
  }

  if (n.has("initial_state")) {
    const Node x = n.child("initial_state");
    s.initial_state = {x.number_or("theta", 0.0), x.number_or("omega", 0.0),
                       x.number_or("i_alpha", 0.0), x.number_or("i_beta", 0.0)};
  }
  s.seed = n.unsigned_or("seed", 0);
  return s;
}

}  // namespace

SimConfig load_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidValue, "document", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidValue, "document", "top level must be an object");

  if (doc.contains("units")) {
    const json& u = doc.at("units");
    if (!u.is_string() || u.get<std::string>() != "SI")
      throw Error(ErrorCode::UnitError, "units", "config values must be SI (\"units\": \"SI\")");
  }

  const Node root(doc, "");
  SimConfig c;
  c.motor = parse_motor(root.child("motor"));
  c.gains = parse_gains(root.child("gains"));
  const Node scen = root.child("scenario");
  c.scenario = parse_scenario(scen);
  c.scenario.timing = parse_timing(root.child("timing"));

  validate(c.motor);
  validate(c.gains);
  validate(c.scenario);
  return c;
}

SimConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidValue, path.string(), "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string serialize(const SimConfig& c) {
  json doc;
  doc["units"] = "SI";
  const MotorParams& p = c.motor;
  doc["motor"] = {{"R", p.R}, {"L", p.L}, {"Phi", p.Phi}, {"P", p.P}, {"J", p.J}, {"B", p.B}};
  const GainSet& g = c.gains;
  doc["gains"] = {{"k_theta", g.k_theta}, {"k_omega", g.k_omega},
                  {"l_p_tau", g.l_p_tau}, {"l_i_tau", g.l_i_tau},
                  {"omega_tilde_max", g.omega_tilde_max}, {"l_p_e", g.l_p_e},
                  {"l_i_e", g.l_i_e}, {"e_tilde_max", g.e_tilde_max},
                  {"eta1", g.eta1}, {"eta2", g.eta2}};
  const Scenario& s = c.scenario;
  doc["timing"] = {{"dt_ctrl", s.timing.dt_ctrl}, {"dt_plant", s.timing.dt_plant},
                   {"duration", s.timing.duration}};

  json segs = json::array();
  for (const auto& seg : s.reference.segments) segs.push_back({{"t", seg.start}, {"omega", seg.omega}});
  json steps = json::array();
  for (const auto& st : s.load.steps) steps.push_back({{"t", st.time}, {"tau", st.value}});
  const auto& ie = s.inverter_error;
  json inv = {{"kind", kind_name(ie.kind)}};
  if (ie.kind == InverterErrorKind::Harmonic) {
    inv["amplitude_1"] = ie.amplitude_1;
    inv["amplitude_2"] = ie.amplitude_2;
    inv["phase_1"] = ie.phase_1;
    inv["phase_2"] = ie.phase_2;
    inv["random_phase"] = ie.random_phase;
  } else if (ie.kind == InverterErrorKind::DeadTimeSign) {
    inv["v_dead"] = ie.v_dead;
  }
  const MotorState& x0 = s.initial_state;
  doc["scenario"] = {
      {"variant", to_string(s.variant)},
      {"reference", {{"segments", segs}, {"slew", s.reference.slew}}},
      {"load", {{"steps", steps}, {"smoothing", s.load.smoothing}}},
      {"inverter_error", inv},
      {"initial_state",
       {{"theta", x0.theta}, {"omega", x0.omega}, {"i_alpha", x0.i_alpha}, {"i_beta", x0.i_beta}}},
      {"seed", s.seed}};
  return doc.dump(2);
}

}  // namespace npidob
