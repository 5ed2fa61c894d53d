#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "npidob/params.hpp"
#include "npidob/plant.hpp"
#include "npidob/signals.hpp"

namespace npidob {

enum class ControllerVariant {
  Full,       // both observers active
  OuterOnly,  // inner observer output forced to zero
  NoDob,      // both observer outputs forced to zero
};

const char* to_string(ControllerVariant v);
// Accepts "full", "outer-only", "no-dob".
ControllerVariant parse_variant(std::string_view text);

struct TimingConfig {
  double dt_ctrl = 1e-4;   // controller period [s]
  double dt_plant = 1e-5;  // RK4 sub-step [s]; must divide dt_ctrl
  double duration = 0.0;   // [s]

  // Plant sub-steps per control tick.
  int substeps() const;
  // Control ticks in [0, duration).
  std::size_t ticks() const;

  bool operator==(const TimingConfig&) const = default;
};

struct Scenario {
  ReferenceProfile reference;
  LoadProfile load;
  InverterErrorModel inverter_error;
  ControllerVariant variant = ControllerVariant::Full;
  TimingConfig timing;
  MotorState initial_state;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

struct SimConfig {
  MotorParams motor;
  GainSet gains;
  Scenario scenario;

  bool operator==(const SimConfig&) const = default;
};

// Throw Error(InvalidValue) naming the first violated invariant.
void validate(const MotorParams& p);
void validate(const GainSet& g);
void validate(const TimingConfig& t);
void validate(const Scenario& s);

// Parses and validates a config document. Throws Error with code
// MissingField, InvalidValue or UnitError.
SimConfig load_config(std::string_view json_text);
SimConfig load_config_file(const std::filesystem::path& path);

// Writes every field explicitly; load_config(serialize(c)) == c.
std::string serialize(const SimConfig& config);

// 20 s comparative run: 52.36 -> 104.72 rad/s at 13.5 s, load steps at
// 8.5/10.9/16.2 s, harmonic inverter error on. Load-observer gains retuned
// (see README); everything else from reference_motor()/reference_gains().
SimConfig default_config();

}  // namespace npidob
