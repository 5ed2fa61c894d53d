#include "npidob/errors.hpp"

namespace npidob {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::UnitError: return "UnitError";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::Precondition: return "Precondition";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string subject, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      subject_(std::move(subject)) {}

Error Error::missing_field(const std::string& name) {
  return Error(ErrorCode::MissingField, name, "missing required field '" + name + "'");
}

Error Error::invalid_value(const std::string& name, const std::string& reason) {
  return Error(ErrorCode::InvalidValue, name, "'" + name + "' " + reason);
}

Error Error::non_finite(const std::string& what, std::optional<std::size_t> tick) {
  std::string msg = what + " became non-finite";
  if (tick) msg += " at control tick " + std::to_string(*tick);
  Error e(ErrorCode::NonFiniteState, what, msg);
  e.tick_ = tick;
  return e;
}

}  // namespace npidob
