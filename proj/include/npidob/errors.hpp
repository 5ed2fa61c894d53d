#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace npidob {

enum class ErrorCode {
  MissingField,
  InvalidValue,
  UnitError,
  NonFiniteState,
  NotHurwitz,
  IllConditioned,
  NonPositiveGamma,
  EmptyWindow,
  ScenarioMismatch,
  Precondition,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; `code()` distinguishes the failure.
// `subject()` carries the offending field name where there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }
  // Control tick at which a simulation diverged, when known.
  std::optional<std::size_t> tick() const noexcept { return tick_; }

  static Error missing_field(const std::string& name);
  static Error invalid_value(const std::string& name, const std::string& reason);
  static Error non_finite(const std::string& what, std::optional<std::size_t> tick = {});

 private:
  ErrorCode code_;
  std::string subject_;
  std::optional<std::size_t> tick_;
};

}  // namespace npidob
