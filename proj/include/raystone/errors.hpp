// Error taxonomy for the surface-wave engine.
//
// Each condition that a caller can reasonably anticipate and handle gets its
// own exception type; all derive from Error so the CLI can map them onto exit
// codes (config errors vs numerical failures) uniformly.
#pragma once

#include <stdexcept>
#include <string>

namespace raystone {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid inputs (bad configuration / domain preconditions).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Numerical failures (a computation could not be completed).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

#define RAYSTONE_INPUT_ERROR(NAME)              \
  class NAME : public InvalidInput {            \
   public:                                      \
    using InvalidInput::InvalidInput;           \
  }

#define RAYSTONE_NUMERIC_ERROR(NAME)            \
  class NAME : public NumericalFailure {        \
   public:                                      \
    using NumericalFailure::NumericalFailure;   \
  }

RAYSTONE_INPUT_ERROR(NonPositiveParameter);
RAYSTONE_INPUT_ERROR(OutsideWorkingBox);
RAYSTONE_INPUT_ERROR(DegenerateMetric);
RAYSTONE_INPUT_ERROR(OutsideEllipticRange);
RAYSTONE_INPUT_ERROR(OutsideEllipticInterior);
RAYSTONE_INPUT_ERROR(OutsideTube);
RAYSTONE_INPUT_ERROR(OffCharacteristic);
RAYSTONE_INPUT_ERROR(SourceNotExpired);
RAYSTONE_INPUT_ERROR(ConfigError);

RAYSTONE_NUMERIC_ERROR(RootCountMismatch);
RAYSTONE_NUMERIC_ERROR(DegenerateEigenvalue);
RAYSTONE_NUMERIC_ERROR(NoStoneleyRoot);
RAYSTONE_NUMERIC_ERROR(CausticEncountered);
RAYSTONE_NUMERIC_ERROR(StepTooLarge);
RAYSTONE_NUMERIC_ERROR(LeftWorkingBox);
RAYSTONE_NUMERIC_ERROR(InterpolationGap);
RAYSTONE_NUMERIC_ERROR(DegenerateEllipse);

#undef RAYSTONE_INPUT_ERROR
#undef RAYSTONE_NUMERIC_ERROR

}  // namespace raystone
