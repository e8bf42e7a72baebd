#pragma once

#include <stdexcept>
#include <string>

namespace robench {

// Base for every error this library throws. Failures that are part of normal
// evaluation (a wrong candidate, an infeasible LP) are reported as data instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ROBENCH_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// lp-core
ROBENCH_DEFINE_ERROR(MalformedModel);
ROBENCH_DEFINE_ERROR(NumericalFailure);
ROBENCH_DEFINE_ERROR(DimensionMismatch);

// robust model / reformulator
ROBENCH_DEFINE_ERROR(InvalidParams);
ROBENCH_DEFINE_ERROR(InvalidInstance);
ROBENCH_DEFINE_ERROR(UnsupportedSpec);
ROBENCH_DEFINE_ERROR(NoConvergence);
ROBENCH_DEFINE_ERROR(InfeasibleRobust);

// generator
ROBENCH_DEFINE_ERROR(RetryExhausted);
ROBENCH_DEFINE_ERROR(GenerationStalled);
ROBENCH_DEFINE_ERROR(UnsampleableRow);

// memory engine
ROBENCH_DEFINE_ERROR(UnknownId);
ROBENCH_DEFINE_ERROR(DuplicateId);
ROBENCH_DEFINE_ERROR(IdOutOfSequence);

// agents
ROBENCH_DEFINE_ERROR(TransportError);
ROBENCH_DEFINE_ERROR(SchemaError);

#undef ROBENCH_DEFINE_ERROR

}  // namespace robench
