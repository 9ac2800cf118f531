#pragma once

#include <stdexcept>
#include <string>

namespace distil {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DISTIL_DEFINE_ERROR(Name)              \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(#Name ": " + what) {}          \
  }

DISTIL_DEFINE_ERROR(NonHermitianInput);
DISTIL_DEFINE_ERROR(NegativeOperator);
DISTIL_DEFINE_ERROR(NonUnitTrace);
DISTIL_DEFINE_ERROR(DimensionMismatch);
DISTIL_DEFINE_ERROR(NoSignallingViolation);
DISTIL_DEFINE_ERROR(SupportViolation);
DISTIL_DEFINE_ERROR(VanishingSuccessProbability);
DISTIL_DEFINE_ERROR(ContractionViolation);
DISTIL_DEFINE_ERROR(InvalidWitness);
DISTIL_DEFINE_ERROR(EmptyWitnessList);
DISTIL_DEFINE_ERROR(IllFormedProblem);
DISTIL_DEFINE_ERROR(SolverFailure);
DISTIL_DEFINE_ERROR(TooManyStrategies);
DISTIL_DEFINE_ERROR(UnrepresentableNoiseModel);
DISTIL_DEFINE_ERROR(MalformedDistribution);
DISTIL_DEFINE_ERROR(MalformedInstrument);
DISTIL_DEFINE_ERROR(DomainError);
DISTIL_DEFINE_ERROR(DocumentError);
DISTIL_DEFINE_ERROR(ValidationFailure);

#undef DISTIL_DEFINE_ERROR

}  // namespace distil
