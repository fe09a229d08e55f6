#pragma once

#include <stdexcept>
#include <string>

namespace ssr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SSR_DEFINE_ERROR(Name)             \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

SSR_DEFINE_ERROR(PreconditionError)
SSR_DEFINE_ERROR(DimensionError)
SSR_DEFINE_ERROR(SplitError)
SSR_DEFINE_ERROR(DegenerateEstimator)
SSR_DEFINE_ERROR(DegenerateClassifier)
SSR_DEFINE_ERROR(DegeneratePseudoSplit)
SSR_DEFINE_ERROR(EmptySupport)
SSR_DEFINE_ERROR(ClosedFormUnavailable)
SSR_DEFINE_ERROR(AttackUnavailable)
SSR_DEFINE_ERROR(NoRobustDirection)
SSR_DEFINE_ERROR(DegenerateGap)
SSR_DEFINE_ERROR(ParseError)
SSR_DEFINE_ERROR(ConfigError)
SSR_DEFINE_ERROR(DegenerateRun)
SSR_DEFINE_ERROR(InvariantViolation)

#undef SSR_DEFINE_ERROR

}  // namespace ssr
