#pragma once

#include <stdexcept>

namespace loopexp {

#define LOOPEXP_ERROR(Name)                    \
  struct Name : std::runtime_error {           \
    using std::runtime_error::runtime_error;   \
  }

LOOPEXP_ERROR(Malformed);
LOOPEXP_ERROR(SiteNotFound);
LOOPEXP_ERROR(SkeletonMismatch);
LOOPEXP_ERROR(MissingDelta);
LOOPEXP_ERROR(UnsupportedLabel);
LOOPEXP_ERROR(MissingLine);
LOOPEXP_ERROR(TooLarge);
LOOPEXP_ERROR(NotInSpace);
LOOPEXP_ERROR(PPartViolation);
LOOPEXP_ERROR(InsufficientNu);
LOOPEXP_ERROR(NonUnitConstant);
LOOPEXP_ERROR(Singular);
LOOPEXP_ERROR(NormalizationFailure);
LOOPEXP_ERROR(UnexpandedLabel);

#undef LOOPEXP_ERROR

}  // namespace loopexp
