#include "p4p/quadratics.h"

namespace p4p {

std::string_view RootStatusName(RootStatus status) {
  switch (status) {
    case RootStatus::kTwoReal:
      return "two-real";
    case RootStatus::kDouble:
      return "double";
    case RootStatus::kNone:
      return "none";
    case RootStatus::kLinearFallback:
      return "linear-fallback";
  }
  return "unknown";
}

}  // namespace p4p
