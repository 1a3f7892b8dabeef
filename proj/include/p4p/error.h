#ifndef P4P_ERROR_H_
#define P4P_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace p4p {

enum class ErrorCode {
  kOk = 0,
  kDegenerateProjection,
  kOrthogonalToAnchor,
  kNoCandidates,
  kDegenerateInput,
  kDegenerateAlignment,
  kTooFewPoints,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Thrown by the scalar entry points. Batch APIs report the code per element
// instead of throwing.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int index = -1)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  // Offending element (e.g. the canvas point orthogonal to the anchor), or -1.
  int index() const { return index_; }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace p4p

#endif  // P4P_ERROR_H_
