#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace footcal {

enum class ErrorCode {
  kDomain,               // non-finite or out-of-range argument
  kInvalidSeries,        // malformed series or trajectory
  kUnsupportedGeometry,  // twist angles other than the Go2-style assignment
  kIllConditioned,       // auto-covariance below the singular-value floor
  kRankDeficient,        // two or more unexcited axes
  kNoValidCandidate,     // every offset candidate failed
  kIo,                   // file or parse failure
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace footcal
