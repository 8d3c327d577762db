#pragma once

#include <stdexcept>
#include <string>

namespace vsysid {

enum class ErrorCode {
  Domain,          // non-finite or out-of-range parameters
  BehindCamera,    // point at or behind the image plane
  NoIntersection,  // viewing ray misses the requested plane
  Generation,      // scene config cannot be realised
  Parse,           // malformed document
  Schema,          // well-formed document violating an invariant
  Degenerate,      // zero-variance track or series
  NoViableTrack,   // nothing left to select from
  Input,           // bad arguments or inconsistent inputs
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vsysid
