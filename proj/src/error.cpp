#include "vsysid/error.hpp"

namespace vsysid {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::BehindCamera: return "behind camera";
    case ErrorCode::NoIntersection: return "no intersection";
    case ErrorCode::Generation: return "generation error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Schema: return "schema error";
    case ErrorCode::Degenerate: return "degenerate input";
    case ErrorCode::NoViableTrack: return "no viable track";
    case ErrorCode::Input: return "input error";
    case ErrorCode::Io: return "i/o error";
  }
  return "error";
}

}  // namespace vsysid
