#pragma once

#include <stdexcept>
#include <string>

#include "loopexp/laurent.hpp"

namespace loopexp {

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t at)
      : std::runtime_error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}
};

/// Parses Laurent polynomial expressions such as
///   "1 + 2*(t + t^-1 - 2)", "t^3 - t^-3", "u^2", "-v/2".
/// u and v abbreviate t + t^-1 - 2 and t - t^-1. Division is allowed by
/// nonzero constants only.
LaurentPoly parse_laurent(const std::string& text);

}  // namespace loopexp
