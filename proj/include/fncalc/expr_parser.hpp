#pragma once

#include <span>
#include <string>
#include <string_view>

#include "fncalc/scalar.hpp"

namespace fncalc {

/// Parse an infix rational-function expression such as "(x^2 - 1)/(y + 2)".
///
/// Grammar: `+ - * / ^`, parentheses, integer literals, and identifiers drawn
/// from `names` (identifier k denotes coordinate k). Exponents are integer
/// literals, optionally negated. Errors carry a 1-based column on line 1.
Scalar parse_scalar(std::string_view text, std::span<const std::string> names);

}  // namespace fncalc
