#pragma once

#include <optional>
#include <string>

#include "vage/series.hpp"

namespace vage {

/// Input text that could not be parsed; the CLI maps it to a usage error.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest generator k mentioned as x<k> in the expression (0 if none).
Generator max_generator_in(const std::string& expr);

/// Parses sums/products of complex literals and generator powers, e.g.
/// "1 - x1 + 2*x1*x2", "(1+x1)^3", "0.5i*x2", "1/(1-x1)". Products are ring
/// convolutions on the window; division multiplies by the ring inverse.
Series parse_series_expr(const std::string& expr, const TruncationSpec& window);

/// A constant expression such as "1.5", "-2i", "1+2i".
Complex parse_complex(const std::string& expr);

}  // namespace vage
