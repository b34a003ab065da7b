#pragma once

#include <stdexcept>
#include <string>

#include "symschrod/expr.hpp"

namespace symschrod {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::invalid_argument(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Potential grammar over t, x1..x_dim, r, rt, phi, the fixed parameter names,
// sin cos sinh cosh exp sqrt arctan, formal G(...) / H(...) with 1-3 arguments.
// Exponents after '^' may be integers or (as an extension) any expression,
// which is read as exp(b*log(a)).
Expr parse_expr(const std::string& text, int dim);

bool is_parameter_name(const std::string& s);
bool is_unit_parameter_name(const std::string& s);
Expr parameter_expr(const std::string& name);

}  // namespace symschrod
