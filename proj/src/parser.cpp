#include "symschrod/parser.hpp"

#include <cctype>

namespace symschrod {

bool is_unit_parameter_name(const std::string& s) {
  return s == "eps" || s == "eps1" || s == "eps2" || s == "eps3";
}

bool is_parameter_name(const std::string& s) {
  static const char* names[] = {"kappa",  "mu",     "omega",  "omega1", "omega2", "omega3",
                                "kappa1", "kappa2", "kappa3", "C"};
  for (const char* n : names)
    if (s == n) return true;
  return is_unit_parameter_name(s);
}

Expr parameter_expr(const std::string& name) {
  return is_unit_parameter_name(name) ? unit_param(name) : param(name);
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

  Expr run() {
    if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+')) {
        e = e + product();
      } else if (eat('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) {
        e = e * unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        try {
          e = e * reciprocal();
        } catch (const DivisionByZero&) {
          throw ParseError("division by zero", at);
        }
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return pow_expr();
  }

  // 1/u for the next unary operand; b^k is inverted as b^-k so factored
  // denominators stay factored.
  Expr reciprocal() {
    if (eat('-')) return -reciprocal();
    if (eat('+')) return reciprocal();
    Expr base = primary();
    if (!eat('^')) return base.inverse();
    return power(base, -unary_exponent());
  }

  Expr pow_expr() {
    Expr base = primary();
    if (!eat('^')) return base;
    std::size_t at = pos_;
    Expr ex = unary_exponent();
    try {
      return power(base, ex);
    } catch (const DivisionByZero&) {
      throw ParseError("division by zero", at);
    }
  }

  Expr unary_exponent() {
    if (eat('-')) return -unary_exponent();
    if (eat('+')) return unary_exponent();
    return primary();
  }

  std::string ident() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(b, pos_ - b);
  }

  std::vector<Expr> args() {
    std::vector<Expr> out;
    expect('(');
    out.push_back(sum());
    while (eat(',')) out.push_back(sum());
    expect(')');
    return out;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not supported");
      return Expr(Rational(mpz_class(s_.substr(b, pos_ - b))));
    }
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
    std::size_t at = pos_;
    std::string id = ident();
    if (id == "t") return t_var();
    if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '9') {
      int a = id[1] - '0';
      if (a > dim_) throw ParseError("unknown variable '" + id + "' in dimension " + std::to_string(dim_), at);
      return x_var(a);
    }
    if (id == "r") {
      if (dim_ != 3) throw ParseError("'r' is only available in dimension 3", at);
      return r_radius(3);
    }
    if (id == "rt") {
      if (dim_ < 2) throw ParseError("'rt' needs dimension >= 2", at);
      return rt_radius();
    }
    if (id == "phi") {
      if (dim_ < 2) throw ParseError("'phi' needs dimension >= 2", at);
      return phi();
    }
    if (is_parameter_name(id)) return parameter_expr(id);
    if (id == "G" || id == "H") {
      auto a = args();
      if (a.size() > 3) throw ParseError("formal functions take 1-3 arguments", at);
      return formal(id, std::move(a));
    }
    static const char* fns[] = {"sin", "cos", "sinh", "cosh", "exp", "sqrt", "arctan"};
    for (const char* f : fns) {
      if (id != f) continue;
      auto a = args();
      if (a.size() != 1) throw ParseError(id + " takes one argument", at);
      try {
        if (id == "sin") return sin(a[0]);
        if (id == "cos") return cos(a[0]);
        if (id == "sinh") return sinh(a[0]);
        if (id == "cosh") return cosh(a[0]);
        if (id == "exp") return exp(a[0]);
        if (id == "sqrt") return sqrt(a[0]);
        return arctan(a[0]);
      } catch (const DivisionByZero&) {
        throw ParseError("division by zero", at);
      }
    }
    throw ParseError("unknown identifier '" + id + "'", at);
  }

  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, int dim) {
  Parser p(text, dim);
  return p.run();
}

}  // namespace symschrod
