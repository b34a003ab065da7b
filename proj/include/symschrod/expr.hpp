#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symschrod {

using Rational = mpq_class;

class Expr;

// Kernels are the opaque "atoms" of the normal form. Imag and Param are
// field-like (they only ever show up in coefficients); everything else is
// a function of t, x.
enum class KernelKind : std::uint8_t {
  Imag,
  Param,
  Var,
  Radical,
  Phi,
  Exp,
  Log,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Arctan,
  Formal,
};

struct KernelNode;
using Kernel = std::shared_ptr<const KernelNode>;

struct KernelNode {
  KernelKind kind;
  std::string name;
  int index = 0;               // Var: 0 is t, a is x_a
  bool unit = false;           // Param squares to one (eps)
  std::vector<int> partials;   // Formal: sorted 0-based argument indices
  std::vector<Expr> args;
  std::size_t hash = 0;
};

int compare_kernels(const Kernel& a, const Kernel& b);
bool is_field_kernel(const Kernel& k);

using Monomial = std::vector<std::pair<Kernel, int>>;

struct Term {
  Monomial mono;
  Rational coeff;
};

using Poly = std::vector<Term>;

struct ExprNode {
  Poly num;
  std::vector<std::pair<Poly, int>> den;
  std::size_t hash = 0;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Expr {
 public:
  Expr();
  Expr(int v);  // NOLINT
  Expr(const Rational& v);  // NOLINT
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

  static Expr from_kernel(const Kernel& k, int power = 1);
  static Expr from_poly(Poly num);

  const ExprNode& node() const { return *node_; }
  const Poly& num() const { return node_->num; }
  const std::vector<std::pair<Poly, int>>& den() const { return node_->den; }
  std::size_t hash() const { return node_->hash; }

  bool is_zero() const { return node_->num.empty(); }
  bool is_rational() const;
  Rational as_rational() const;
  bool is_single_term() const { return node_->den.empty() && node_->num.size() == 1; }
  // true when no kernel other than params/eps/i occurs
  bool is_param_only() const;
  bool depends_on_var(int index) const;
  bool has_imag() const;

  Expr pow(int e) const;
  Expr inverse() const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

int compare(const Expr& a, const Expr& b);
inline bool same(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
// Semantic equality: a - b normalizes to zero.
bool equal(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// atoms
Expr var(int index);
inline Expr t_var() { return var(0); }
inline Expr x_var(int a) { return var(a); }
Expr param(const std::string& name);
Expr unit_param(const std::string& name);  // eps-type, eps^2 = 1
Expr imag();
Expr phi();
Expr r_radius(int dim);       // sqrt(x1^2+...+x_dim^2)
Expr rt_radius();             // sqrt(x1^2+x2^2)
Expr formal(const std::string& name, std::vector<Expr> args, std::vector<int> partials = {});

// functions
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr arctan(const Expr& e);
// a^b for symbolic b: exp(b log a)
Expr power(const Expr& base, const Expr& exponent);

// calculus and friends
Expr differentiate(const Expr& e, int var_index);
bool is_identically_zero(const Expr& e);
// Numerator with the rewrite rules applied even where that lengthens it
// (rt^2 becomes x1^2 + x2^2).
Poly reduced_numerator(const Expr& e);

using Bindings = std::map<std::string, Expr>;  // keys: "t","x1".. or param names
Expr substitute(const Expr& e, const Bindings& b);

using NumericPoint = std::map<std::string, double>;
std::complex<double> evaluate_complex(const Expr& e, const NumericPoint& p);
double evaluate_numeric(const Expr& e, const NumericPoint& p);

std::string var_name(int index);
// Collect the names of all parameters (incl. eps-type) occurring in e.
void collect_params(const Expr& e, std::vector<std::string>& out);

// Split a Laurent numerator into (field coefficient, function monomial) pairs.
// Keys compare with compare_monomials; coefficients only contain params/i.
int compare_monomials(const Monomial& a, const Monomial& b);
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_monomials(a, b) < 0; }
};
using CoefficientMap = std::map<Monomial, Expr, MonomialLess>;
// Brings the family over a common denominator, clears negative powers of
// function kernels by one shared monomial and groups every numerator by its
// function monomial. A linear combination of the family vanishes iff it
// vanishes coefficientwise in the returned maps.
std::vector<CoefficientMap> split_family(const std::vector<Expr>& es);

// Rewrites e over a common denominator together with others: returns
// numerators N_i with e_i = N_i / L for a shared L.
std::vector<Expr> common_numerators(const std::vector<Expr>& es);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace symschrod
