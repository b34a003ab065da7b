#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "symschrod/expr.hpp"

namespace symschrod {

// Exponents of (d_t, d_1, d_2, d_3).
using MultiIndex = std::array<int, 4>;

class DiffOp {
 public:
  explicit DiffOp(int dim = 3) : dim_(dim) {}

  static DiffOp multiplication(const Expr& f, int dim);
  static DiffOp partial(int v, int dim);

  int dim() const { return dim_; }
  const std::map<MultiIndex, Expr>& terms() const { return terms_; }
  Expr coefficient(const MultiIndex& m) const;
  void add_term(const MultiIndex& m, const Expr& c);
  int order() const;
  bool is_zero() const { return terms_.empty(); }

  Expr apply(const Expr& f) const;
  DiffOp map_coefficients(const std::function<Expr(const Expr&)>& fn) const;
  std::string str() const;

  friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator*(const Expr& c, const DiffOp& a);

 private:
  int dim_;
  std::map<MultiIndex, Expr> terms_;
};

MultiIndex unit_index(int v);
// Applies d^m to f.
Expr derivative(const Expr& f, const MultiIndex& m);

DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp commutator(const DiffOp& a, const DiffOp& b);

// i d_t + (1/2) Laplacian - V. V must not depend on t.
DiffOp schrodinger_L(const Expr& V, int dim);

// Q = scale * (xi0 d_t + xi^a d_a + (1/2) d_a xi^a + i eta).
// The fields are the "so" form; for the catalog generators they are real.
struct Generator {
  int dim = 3;
  Expr scale = Expr(1);
  Expr xi0;
  std::vector<Expr> xi;
  Expr eta;
  std::string name;

  DiffOp to_diffop() const;
  bool is_real_form() const;
};

// Reads the fields back from a first-order operator whose second-order part
// vanishes. Throws std::invalid_argument otherwise.
Generator generator_from_diffop(const DiffOp& op, const Expr& scale, const std::string& name = "");

struct SymmetryVerdict {
  bool symmetric = false;
  Expr alpha;             // [Q, L] = alpha L when symmetric
  DiffOp residual;        // [Q, L] - alpha L
  Expr residual_zeroth;   // its zeroth-order coefficient (first nonzero one if that vanishes)
};

// Throws std::invalid_argument when Q is not first order.
SymmetryVerdict check_point_symmetry(const DiffOp& Q, const Expr& V, int dim);
SymmetryVerdict check_point_symmetry(const Generator& Q, const Expr& V);

}  // namespace symschrod
