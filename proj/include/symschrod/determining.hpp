#pragma once

#include <array>
#include <string>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/expr.hpp"

namespace symschrod {

// Coefficients of the reduced ansatz
//   xi^a = -(alpha/2) x_a + theta^{ab} x_b + nu_a,
//   eta  = (alpha'/4) x^2 - nu_a' x_a + f,
// with alpha = -d(xi0)/dt. xi0 is kept rather than alpha because alpha
// only fixes it up to a constant (the P0 direction).
struct AnsatzCoefficients {
  int dim = 3;
  Expr xi0;
  std::array<std::array<Expr, 3>, 3> theta{};  // antisymmetric, constant
  std::vector<Expr> nu;
  Expr f;

  explicit AnsatzCoefficients(int n = 3) : dim(n), nu(n) {}

  Expr alpha() const;
  void set_theta(int a, int b, const Expr& v);  // 1-based, also sets theta[b][a] = -v
  // Fields in so-form, with the given overall scale.
  Generator to_generator(const Expr& scale, const std::string& name = "") const;
};

struct DeterminingResidual {
  std::string label;  // de1_time, de1_space_a, de2_ab, de6, de7_a, de8
  Expr value;
};

// alpha is taken from the trace equation, alpha = -(2/n) div xi.
std::vector<DeterminingResidual> determining_residuals(const Generator& Q, const Expr& V, int dim);
bool all_residuals_vanish(const std::vector<DeterminingResidual>& rs);

// (alpha/2 x_a - nu_a - theta^{ab} x_b) V_a + alpha V + alpha'' x^2/4 - nu_a'' x_a + f',
// i.e. minus the last determining equation evaluated on the ansatz.
Expr ded_residual(const AnsatzCoefficients& c, const Expr& V);

struct Frequency {
  int axis = 0;
  Expr omega;
  int sign = 0;  // +1 oscillator, -1 repulsive, 0 when it depends on an eps
};

// Terms c * x_a^2 of V with c free of t and x give omega = sqrt(2|c|).
std::vector<Frequency> detect_frequencies(const Expr& V, int dim);

struct AnsatzElement {
  std::string name;
  AnsatzCoefficients coeffs;
  Expr scale;  // catalog scale of this element

  Generator generator() const { return coeffs.to_generator(scale, name); }
};

// P0 first, I last. Without frequencies this is the free-particle basis
// plus the multiplication operators t and t^2.
std::vector<AnsatzElement> build_ansatz_space(int dim, const std::vector<Frequency>& freqs);

struct SymmetryBasis {
  int dim = 3;
  Expr potential;
  std::vector<Generator> generators;
  // rows[k][j]: coefficient of ansatz element j in generator k (reduced echelon form)
  std::vector<std::vector<Expr>> rows;
  std::vector<std::string> ansatz_names;
};

SymmetryBasis solve_symmetries(const Expr& V, int dim);

struct SubalgebraSeeds {
  std::vector<std::vector<std::string>> one_dim, two_dim, three_dim;
};
// Throws std::invalid_argument unless dim == 3.
SubalgebraSeeds enumerate_subalgebra_seeds(int dim = 3);

}  // namespace symschrod
