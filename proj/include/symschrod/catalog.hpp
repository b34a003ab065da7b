#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/expr.hpp"

namespace symschrod {

// Keys: P0, P1..Pn, M12 M13 M23, L1 L2 L3, D, G1..Gn, A, I, A1 A2, B1..Bn, Bh1..Bhn.
// sign selects the trigonometric (+1) or hyperbolic (-1) family for A1, A2,
// B, Bh; omega is their frequency.
Generator standard_generator(const std::string& key, int dim, int sign = 1, const Expr& omega = param("omega"));

// Sum of terms, each either "coef*KEY", "KEY" or a plain expression (a
// multiplication operator), e.g. "L3 + kappa*t", "D - kappa*L3",
// "B1^eps1(omega1)", "Bh2^-(omega)". Signs given by eps-names are resolved
// through regime, which may also bind other parameters.
Generator parse_generator(const std::string& text, int dim, const Bindings& regime = {});

// P0, P_a, L, G_a, D, A, I: 13 generators at n = 3, 9 at n = 2.
std::vector<std::string> free_particle_basis(int dim);

struct IdentityCheck {
  std::string name;
  bool holds = false;
};
std::vector<IdentityCheck> verify_free_particle_identities(int dim);

}  // namespace symschrod
