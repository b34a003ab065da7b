#pragma once

#include <array>
#include <string>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/expr.hpp"

namespace symschrod {

// A point transformation from base variables (t, x) to image variables
// (t~, x~). Both sets are written with the variable names t, x1.. ; which
// set an expression lives in is fixed by the field.
//
//   psi_image(t~, x~) = exp(log_modulus + i*phase) * psi_base(t, x)
struct PointTransform {
  std::string name;
  int dim = 3;
  Expr t_new;               // t~(t, x)
  std::vector<Expr> x_new;  // x~_a(t, x)
  Expr t_old;               // t(t~, x~)
  std::vector<Expr> x_old;  // x_a(t~, x~)
  Expr log_modulus;         // in base variables
  Expr phase;               // in base variables
  std::string domain;       // validity note, e.g. "|omega t| < 1"

  Expr log_multiplier() const;
};

PointTransform niederer_attractive(int dim, const Expr& omega = param("omega"));
PointTransform niederer_repulsive(int dim, const Expr& omega = param("omega"));
// kappa has one entry per axis; zero entries leave the axis alone.
PointTransform free_fall(int dim, const std::vector<Expr>& kappa);
PointTransform const_shift(int dim, const Expr& C = param("C"));
// x~ = s * R x + b, t~ = s^2 t with R orthogonal (rational entries).
PointTransform euclid(int dim, const std::vector<std::vector<Rational>>& rotation, const std::vector<Expr>& shift,
                      const Expr& scale);

// Names: niederer_attractive, niederer_repulsive, free_fall, const_shift,
// euclid (the latter with a fixed sample rotation). Parameters default to
// omega, kappa1.., C. Throws std::invalid_argument on unknown names.
PointTransform catalog_transform(const std::string& name, int dim, const Bindings& params = {});
std::vector<std::string> catalog_transform_names();

struct PullbackVerdict {
  bool pass = false;
  Expr factor;    // lambda with e^E L_src e^{-E} = lambda * L_dst (mapped)
  Expr residual;  // zero when pass
};

// V_src is written in base variables, V_dst in image variables.
PullbackVerdict pullback_check(const PointTransform& T, const Expr& V_src, const Expr& V_dst);

// The operator m Q m^{-1} written in the image variables. Q lives in the
// base variables. Throws std::invalid_argument when Q is not first order.
DiffOp conjugate_operator(const PointTransform& T, const DiffOp& Q);
Generator conjugate_generator(const PointTransform& T, const Generator& Q);

// V_src transported by an affine-in-x map with t~ depending on t only:
// V_src(x(x~)) / (dt~/dt). Exact for euclid and free of ambiguity there.
Expr euclid_image_potential(const PointTransform& T, const Expr& V_src);

}  // namespace symschrod
