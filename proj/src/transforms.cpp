#include "symschrod/transforms.hpp"

#include <stdexcept>

#include "symschrod/linalg.hpp"

namespace symschrod {

Expr PointTransform::log_multiplier() const { return log_modulus + imag() * phase; }

namespace {

PointTransform identity_transform(const std::string& name, int dim) {
  PointTransform T;
  T.name = name;
  T.dim = dim;
  T.t_new = T.t_old = t_var();
  for (int a = 1; a <= dim; ++a) {
    T.x_new.push_back(var(a));
    T.x_old.push_back(var(a));
  }
  T.domain = "all t";
  return T;
}

Expr x_squared(int dim) {
  Expr s;
  for (int a = 1; a <= dim; ++a) s += var(a) * var(a);
  return s;
}

Bindings inverse_bindings(const PointTransform& T) {
  Bindings b;
  b["t"] = T.t_old;
  for (int a = 1; a <= T.dim; ++a) b[var_name(a)] = T.x_old[a - 1];
  return b;
}

Bindings forward_bindings(const PointTransform& T) {
  Bindings b;
  b["t"] = T.t_new;
  for (int a = 1; a <= T.dim; ++a) b[var_name(a)] = T.x_new[a - 1];
  return b;
}

}  // namespace

PointTransform niederer_attractive(int dim, const Expr& omega) {
  PointTransform T = identity_transform("niederer_attractive", dim);
  const Expr t = t_var();
  const Expr s = Expr(1) + omega * omega * t * t;
  const Expr root_inv = sqrt(s).inverse();
  T.t_new = arctan(omega * t) / omega;
  for (int a = 1; a <= dim; ++a) T.x_new[a - 1] = var(a) * root_inv;
  const Expr c = cos(omega * t);
  T.t_old = sin(omega * t) / (omega * c);
  for (int a = 1; a <= dim; ++a) T.x_old[a - 1] = var(a) / c;
  T.log_modulus = Expr(Rational(dim, 4)) * log(s);
  T.phase = -(omega * omega * t * x_squared(dim)) / (Expr(2) * s);
  return T;
}

PointTransform niederer_repulsive(int dim, const Expr& omega) {
  PointTransform T = identity_transform("niederer_repulsive", dim);
  const Expr t = t_var();
  const Expr s = Expr(1) - omega * omega * t * t;
  const Expr root_inv = sqrt(s).inverse();
  // arctanh(omega t) / omega
  T.t_new = (log(Expr(1) + omega * t) - log(Expr(1) - omega * t)) / (Expr(2) * omega);
  for (int a = 1; a <= dim; ++a) T.x_new[a - 1] = var(a) * root_inv;
  const Expr c = cosh(omega * t);
  T.t_old = sinh(omega * t) / (omega * c);
  for (int a = 1; a <= dim; ++a) T.x_old[a - 1] = var(a) / c;
  T.log_modulus = Expr(Rational(dim, 4)) * log(s);
  T.phase = (omega * omega * t * x_squared(dim)) / (Expr(2) * s);
  T.domain = "|omega t| < 1";
  return T;
}

PointTransform free_fall(int dim, const std::vector<Expr>& kappa) {
  if (static_cast<int>(kappa.size()) != dim) throw std::invalid_argument("free_fall needs one kappa per axis");
  PointTransform T = identity_transform("free_fall", dim);
  const Expr t = t_var();
  const Expr half_t2 = Expr(Rational(1, 2)) * t * t;
  Expr kx, k2;
  for (int a = 1; a <= dim; ++a) {
    const Expr& k = kappa[a - 1];
    T.x_new[a - 1] = var(a) - k * half_t2;
    T.x_old[a - 1] = var(a) + k * half_t2;
    kx += k * var(a);
    k2 += k * k;
  }
  T.phase = -t * kx + Expr(Rational(1, 3)) * k2 * t * t * t;
  return T;
}

PointTransform const_shift(int dim, const Expr& C) {
  PointTransform T = identity_transform("const_shift", dim);
  // exp(-i C t) takes V to V + C
  T.phase = -C * t_var();
  return T;
}

PointTransform euclid(int dim, const std::vector<std::vector<Rational>>& R, const std::vector<Expr>& shift,
                      const Expr& scale) {
  if (scale.is_zero()) throw std::invalid_argument("euclid scale must be nonzero");
  if (static_cast<int>(R.size()) != dim || static_cast<int>(shift.size()) != dim)
    throw std::invalid_argument("euclid data has the wrong dimension");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Rational dot = 0;
      for (int k = 0; k < dim; ++k) dot += R[i][k] * R[j][k];
      if (dot != (i == j ? 1 : 0)) throw std::invalid_argument("euclid rotation is not orthogonal");
    }
  PointTransform T = identity_transform("euclid", dim);
  T.t_new = scale * scale * t_var();
  T.t_old = t_var() / (scale * scale);
  for (int a = 0; a < dim; ++a) {
    Expr fwd = shift[a], back;
    for (int b = 0; b < dim; ++b) {
      if (R[a][b] != 0) fwd += scale * Expr(R[a][b]) * var(b + 1);
      if (R[b][a] != 0) back += Expr(R[b][a]) * (var(b + 1) - shift[b]);
    }
    T.x_new[a] = fwd;
    T.x_old[a] = back / scale;
  }
  return T;
}

std::vector<std::string> catalog_transform_names() {
  return {"niederer_attractive", "niederer_repulsive", "free_fall", "const_shift", "euclid"};
}

PointTransform catalog_transform(const std::string& name, int dim, const Bindings& params) {
  auto get = [&](const std::string& p) { return params.count(p) ? params.at(p) : param(p); };
  if (name == "niederer_attractive") return niederer_attractive(dim, get("omega"));
  if (name == "niederer_repulsive") return niederer_repulsive(dim, get("omega"));
  if (name == "free_fall") {
    std::vector<Expr> k;
    for (int a = 1; a <= dim; ++a) k.push_back(get("kappa" + std::to_string(a)));
    return free_fall(dim, k);
  }
  if (name == "const_shift") return const_shift(dim, get("C"));
  if (name == "euclid") {
    std::vector<std::vector<Rational>> R(dim, std::vector<Rational>(dim, Rational(0)));
    R[0][0] = Rational(3, 5);
    R[0][1] = Rational(-4, 5);
    R[1][0] = Rational(4, 5);
    R[1][1] = Rational(3, 5);
    if (dim == 3) R[2][2] = 1;
    std::vector<Expr> b = {Expr(1), Expr(-2), Expr(Rational(1, 2))};
    b.resize(dim);
    Expr s = params.count("s") ? params.at("s") : Expr(2);
    return euclid(dim, R, b, s);
  }
  throw std::invalid_argument("unknown transform '" + name + "'");
}

PullbackVerdict pullback_check(const PointTransform& T, const Expr& V_src, const Expr& V_dst) {
  const int n = T.dim;
  std::vector<Expr> args{T.t_new};
  for (const auto& x : T.x_new) args.push_back(x);
  const Expr F = formal("F", args);
  const Expr E = T.log_multiplier();
  const Expr I = imag();

  // e^E L_src e^{-E} F(t~, x~)
  const Expr Et = differentiate(E, 0);
  Expr R = I * (differentiate(F, 0) - Et * F) - V_src * F;
  for (int a = 1; a <= n; ++a) {
    Expr Ea = differentiate(E, a);
    Expr Fa = differentiate(F, a);
    Expr Faa = differentiate(Fa, a);
    R += Expr(Rational(1, 2)) * (Faa - Expr(2) * Ea * Fa - differentiate(Ea, a) * F + Ea * Ea * F);
  }

  PullbackVerdict v;
  v.factor = differentiate(T.t_new, 0);
  Expr Ld = I * formal("F", args, {0}) - substitute(V_dst, forward_bindings(T)) * F;
  for (int a = 1; a <= n; ++a) Ld += Expr(Rational(1, 2)) * formal("F", args, {a, a});
  v.residual = R - v.factor * Ld;
  v.pass = !v.factor.is_zero() && is_identically_zero(v.residual);
  return v;
}

DiffOp conjugate_operator(const PointTransform& T, const DiffOp& Q) {
  if (Q.order() > 1) throw std::invalid_argument("only first-order operators can be conjugated");
  const int n = T.dim;
  const Expr E = T.log_multiplier();
  Expr q0 = Q.coefficient({0, 0, 0, 0});
  std::vector<Expr> c(n + 1);
  for (int v = 0; v <= n; ++v) {
    c[v] = Q.coefficient(unit_index(v));
    if (!c[v].is_zero()) q0 -= c[v] * differentiate(E, v);
  }
  const Bindings back = inverse_bindings(T);
  // Jacobian of the inverse map in image variables, inverted
  std::vector<Expr> old{T.t_old};
  for (const auto& x : T.x_old) old.push_back(x);
  ExprMatrix K(n + 1, std::vector<Expr>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) K[i][j] = differentiate(old[i], j);
  ExprMatrix J = inverse_matrix(K);

  std::vector<Expr> cs(n + 1);
  for (int i = 0; i <= n; ++i) cs[i] = c[i].is_zero() ? c[i] : substitute(c[i], back);
  DiffOp out(n);
  for (int j = 0; j <= n; ++j) {
    Expr comp;
    for (int i = 0; i <= n; ++i)
      if (!cs[i].is_zero() && !J[j][i].is_zero()) comp += J[j][i] * cs[i];
    out.add_term(unit_index(j), comp);
  }
  out.add_term({0, 0, 0, 0}, substitute(q0, back));
  return out;
}

Generator conjugate_generator(const PointTransform& T, const Generator& Q) {
  return generator_from_diffop(conjugate_operator(T, Q.to_diffop()), Q.scale, Q.name);
}

Expr euclid_image_potential(const PointTransform& T, const Expr& V_src) {
  const Bindings back = inverse_bindings(T);
  return substitute(V_src, back) / substitute(differentiate(T.t_new, 0), back);
}

}  // namespace symschrod
