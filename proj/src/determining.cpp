#include "symschrod/determining.hpp"

#include <stdexcept>

#include "symschrod/linalg.hpp"

namespace symschrod {

Expr AnsatzCoefficients::alpha() const { return -differentiate(xi0, 0); }

void AnsatzCoefficients::set_theta(int a, int b, const Expr& v) {
  theta[a - 1][b - 1] = v;
  theta[b - 1][a - 1] = -v;
}

Generator AnsatzCoefficients::to_generator(const Expr& scale, const std::string& name) const {
  Generator g;
  g.dim = dim;
  g.scale = scale;
  g.name = name;
  g.xi0 = xi0;
  const Expr al = alpha();
  const Expr half_alpha = Expr(Rational(1, 2)) * al;
  Expr x2;
  g.eta = f;
  g.xi.assign(dim, Expr());
  for (int a = 1; a <= dim; ++a) {
    Expr x = var(a);
    Expr xa = -half_alpha * x + nu[a - 1];
    for (int b = 1; b <= dim; ++b)
      if (!theta[a - 1][b - 1].is_zero()) xa += theta[a - 1][b - 1] * var(b);
    g.xi[a - 1] = xa;
    x2 += x * x;
    g.eta -= differentiate(nu[a - 1], 0) * x;
  }
  g.eta += Expr(Rational(1, 4)) * differentiate(al, 0) * x2;
  return g;
}

static Expr divergence(const Generator& Q) {
  Expr d;
  for (int a = 1; a <= Q.dim; ++a) d += differentiate(Q.xi[a - 1], a);
  return d;
}

std::vector<DeterminingResidual> determining_residuals(const Generator& Q, const Expr& V, int dim) {
  std::vector<DeterminingResidual> out;
  const Expr div = divergence(Q);
  const Expr alpha = Expr(Rational(-2, dim)) * div;
  out.push_back({"de1_time", differentiate(Q.xi0, 0) + alpha});
  for (int a = 1; a <= dim; ++a)
    out.push_back({"de1_space_" + std::to_string(a), differentiate(Q.xi0, a)});
  for (int a = 1; a <= dim; ++a)
    for (int b = a; b <= dim; ++b) {
      Expr r = differentiate(Q.xi[b - 1], a) + differentiate(Q.xi[a - 1], b);
      if (a == b) r -= Expr(Rational(2, dim)) * div;
      out.push_back({"de2_" + std::to_string(a) + std::to_string(b), r});
    }
  out.push_back({"de6", div + Expr(Rational(dim, 2)) * alpha});
  for (int a = 1; a <= dim; ++a)
    out.push_back({"de7_" + std::to_string(a), differentiate(Q.xi[a - 1], 0) + differentiate(Q.eta, a)});
  Expr de8 = -alpha * V - differentiate(Q.eta, 0);
  for (int a = 1; a <= dim; ++a) de8 += Q.xi[a - 1] * differentiate(V, a);
  out.push_back({"de8", de8});
  return out;
}

bool all_residuals_vanish(const std::vector<DeterminingResidual>& rs) {
  for (const auto& r : rs)
    if (!is_identically_zero(r.value)) return false;
  return true;
}

Expr ded_residual(const AnsatzCoefficients& c, const Expr& V) {
  Generator g = c.to_generator(Expr(1));
  Expr de8 = -c.alpha() * V - differentiate(g.eta, 0);
  for (int a = 1; a <= c.dim; ++a) de8 += g.xi[a - 1] * differentiate(V, a);
  return -de8;
}

std::vector<Frequency> detect_frequencies(const Expr& V, int dim) {
  std::vector<Frequency> out;
  if (!V.den().empty()) return out;
  for (const Term& term : reduced_numerator(V)) {
    int axis = 0;
    bool ok = true, has_unit = false;
    Poly field{Term{{}, term.coeff}};
    for (const auto& [k, e] : term.mono) {
      if (k->kind == KernelKind::Var && k->index >= 1 && k->index <= dim && e == 2 && axis == 0) {
        axis = k->index;
      } else if (k->kind == KernelKind::Param && k->unit) {
        has_unit = true;
      } else if (is_field_kernel(k)) {
        field[0].mono.emplace_back(k, e);
      } else {
        ok = false;
      }
    }
    if (!ok || axis == 0) continue;
    const int s = sgn(term.coeff);
    // omega^2 = 2|c|; parameters are taken positive, so even powers halve
    Poly w2 = field;
    w2[0].coeff = 2 * abs(term.coeff);
    bool even = true;
    for (const auto& [k, e] : w2[0].mono) even = even && k->kind == KernelKind::Param && e % 2 == 0;
    Expr omega;
    if (even) {
      Poly half{Term{{}, Rational(1)}};
      for (const auto& [k, e] : w2[0].mono) half[0].mono.emplace_back(k, e / 2);
      omega = Expr::from_poly(half) * sqrt(Expr(w2[0].coeff));
    } else {
      omega = sqrt(Expr::from_poly(w2));
    }
    Frequency fr{axis, omega, has_unit ? 0 : s};
    bool dup = false;
    for (const auto& o : out) dup = dup || (o.axis == fr.axis && o.sign == fr.sign && same(o.omega, fr.omega));
    if (!dup) out.push_back(fr);
  }
  return out;
}

namespace {

AnsatzElement element(const std::string& name, int dim, const Expr& scale) {
  return AnsatzElement{name, AnsatzCoefficients(dim), scale};
}

std::string sign_token(int s) { return s > 0 ? "+" : "-"; }

}  // namespace

std::vector<AnsatzElement> build_ansatz_space(int dim, const std::vector<Frequency>& freqs) {
  const Expr t = t_var();
  const Expr I = imag();
  // distinct (omega, sign) pairs; an undetermined sign brings both families
  std::vector<std::pair<Expr, int>> osc;
  for (const auto& f : freqs)
    for (int s : {1, -1}) {
      if (f.sign != 0 && f.sign != s) continue;
      bool dup = false;
      for (const auto& o : osc) dup = dup || (o.second == s && same(o.first, f.omega));
      if (!dup) osc.emplace_back(f.omega, s);
    }

  std::vector<AnsatzElement> out;
  auto add_time = [&](const std::string& name, const Expr& p) {
    out.push_back(element(name, dim, I));
    out.back().coeffs.xi0 = p;
  };
  add_time("P0", Expr(1));
  add_time("D", Expr(2) * t);
  add_time("A", t * t);
  for (const auto& [w, s] : osc) {
    Expr w2t = Expr(2) * w * t;
    std::string tail = sign_token(s) + "(" + w.str() + ")";
    add_time("A1^" + tail, (s > 0 ? sin(w2t) : sinh(w2t)) / w);
    add_time("A2^" + tail, (s > 0 ? cos(w2t) : cosh(w2t)) / w);
  }

  auto add_rot = [&](const std::string& name, int a, int b) {
    out.push_back(element(name, dim, -I));
    out.back().coeffs.set_theta(a, b, Expr(-1));
  };
  if (dim == 3) {
    add_rot("L1", 2, 3);
    add_rot("L2", 3, 1);
  }
  add_rot("L3", 1, 2);

  auto add_nu = [&](const std::string& name, int a, const Expr& q) {
    out.push_back(element(name, dim, -I));
    out.back().coeffs.nu[a - 1] = q;
  };
  for (int a = 1; a <= dim; ++a) add_nu("P" + std::to_string(a), a, Expr(1));
  for (int a = 1; a <= dim; ++a) add_nu("G" + std::to_string(a), a, t);
  for (const auto& [w, s] : osc) {
    Expr wt = w * t;
    std::string tail = sign_token(s) + "(" + w.str() + ")";
    for (int a = 1; a <= dim; ++a) add_nu("B" + std::to_string(a) + "^" + tail, a, s > 0 ? sin(wt) : sinh(wt));
    for (int a = 1; a <= dim; ++a) add_nu("Bh" + std::to_string(a) + "^" + tail, a, s > 0 ? cos(wt) : cosh(wt));
  }

  auto add_f = [&](const Expr& f) {
    out.push_back(element(f.str(), dim, -I));
    out.back().coeffs.f = f;
  };
  // t^2 and the single-frequency profiles balance linear and shifted terms
  add_f(t);
  add_f(t * t);
  for (const auto& [w, s] : osc)
    for (int k : {1, 2}) {
      Expr kwt = Expr(k) * w * t;
      add_f(s > 0 ? sin(kwt) : sinh(kwt));
      add_f(s > 0 ? cos(kwt) : cosh(kwt));
    }
  out.push_back(element("I", dim, -I));
  out.back().coeffs.f = Expr(1);
  return out;
}

SymmetryBasis solve_symmetries(const Expr& V, int dim) {
  SymmetryBasis sb;
  sb.dim = dim;
  sb.potential = V;
  std::vector<AnsatzElement> elems = build_ansatz_space(dim, detect_frequencies(V, dim));
  const int K = static_cast<int>(elems.size());
  std::vector<std::vector<Expr>> columns;
  for (const auto& e : elems) {
    columns.push_back({e.scale * ded_residual(e.coeffs, V)});
    sb.ansatz_names.push_back(e.name);
  }
  ExprMatrix rows = linear_rows(columns);
  sb.rows = nullspace(rows, K);

  const Expr I = imag();
  for (const auto& c : sb.rows) {
    // sum_k c_k * scale_k * fields_k, then rescaled to the catalog scale
    AnsatzCoefficients acc(dim);
    for (int k = 0; k < K; ++k) {
      if (c[k].is_zero()) continue;
      const AnsatzCoefficients& e = elems[k].coeffs;
      Expr w = c[k] * elems[k].scale;
      acc.xi0 += w * e.xi0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc.theta[a][b] += w * e.theta[a][b];
      for (int a = 0; a < dim; ++a) acc.nu[a] += w * e.nu[a];
      acc.f += w * e.f;
    }
    Expr scale = acc.xi0.is_zero() ? -I : I;
    Expr inv = scale.inverse();
    acc.xi0 *= inv;
    for (auto& row : acc.theta)
      for (auto& v : row) v *= inv;
    for (auto& v : acc.nu) v *= inv;
    acc.f *= inv;

    std::string name;
    for (int k = 0; k < K; ++k) {
      if (c[k].is_zero()) continue;
      Expr ck = c[k];
      bool neg = ck.is_rational() && sgn(ck.as_rational()) < 0;
      if (neg) ck = -ck;
      if (name.empty())
        name += neg ? "-" : "";
      else
        name += neg ? " - " : " + ";
      if (!(ck.is_rational() && ck.as_rational() == 1)) name += (ck.is_single_term() ? ck.str() : "(" + ck.str() + ")") + "*";
      name += elems[k].name;
    }
    sb.generators.push_back(acc.to_generator(scale, name));
  }
  return sb;
}

SubalgebraSeeds enumerate_subalgebra_seeds(int dim) {
  if (dim != 3) throw std::invalid_argument("subalgebra seeds are listed for n = 3 only");
  SubalgebraSeeds s;
  s.one_dim = {{"L3"}, {"L3 + P3"}, {"D + mu*L3"}, {"P3"}};
  s.two_dim = {{"L3 + kappa*t", "P3"}, {"D + kappa*L3", "P3"}, {"P2", "P3"}, {"D", "L3"}};
  s.three_dim = {{"D", "P3", "L3"},      {"D", "P1", "P2"},         {"L1", "L2", "L3"},
                 {"L3", "P1", "P2"},     {"P1", "P2", "P3"},        {"L3 + P3", "P1", "P2"},
                 {"D + mu*L3", "P1", "P2"}};
  return s;
}

}  // namespace symschrod
