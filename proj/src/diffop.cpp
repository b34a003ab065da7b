#include "symschrod/diffop.hpp"

#include <sstream>
#include <stdexcept>

namespace symschrod {

MultiIndex unit_index(int v) {
  MultiIndex m{0, 0, 0, 0};
  m[v] = 1;
  return m;
}

static int total(const MultiIndex& m) { return m[0] + m[1] + m[2] + m[3]; }

DiffOp DiffOp::multiplication(const Expr& f, int dim) {
  DiffOp d(dim);
  d.add_term({0, 0, 0, 0}, f);
  return d;
}

DiffOp DiffOp::partial(int v, int dim) {
  DiffOp d(dim);
  d.add_term(unit_index(v), Expr(1));
  return d;
}

Expr DiffOp::coefficient(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Expr() : it->second;
}

void DiffOp::add_term(const MultiIndex& m, const Expr& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

int DiffOp::order() const {
  int o = 0;
  for (const auto& kv : terms_) o = std::max(o, total(kv.first));
  return terms_.empty() ? -1 : o;
}

Expr derivative(const Expr& f, const MultiIndex& m) {
  Expr r = f;
  for (int v = 0; v < 4; ++v)
    for (int k = 0; k < m[v] && !r.is_zero(); ++k) r = differentiate(r, v);
  return r;
}

Expr DiffOp::apply(const Expr& f) const {
  Expr out;
  for (const auto& [m, c] : terms_) out += c * derivative(f, m);
  return out;
}

DiffOp DiffOp::map_coefficients(const std::function<Expr(const Expr&)>& fn) const {
  DiffOp d(dim_);
  for (const auto& [m, c] : terms_) d.add_term(m, fn(c));
  return d;
}

std::string DiffOp::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    for (int v = 0; v < 4; ++v)
      if (m[v] > 0) os << "*d" << (v == 0 ? std::string("t") : std::to_string(v)) << (m[v] > 1 ? "^" + std::to_string(m[v]) : "");
  }
  return os.str();
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
  DiffOp d = a;
  for (const auto& [m, c] : b.terms_) d.add_term(m, c);
  return d;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) {
  DiffOp d = a;
  for (const auto& [m, c] : b.terms_) d.add_term(m, -c);
  return d;
}

DiffOp operator*(const Expr& c, const DiffOp& a) {
  DiffOp d(a.dim());
  if (c.is_zero()) return d;
  for (const auto& [m, e] : a.terms_) d.add_term(m, c * e);
  return d;
}

static long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  std::map<MultiIndex, std::vector<Expr>> acc;
  for (const auto& [beta, cb] : b.terms()) {
    std::map<MultiIndex, Expr> dcache;
    dcache.emplace(MultiIndex{0, 0, 0, 0}, cb);
    auto deriv = [&](const MultiIndex& g) -> Expr {
      std::function<Expr(const MultiIndex&)> rec = [&](const MultiIndex& h) -> Expr {
        auto it = dcache.find(h);
        if (it != dcache.end()) return it->second;
        int v = 0;
        while (h[v] == 0) ++v;
        MultiIndex lower = h;
        --lower[v];
        Expr r = rec(lower);
        r = r.is_zero() ? r : differentiate(r, v);
        dcache.emplace(h, r);
        return r;
      };
      return rec(g);
    };
    for (const auto& [alpha, ca] : a.terms()) {
      for (int g0 = 0; g0 <= alpha[0]; ++g0)
        for (int g1 = 0; g1 <= alpha[1]; ++g1)
          for (int g2 = 0; g2 <= alpha[2]; ++g2)
            for (int g3 = 0; g3 <= alpha[3]; ++g3) {
              MultiIndex g{g0, g1, g2, g3};
              Expr d = deriv(g);
              if (d.is_zero()) continue;
              long bc = binom(alpha[0], g0) * binom(alpha[1], g1) * binom(alpha[2], g2) * binom(alpha[3], g3);
              MultiIndex out;
              for (int v = 0; v < 4; ++v) out[v] = alpha[v] - g[v] + beta[v];
              acc[out].push_back(Expr(static_cast<int>(bc)) * ca * d);
            }
    }
  }
  DiffOp res(a.dim());
  for (auto& [m, parts] : acc) {
    Expr s;
    for (const auto& p : parts) s += p;
    res.add_term(m, s);
  }
  return res;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) - compose(b, a); }

DiffOp schrodinger_L(const Expr& V, int dim) {
  if (V.depends_on_var(0)) throw std::invalid_argument("potential must not depend on t");
  DiffOp L(dim);
  L.add_term(unit_index(0), imag());
  for (int a = 1; a <= dim; ++a) {
    MultiIndex m{0, 0, 0, 0};
    m[a] = 2;
    L.add_term(m, Expr(Rational(1, 2)));
  }
  L.add_term({0, 0, 0, 0}, -V);
  return L;
}

DiffOp Generator::to_diffop() const {
  DiffOp d(dim);
  d.add_term(unit_index(0), scale * xi0);
  Expr div;
  for (int a = 1; a <= dim; ++a) {
    const Expr& f = xi[a - 1];
    d.add_term(unit_index(a), scale * f);
    div += differentiate(f, a);
  }
  d.add_term({0, 0, 0, 0}, scale * (Expr(Rational(1, 2)) * div + imag() * eta));
  return d;
}

bool Generator::is_real_form() const {
  if (xi0.has_imag() || eta.has_imag()) return false;
  for (const auto& f : xi)
    if (f.has_imag()) return false;
  return true;
}

Generator generator_from_diffop(const DiffOp& op, const Expr& scale, const std::string& name) {
  if (op.order() > 1) throw std::invalid_argument("operator is not first order");
  Generator g;
  g.dim = op.dim();
  g.scale = scale;
  g.name = name;
  g.xi0 = op.coefficient(unit_index(0)) / scale;
  g.xi.resize(g.dim);
  Expr div;
  for (int a = 1; a <= g.dim; ++a) {
    g.xi[a - 1] = op.coefficient(unit_index(a)) / scale;
    div += differentiate(g.xi[a - 1], a);
  }
  Expr zeroth = op.coefficient({0, 0, 0, 0}) / scale;
  g.eta = (zeroth - Expr(Rational(1, 2)) * div) * (-imag());
  return g;
}

SymmetryVerdict check_point_symmetry(const DiffOp& Q, const Expr& V, int dim) {
  if (Q.order() > 1) throw std::invalid_argument("symmetry operator must be first order");
  for (const auto& [m, c] : Q.terms())
    if (m[0] + m[1] + m[2] + m[3] > 1) throw std::invalid_argument("symmetry operator must be first order");
  DiffOp L = schrodinger_L(V, dim);
  DiffOp C = commutator(Q, L);
  SymmetryVerdict v;
  v.alpha = C.coefficient(unit_index(0)) * (-imag());
  v.residual = C - v.alpha * L;
  bool alpha_t_only = true;
  for (int a = 1; a <= dim; ++a) alpha_t_only = alpha_t_only && !v.alpha.depends_on_var(a);
  v.symmetric = v.residual.is_zero() && alpha_t_only;
  v.residual_zeroth = v.residual.coefficient({0, 0, 0, 0});
  if (v.residual_zeroth.is_zero() && !v.residual.is_zero()) v.residual_zeroth = v.residual.terms().begin()->second;
  return v;
}

SymmetryVerdict check_point_symmetry(const Generator& Q, const Expr& V) {
  return check_point_symmetry(Q.to_diffop(), V, Q.dim);
}

}  // namespace symschrod
