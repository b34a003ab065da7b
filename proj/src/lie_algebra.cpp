#include "symschrod/lie_algebra.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <sstream>

#include "symschrod/catalog.hpp"

namespace symschrod {

// ------------------------------------------------------------ constants

AbstractLieAlgebra AbstractLieAlgebra::real_form() const {
  AbstractLieAlgebra r = *this;
  const Expr I = imag();
  for (auto& row : r.c)
    for (auto& v : row)
      for (auto& e : v)
        if (!e.is_zero()) e = I * e;
  return r;
}

AbstractLieAlgebra structure_constants(const std::vector<DiffOp>& ops, const std::vector<std::string>& labels) {
  AbstractLieAlgebra alg;
  const int d = static_cast<int>(ops.size());
  alg.dim = d;
  alg.labels = labels;
  alg.labels.resize(d);
  alg.c.assign(d, std::vector<std::vector<Expr>>(d, std::vector<Expr>(d)));
  std::vector<DiffOp> comms;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      comms.push_back(commutator(ops[i], ops[j]));
      pairs.emplace_back(i, j);
    }
  auto coords = span_coordinates(ops, comms);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    if (!coords[p]) throw NonClosure(alg.labels[i], alg.labels[j], comms[p].str());
    for (int k = 0; k < d; ++k) {
      alg.c[i][j][k] = (*coords[p])[k];
      alg.c[j][i][k] = -(*coords[p])[k];
    }
  }
  return alg;
}

AbstractLieAlgebra structure_constants(const std::vector<Generator>& gens) {
  std::vector<DiffOp> ops;
  std::vector<std::string> labels;
  for (const auto& g : gens) {
    ops.push_back(g.to_diffop());
    labels.push_back(g.name);
  }
  return structure_constants(ops, labels);
}

bool satisfies_jacobi(const AbstractLieAlgebra& alg) {
  const int d = alg.dim;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Expr s;
          for (int m = 0; m < d; ++m) {
            if (!alg.c[i][j][m].is_zero()) s += alg.c[i][j][m] * alg.c[m][k][l];
            if (!alg.c[j][k][m].is_zero()) s += alg.c[j][k][m] * alg.c[m][i][l];
            if (!alg.c[k][i][m].is_zero()) s += alg.c[k][i][m] * alg.c[m][j][l];
          }
          if (!s.is_zero()) return false;
        }
  return true;
}

AbstractLieAlgebra change_basis(const AbstractLieAlgebra& alg, const std::vector<std::vector<Expr>>& m) {
  const int d = alg.dim;
  ExprMatrix inv = inverse_matrix(m);
  AbstractLieAlgebra out;
  out.dim = d;
  for (int i = 0; i < d; ++i) out.labels.push_back("e" + std::to_string(i + 1));
  out.c.assign(d, std::vector<std::vector<Expr>>(d, std::vector<Expr>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      std::vector<Expr> v(d);  // in the old basis
      for (int a = 0; a < d; ++a) {
        if (m[i][a].is_zero()) continue;
        for (int b = 0; b < d; ++b) {
          if (m[j][b].is_zero()) continue;
          Expr w = m[i][a] * m[j][b];
          for (int k = 0; k < d; ++k)
            if (!alg.c[a][b][k].is_zero()) v[k] += w * alg.c[a][b][k];
        }
      }
      for (int l = 0; l < d; ++l) {
        Expr s;
        for (int k = 0; k < d; ++k)
          if (!v[k].is_zero() && !inv[k][l].is_zero()) s += v[k] * inv[k][l];
        out.c[i][j][l] = s;
        out.c[j][i][l] = -s;
      }
    }
  return out;
}

// ------------------------------------------------------------ specialization

Bindings default_specialization(int attempt) {
  const std::vector<std::pair<std::string, Rational>> base = {
      {"kappa", Rational(5, 3)},  {"mu", Rational(7, 5)},    {"omega", Rational(2)},  {"omega1", Rational(3)},
      {"omega2", Rational(5)},    {"omega3", Rational(7)},   {"C", Rational(11, 3)},  {"kappa1", Rational(2)},
      {"kappa2", Rational(3)},    {"kappa3", Rational(5)},
  };
  Bindings b;
  for (const auto& [name, v] : base) b[name] = Expr(attempt == 0 ? v : v * Rational(10 + 3 * attempt, 9 + 2 * attempt));
  return b;
}

static Bindings complete_bindings(const AbstractLieAlgebra& alg, Bindings values) {
  std::vector<std::string> names;
  for (const auto& row : alg.c)
    for (const auto& v : row)
      for (const auto& e : v) collect_params(e, names);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  int next = 0;
  for (const auto& n : names) {
    if (values.count(n)) continue;
    if (n.rfind("eps", 0) == 0) {
      values[n] = Expr(1);
    } else {
      values[n] = Expr(Rational(13 + 4 * next, 7 + 2 * next));
      ++next;
    }
  }
  return values;
}

RationalLieAlgebra specialize(const AbstractLieAlgebra& real_alg, const Bindings& values) {
  Bindings full = complete_bindings(real_alg, values);
  RationalLieAlgebra r;
  r.dim = real_alg.dim;
  r.c.assign(r.dim, std::vector<QVector>(r.dim, QVector(r.dim, Rational(0))));
  for (int i = 0; i < r.dim; ++i)
    for (int j = 0; j < r.dim; ++j)
      for (int k = 0; k < r.dim; ++k) {
        const Expr& e = real_alg.c[i][j][k];
        if (e.is_zero()) continue;
        Expr v = substitute(e, full);
        if (!v.is_rational()) throw std::domain_error("structure constant " + e.str() + " is not real after specialization");
        r.c[i][j][k] = v.as_rational();
      }
  return r;
}

// ------------------------------------------------------------ rational helpers

namespace {

using QPoly = std::vector<Rational>;  // lowest degree first

void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

// returns remainder, quotient in q
QPoly divmod(QPoly a, const QPoly& b, QPoly* q = nullptr) {
  trim(a);
  QPoly quot(std::max(0, degree(a) - degree(b) + 1), Rational(0));
  while (!a.empty() && degree(a) >= degree(b)) {
    int shift = degree(a) - degree(b);
    Rational f = a.back() / b.back();
    quot[shift] = f;
    for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= f * b[k];
    trim(a);
  }
  if (q) {
    trim(quot);
    *q = quot;
  }
  return a;
}

QPoly monic(QPoly p) {
  trim(p);
  if (p.empty()) return p;
  Rational l = p.back();
  for (auto& c : p) c /= l;
  return p;
}

QPoly gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = monic(divmod(a, b));  // keeps the coefficients from growing
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

QPoly exact_div(const QPoly& a, const QPoly& b) {
  QPoly q;
  divmod(a, b, &q);
  return q;
}

int sign_changes(const std::vector<int>& s) {
  int n = 0, prev = 0;
  for (int v : s) {
    if (v == 0) continue;
    if (prev != 0 && v != prev) ++n;
    prev = v;
  }
  return n;
}

// distinct real roots
int sturm_count(const QPoly& p) {
  QPoly a = p;
  trim(a);
  if (degree(a) < 1) return 0;
  std::vector<QPoly> seq{a, derivative(a)};
  while (true) {
    QPoly r = divmod(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    // any positive rescaling keeps the sign pattern
    Rational scale = -abs(r.back());
    for (auto& c : r) c /= scale;
    seq.push_back(r);
  }
  std::vector<int> at_neg, at_pos;
  for (const auto& s : seq) {
    int lead = sgn(s.back());
    at_pos.push_back(lead);
    at_neg.push_back(degree(s) % 2 == 0 ? lead : -lead);
  }
  return sign_changes(at_neg) - sign_changes(at_pos);
}

// Yun: factors a_i of multiplicity i
std::vector<std::pair<QPoly, int>> squarefree(const QPoly& f) {
  std::vector<std::pair<QPoly, int>> out;
  QPoly fp = derivative(f);
  QPoly a0 = gcd(f, fp);
  QPoly b = exact_div(f, a0);
  QPoly c = exact_div(fp, a0);
  QPoly d = c;
  {
    QPoly bp = derivative(b);
    d.resize(std::max(d.size(), bp.size()), Rational(0));
    for (std::size_t k = 0; k < bp.size(); ++k) d[k] -= bp[k];
    trim(d);
  }
  int i = 1;
  while (degree(b) > 0) {
    QPoly a = gcd(b, d);
    b = exact_div(b, a);
    c = exact_div(d, a);
    QPoly bp = derivative(b);
    d = c;
    d.resize(std::max(d.size(), bp.size()), Rational(0));
    for (std::size_t k = 0; k < bp.size(); ++k) d[k] -= bp[k];
    trim(d);
    if (degree(a) > 0) out.emplace_back(a, i);
    ++i;
  }
  return out;
}

// distinct nonzero purely imaginary roots of h
int imaginary_count(const QPoly& h) {
  QPoly re, im;
  for (std::size_t k = 0; k < h.size(); ++k) {
    // (i y)^k
    Rational c = h[k];
    int r = static_cast<int>(k % 4);
    if (r >= 2) c = -c;
    QPoly& dst = (k % 2 == 0) ? re : im;
    if (dst.size() <= k) dst.resize(k + 1, Rational(0));
    dst[k] = c;
  }
  trim(re);
  trim(im);
  QPoly g = im.empty() ? monic(re) : gcd(re, im);
  // drop the root y = 0
  std::size_t z = 0;
  while (z < g.size() && sgn(g[z]) == 0) ++z;
  g.erase(g.begin(), g.begin() + static_cast<long>(z));
  return sturm_count(g);
}

QPoly charpoly(const QMatrix& a) {
  const int n = static_cast<int>(a.size());
  QPoly c(n + 1, Rational(0));
  c[n] = 1;
  QMatrix m(n, QVector(n, Rational(0)));
  for (int k = 1; k <= n; ++k) {
    // m = a m + c[n-k+1] I
    QMatrix next(n, QVector(n, Rational(0)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (sgn(a[i][l]) == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += a[i][l] * m[l][j];
      }
    for (int i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    m = std::move(next);
    Rational tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[n - k] = -tr / k;
  }
  return c;
}

Spectrum spectrum_of(const QMatrix& a) {
  Spectrum s;
  QPoly p = charpoly(a);
  std::size_t z = 0;
  while (z < p.size() && sgn(p[z]) == 0) ++z;
  s.zero = static_cast<int>(z);
  p.erase(p.begin(), p.begin() + static_cast<long>(z));
  int rest = degree(p);
  s.distinct = s.zero > 0 ? 1 : 0;
  for (const auto& [f, mult] : squarefree(p)) {
    s.distinct += degree(f);
    s.real += mult * sturm_count(f);
    s.imaginary += mult * imaginary_count(f);
  }
  s.complex = rest - s.real - s.imaginary;
  return s;
}

QMatrix ad_matrix(const RationalLieAlgebra& g, const QVector& x) {
  const int d = g.dim;
  QMatrix m(d, QVector(d, Rational(0)));
  for (int i = 0; i < d; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (sgn(g.c[i][j][k]) != 0) m[k][j] += x[i] * g.c[i][j][k];
  }
  return m;
}

QVector bracket(const RationalLieAlgebra& g, const QVector& u, const QVector& w) {
  const int d = g.dim;
  QVector out(d, Rational(0));
  for (int i = 0; i < d; ++i) {
    if (sgn(u[i]) == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (sgn(w[j]) == 0) continue;
      Rational f = u[i] * w[j];
      for (int k = 0; k < d; ++k)
        if (sgn(g.c[i][j][k]) != 0) out[k] += f * g.c[i][j][k];
    }
  }
  return out;
}

QMatrix identity_rows(int d) {
  QMatrix m(d, QVector(d, Rational(0)));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

QMatrix bracket_space(const RationalLieAlgebra& g, const QMatrix& u, const QMatrix& w) {
  QMatrix rows;
  for (const auto& a : u)
    for (const auto& b : w) rows.push_back(bracket(g, a, b));
  if (rows.empty()) return rows;
  return q_row_basis(rows, g.dim);
}

QMatrix center_rows(const RationalLieAlgebra& g) {
  const int d = g.dim;
  QMatrix m;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      QVector row(d, Rational(0));
      bool any = false;
      for (int i = 0; i < d; ++i) {
        row[i] = g.c[i][j][k];
        any = any || sgn(row[i]) != 0;
      }
      if (any) m.push_back(std::move(row));
    }
  if (m.empty()) return identity_rows(d);
  return q_nullspace(m, d);
}

QMatrix killing_matrix(const RationalLieAlgebra& g) {
  const int d = g.dim;
  std::vector<QMatrix> ad;
  for (int i = 0; i < d; ++i) {
    QVector e(d, Rational(0));
    e[i] = 1;
    ad.push_back(ad_matrix(g, e));
  }
  QMatrix k(d, QVector(d, Rational(0)));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Rational tr = 0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          if (sgn(ad[i][a][b]) != 0 && sgn(ad[j][b][a]) != 0) tr += ad[i][a][b] * ad[j][b][a];
      k[i][j] = k[j][i] = tr;
    }
  return k;
}

// inertia (pos, neg) by symmetric elimination
std::pair<int, int> inertia(QMatrix m) {
  int pos = 0, neg = 0;
  while (!m.empty()) {
    const int n = static_cast<int>(m.size());
    int p = -1;
    for (int i = 0; i < n && p < 0; ++i)
      if (sgn(m[i][i]) != 0) p = i;
    if (p < 0) {
      int a = -1, b = -1;
      for (int i = 0; i < n && a < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (sgn(m[i][j]) != 0) {
            a = i;
            b = j;
            break;
          }
      if (a < 0) break;
      for (int j = 0; j < n; ++j) m[a][j] += m[b][j];
      for (int j = 0; j < n; ++j) m[j][a] += m[j][b];
      p = a;
    }
    Rational piv = m[p][p];
    (sgn(piv) > 0 ? pos : neg)++;
    QMatrix next;
    for (int i = 0; i < n; ++i) {
      if (i == p) continue;
      QVector row;
      for (int j = 0; j < n; ++j) {
        if (j == p) continue;
        row.push_back(m[i][j] - m[i][p] * m[p][j] / piv);
      }
      next.push_back(std::move(row));
    }
    m = std::move(next);
  }
  return {pos, neg};
}

QMatrix q_inverse(const QMatrix& b) {
  const int n = static_cast<int>(b.size());
  QMatrix aug(n, QVector(2 * n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = b[i][j];
    aug[i][n + i] = 1;
  }
  q_rref_in_place(aug, n);
  QMatrix inv(n, QVector(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// g / ideal, the ideal given by independent rows
RationalLieAlgebra quotient(const RationalLieAlgebra& g, const QMatrix& ideal) {
  const int d = g.dim;
  QMatrix rows = q_row_basis(ideal, d);
  QMatrix tmp = rows;
  std::vector<int> piv = q_rref_in_place(tmp, d);
  std::vector<int> comp;
  for (int c = 0; c < d; ++c)
    if (std::find(piv.begin(), piv.end(), c) == piv.end()) comp.push_back(c);
  QMatrix basis;
  for (int c : comp) {
    QVector e(d, Rational(0));
    e[c] = 1;
    basis.push_back(e);
  }
  for (const auto& r : rows) basis.push_back(r);
  QMatrix inv = q_inverse(basis);
  RationalLieAlgebra q;
  q.dim = static_cast<int>(comp.size());
  q.c.assign(q.dim, std::vector<QVector>(q.dim, QVector(q.dim, Rational(0))));
  for (int a = 0; a < q.dim; ++a)
    for (int b = 0; b < q.dim; ++b) {
      const QVector& v = g.c[comp[a]][comp[b]];
      for (int l = 0; l < q.dim; ++l) {
        Rational s = 0;
        for (int k = 0; k < d; ++k)
          if (sgn(v[k]) != 0) s += v[k] * inv[k][l];
        q.c[a][b][l] = s;
      }
    }
  return q;
}

std::string levi_name(int dim, int pos, int neg) {
  if (dim == 0) return "";
  if (dim == 3 && pos == 2 && neg == 1) return "sl(2,R)";
  if (dim == 3 && pos == 0 && neg == 3) return "so(3)";
  if (dim == 6 && pos == 4 && neg == 2) return "sl(2,R)+sl(2,R)";
  if (dim == 6 && pos == 2 && neg == 4) return "sl(2,R)+so(3)";
  if (dim == 6 && pos == 0 && neg == 6) return "so(3)+so(3)";
  return "semisimple(" + std::to_string(dim) + ";" + std::to_string(pos) + "," + std::to_string(neg) + ")";
}

}  // namespace

// ------------------------------------------------------------ fingerprint

bool Fingerprint::same_invariants(const Fingerprint& o) const {
  return dim == o.dim && derived == o.derived && lower_central == o.lower_central && center == o.center &&
         solvable == o.solvable && nilpotent == o.nilpotent && killing_rank == o.killing_rank &&
         killing_pos == o.killing_pos && killing_neg == o.killing_neg && levi == o.levi && radical == o.radical &&
         spectrum == o.spectrum;
}

static std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string Fingerprint::str() const {
  std::ostringstream os;
  os << "dim=" << dim << " derived=(" << join(derived) << ") lcs=(" << join(lower_central) << ") center=" << center
     << (solvable ? " solvable" : "") << (nilpotent ? " nilpotent" : "") << " killing_rank=" << killing_rank
     << " signature="
     << (killing_pos < 0 ? std::string("n/a") : "(" + std::to_string(killing_pos) + "," + std::to_string(killing_neg) + ")")
     << " levi=" << (levi.empty() ? "none" : levi)
     << " radical=" << radical << " ad_spectrum=(0:" << spectrum.zero << ",re:" << spectrum.real
     << ",im:" << spectrum.imaginary << ",cx:" << spectrum.complex << ",distinct:" << spectrum.distinct << ")";
  return os.str();
}

Fingerprint fingerprint(const RationalLieAlgebra& g) {
  Fingerprint f;
  const int d = g.dim;
  f.dim = d;
  const QMatrix all = identity_rows(d);

  QMatrix cur = all;
  f.derived.push_back(d);
  while (!cur.empty()) {
    QMatrix next = bracket_space(g, cur, cur);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
    f.derived.push_back(static_cast<int>(cur.size()));
  }
  f.solvable = f.derived.back() == 0;
  const QMatrix derived1 = d == 0 ? QMatrix{} : (f.derived.size() > 1 ? bracket_space(g, all, all) : all);

  cur = all;
  f.lower_central.push_back(d);
  while (!cur.empty()) {
    QMatrix next = bracket_space(g, all, cur);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
    f.lower_central.push_back(static_cast<int>(cur.size()));
  }
  f.nilpotent = f.lower_central.back() == 0;
  f.center = static_cast<int>(center_rows(g).size());

  QMatrix K = killing_matrix(g);
  auto [pos, neg] = inertia(K);
  f.killing_rank = pos + neg;
  // for solvable algebras the signature moves with the parameters of a
  // family (it compares frequencies), so only the rank is kept
  f.killing_pos = f.solvable ? -1 : pos;
  f.killing_neg = f.solvable ? -1 : neg;

  // radical: Killing-orthogonal complement of [g, g]
  QMatrix rad;
  if (derived1.empty()) {
    rad = all;
  } else {
    QMatrix cons;
    for (const auto& y : derived1) {
      QVector row(d, Rational(0));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) row[i] += K[i][j] * y[j];
      cons.push_back(row);
    }
    rad = q_nullspace(cons, d);
  }
  f.radical = static_cast<int>(rad.size());
  if (f.radical < d) {
    RationalLieAlgebra s = rad.empty() ? g : quotient(g, rad);
    auto [sp, sn] = inertia(killing_matrix(s));
    f.levi = levi_name(s.dim, sp, sn);
  }

  if (f.solvable) {
    std::mt19937 rng(20241015u);
    std::uniform_int_distribution<int> dist(1, 9);
    QVector x(d);
    for (int i = 0; i < d; ++i) x[i] = Rational(dist(rng) * (rng() % 2 ? 1 : -1), dist(rng) + 1);
    f.spectrum = spectrum_of(ad_matrix(g, x));
  } else {
    f.spectrum = Spectrum{-1, -1, -1, -1, -1};
  }
  return f;
}

namespace {

int symbolic_rank(const std::vector<std::vector<Expr>>& rows, int cols) {
  ExprMatrix m = rows;
  if (m.empty()) return 0;
  return static_cast<int>(rref_in_place(m, cols).size());
}

// derived dimension and center dimension over the parameter field
std::pair<int, int> symbolic_profile(const AbstractLieAlgebra& a) {
  const int d = a.dim;
  std::vector<std::vector<Expr>> br, cen;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) br.push_back(a.c[i][j]);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      std::vector<Expr> row(d);
      for (int i = 0; i < d; ++i) row[i] = a.c[i][j][k];
      cen.push_back(row);
    }
  return {symbolic_rank(br, d), d - symbolic_rank(cen, d)};
}

std::string bindings_str(const Bindings& b) {
  std::string s;
  for (const auto& [k, v] : b) s += (s.empty() ? "" : ",") + k + "=" + v.str();
  return s;
}

struct Specialized {
  RationalLieAlgebra alg;
  std::string record;
};

Specialized specialize_checked(const AbstractLieAlgebra& alg) {
  AbstractLieAlgebra real = alg.real_form();
  auto prof = symbolic_profile(real);
  for (int attempt = 0; attempt < 4; ++attempt) {
    Bindings b = complete_bindings(real, default_specialization(attempt));
    RationalLieAlgebra r = specialize(real, b);
    QMatrix br;
    for (int i = 0; i < r.dim; ++i)
      for (int j = i + 1; j < r.dim; ++j) br.push_back(r.c[i][j]);
    int dr = br.empty() ? 0 : q_rank(br);
    int cz = static_cast<int>(center_rows(r).size());
    if (dr == prof.first && cz == prof.second) {
      // only record parameters that occur
      Bindings used;
      std::vector<std::string> names;
      for (const auto& row : real.c)
        for (const auto& v : row)
          for (const auto& e : v) collect_params(e, names);
      for (const auto& n : names) used[n] = b[n];
      return {r, bindings_str(used)};
    }
  }
  throw IdentificationError("parameter specialization stays degenerate");
}

}  // namespace

Fingerprint fingerprint(const AbstractLieAlgebra& alg) {
  Specialized s = specialize_checked(alg);
  Fingerprint f = fingerprint(s.alg);
  f.specialization = s.record;
  return f;
}

// ------------------------------------------------------------ templates

namespace {

struct Template {
  std::string name;
  std::vector<std::string> generators;
  AbstractLieAlgebra alg;
  Fingerprint fp;
};

std::string eps_str(int e) { return e > 0 ? "1" : "-1"; }
std::string eps_tok(int e) { return e > 0 ? "+" : "-"; }

std::vector<std::string> osc_pair(int axis, int e, const std::string& omega) {
  std::string a = std::to_string(axis);
  return {"B" + a + "^" + eps_tok(e) + "(" + omega + ")", "Bh" + a + "^" + eps_tok(e) + "(" + omega + ")"};
}

std::vector<Template> build_templates() {
  std::vector<std::pair<std::string, std::vector<std::string>>> defs = {
      {"n_{3,1}", {"P0", "L3 + kappa*t", "I"}},
      {"s_{2,1}", {"P0", "D"}},
      {"n_{4,1}", {"P0", "G3", "P3", "I"}},
      {"sl(2,R)", {"P0", "D", "A"}},
      {"so(3)", {"L1", "L2", "L3"}},
      {"s_{5,14}", {"P0", "L3 + kappa*t", "G3", "P3", "I"}},
      {"s_{5,38}", {"P0", "D + kappa*L3", "G3", "P3", "I"}},
      {"sl(2,R)⊂+n_{3,1}", {"P0", "D", "A", "G3", "P3", "I"}},
      {"g(1,2)", {"P0", "P2", "P3", "G2", "G3", "L1", "I"}},
      {"sl(2,R)⊕so(3)", {"P0", "D", "A", "L1", "L2", "L3"}},
      {"schr(1,2)", {"P0", "D", "A", "P2", "P3", "G2", "G3", "L1", "I"}},
      {"schr(1,3)", {"P0", "P1", "P2", "P3", "L1", "L2", "L3", "G1", "G2", "G3", "D", "A", "I"}},
  };

  for (int e : {1, -1}) {
    auto b3 = osc_pair(3, e, "omega");
    defs.push_back({e > 0 ? "s_{4,9}" : "s_{4,8}", {"P0", b3[0], b3[1], "I"}});
    defs.push_back({e > 0 ? "s_{5,16}" : "s_{5,15}", {"P0", b3[0], b3[1], "L3 + mu*t", "I"}});
    auto b2 = osc_pair(2, e, "omega");
    defs.push_back({e > 0 ? "s_{6,161}" : "s_{6,160}", {"P0", b2[0], b2[1], "P3", "G3", "I"}});
  }
  for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, -1}}) {
    auto p1 = osc_pair(1, e1, "omega1"), p2 = osc_pair(2, e2, "omega2");
    std::string name = e1 * e2 < 0 ? "s_{6,164}" : (e1 > 0 ? "s_{6,166}" : "s_{6,162}");
    defs.push_back({name, {"P0", p1[0], p1[1], p2[0], p2[1], "I"}});
    defs.push_back({"s_{8,2}(" + eps_str(e1) + "," + eps_str(e2) + ")",
                    {"P0", p1[0], p1[1], p2[0], p2[1], "P3", "G3", "I"}});
  }
  for (auto [e1, e2, e3] : {std::tuple{1, 1, 1}, {1, 1, -1}, {1, -1, -1}, {-1, -1, -1}}) {
    auto p1 = osc_pair(1, e1, "omega1"), p2 = osc_pair(2, e2, "omega2"), p3 = osc_pair(3, e3, "omega3");
    defs.push_back({"s_{8,1}(" + eps_str(e1) + "," + eps_str(e2) + "," + eps_str(e3) + ")",
                    {"P0", p1[0], p1[1], p2[0], p2[1], p3[0], p3[1], "I"}});
  }
  for (int e : {1, -1}) {
    auto p1 = osc_pair(1, e, "omega"), p2 = osc_pair(2, e, "omega");
    for (int e3 : {1, -1}) {
      auto p3 = osc_pair(3, e3, "omega3");
      defs.push_back({"s_{9,1}(" + eps_str(e) + "," + eps_str(e3) + ")",
                      {"P0", "L3", p1[0], p1[1], p2[0], p2[1], p3[0], p3[1], "I"}});
    }
    defs.push_back({"s_{9,2}(" + eps_str(e) + ")", {"P0", "G3", "P3", "L3", p1[0], p1[1], p2[0], p2[1], "I"}});
    auto p3 = osc_pair(3, e, "omega");
    defs.push_back({"s_{9,3}(" + eps_str(e) + ")", {"P0", p3[0], p3[1], "P1", "P2", "G1", "G2", "L3", "I"}});
  }

  std::vector<Template> out;
  for (auto& [name, gens] : defs) {
    std::vector<Generator> gs;
    for (const auto& g : gens) {
      Generator q = parse_generator(g, 3);
      q.name = g;
      gs.push_back(q);
    }
    Template t{name, gens, structure_constants(gs), {}};
    out.push_back(std::move(t));
  }
  return out;
}

AbstractLieAlgebra direct_sum(const AbstractLieAlgebra& a, const AbstractLieAlgebra& b) {
  AbstractLieAlgebra s;
  s.dim = a.dim + b.dim;
  s.labels = a.labels;
  s.labels.insert(s.labels.end(), b.labels.begin(), b.labels.end());
  s.c.assign(s.dim, std::vector<std::vector<Expr>>(s.dim, std::vector<Expr>(s.dim)));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int k = 0; k < a.dim; ++k) s.c[i][j][k] = a.c[i][j][k];
  for (int i = 0; i < b.dim; ++i)
    for (int j = 0; j < b.dim; ++j)
      for (int k = 0; k < b.dim; ++k) s.c[a.dim + i][a.dim + j][a.dim + k] = b.c[i][j][k];
  return s;
}

const std::vector<Template>& templates() {
  static const std::vector<Template> all = [] {
    std::vector<Template> ts = build_templates();
    auto find = [&](const std::string& n) -> const AbstractLieAlgebra& {
      for (const auto& t : ts)
        if (t.name == n) return t.alg;
      throw std::logic_error("missing template " + n);
    };
    // direct sums that the tables print without a single realization
    AbstractLieAlgebra sl_n31 = direct_sum(find("sl(2,R)"), find("n_{3,1}"));
    AbstractLieAlgebra sl_n41 = direct_sum(find("sl(2,R)"), find("n_{4,1}"));
    ts.push_back({"sl(2,R)⊕n_{3,1}", {"sl(2,R)", "n_{3,1}"}, sl_n31, {}});
    ts.push_back({"sl(2,R)⊕n_{4,1}", {"sl(2,R)", "n_{4,1}"}, sl_n41, {}});
    for (auto& t : ts) t.fp = fingerprint(t.alg);
    return ts;
  }();
  return all;
}

}  // namespace

std::vector<std::string> template_names() {
  std::vector<std::string> out;
  for (const auto& t : templates()) out.push_back(t.name);
  return out;
}

const AbstractLieAlgebra& template_algebra(const std::string& name) {
  for (const auto& t : templates())
    if (t.name == name) return t.alg;
  throw std::invalid_argument("unknown template " + name);
}

static std::string abelian_label(int k) { return k == 1 ? "n_{1,1}" : std::to_string(k) + "n_{1,1}"; }

Identification identify(const AbstractLieAlgebra& alg) {
  Identification id;
  if (alg.dim == 0) throw IdentificationError("empty algebra");
  Specialized sp = specialize_checked(alg);
  const RationalLieAlgebra& g = sp.alg;
  const int d = g.dim;

  QMatrix all = identity_rows(d);
  QMatrix der = bracket_space(g, all, all);
  QMatrix cen = center_rows(g);
  // central directions independent of [g, g]
  QMatrix acc = der;
  QMatrix peel;
  int r = acc.empty() ? 0 : q_rank(acc);
  for (const auto& z : cen) {
    acc.push_back(z);
    int nr = q_rank(acc);
    if (nr > r) {
      peel.push_back(z);
      r = nr;
    } else {
      acc.pop_back();
    }
  }
  id.abelian_summands = static_cast<int>(peel.size());
  if (id.abelian_summands == d) {
    id.label = abelian_label(d);
    return id;
  }
  RationalLieAlgebra base = peel.empty() ? g : quotient(g, peel);
  Fingerprint fp = fingerprint(base);
  fp.specialization = sp.record;
  id.base_fingerprint = fp;

  std::vector<std::string> hits;
  for (const auto& t : templates())
    if (t.fp.same_invariants(fp)) hits.push_back(t.name);
  if (hits.empty()) throw IdentificationError("no template matches " + fp.str());
  if (hits.size() > 1) {
    std::string names;
    for (const auto& h : hits) names += " " + h;
    throw IdentificationError("ambiguous match:" + names);
  }
  id.base = hits[0];
  id.label = id.base;
  if (id.abelian_summands > 0) id.label += "⊕" + abelian_label(id.abelian_summands);
  return id;
}

// ------------------------------------------------------------ labels

std::string canonical_label(const std::string& label) {
  // eps tuples of s_{8,1} and s_{8,2} are unordered
  static const std::regex tuple(R"((s_\{8,[12]\})\(([-0-9,]+)\))");
  std::string out;
  auto begin = std::sregex_iterator(label.begin(), label.end(), tuple);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out += label.substr(last, it->position() - last);
    std::vector<int> v;
    std::stringstream ss((*it)[2].str());
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoi(tok));
    std::sort(v.rbegin(), v.rend());
    out += (*it)[1].str() + "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    out += ")";
    last = it->position() + it->length();
  }
  out += label.substr(last);
  return out;
}

bool labels_match(const std::string& expected, const std::string& computed) {
  return canonical_label(expected) == canonical_label(computed);
}

// ------------------------------------------------------------ relations

std::string bracket_string(const AbstractLieAlgebra& alg, int i, int j) {
  std::string s;
  for (int k = 0; k < alg.dim; ++k) {
    const Expr& c = alg.c[i][j][k];
    if (c.is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")*" + alg.labels[k];
  }
  return s.empty() ? "0" : s;
}

std::vector<RelationOutcome> check_relations(const AbstractLieAlgebra& alg, const std::vector<Relation>& rels) {
  auto index = [&](const std::string& n) {
    for (int k = 0; k < alg.dim; ++k)
      if (alg.labels[k] == n) return k;
    throw std::invalid_argument("relation names unknown element " + n);
  };
  std::vector<RelationOutcome> out;
  for (const auto& rel : rels) {
    int i = index(rel.left), j = index(rel.right);
    std::vector<Expr> want(alg.dim);
    for (const auto& [c, n] : rel.rhs) want[index(n)] += c;
    bool ok = true;
    for (int k = 0; k < alg.dim && ok; ++k) ok = equal(want[k], alg.c[i][j][k]);
    out.push_back({rel, ok, bracket_string(alg, i, j)});
  }
  return out;
}

}  // namespace symschrod
