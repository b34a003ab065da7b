#include "symschrod/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

namespace symschrod {

namespace {

std::size_t hc(std::size_t s, std::size_t v) {
  return s ^ (v + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2));
}

std::size_t rat_hash(const Rational& q) {
  std::size_t h = mpz_get_ui(q.get_num_mpz_t()) * 1000003u + mpz_get_ui(q.get_den_mpz_t());
  return sgn(q) < 0 ? ~h : h;
}

bool reducible_kind(KernelKind k) {
  return k == KernelKind::Radical || k == KernelKind::Sin || k == KernelKind::Sinh;
}

struct KernelLess {
  bool operator()(const Kernel& a, const Kernel& b) const { return compare_kernels(a, b) < 0; }
};

}  // namespace

// ---------------------------------------------------------------- kernels

static Kernel make_kernel(KernelNode n) {
  std::size_t h = hc(static_cast<std::size_t>(n.kind) + 1, std::hash<std::string>{}(n.name));
  h = hc(h, static_cast<std::size_t>(n.index));
  h = hc(h, n.unit ? 7u : 3u);
  for (int p : n.partials) h = hc(h, static_cast<std::size_t>(p) + 11);
  for (const auto& a : n.args) h = hc(h, a.hash());
  n.hash = h;
  return std::make_shared<const KernelNode>(std::move(n));
}

static int compare_poly(const Poly& a, const Poly& b);

int compare_kernels(const Kernel& a, const Kernel& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case KernelKind::Imag:
    case KernelKind::Phi:
      return 0;
    case KernelKind::Var:
      return a->index == b->index ? 0 : (a->index < b->index ? -1 : 1);
    case KernelKind::Param: {
      int c = a->name.compare(b->name);
      return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    default:
      break;
  }
  if (a->kind == KernelKind::Formal) {
    int c = a->name.compare(b->name);
    if (c != 0) return c < 0 ? -1 : 1;
    if (a->partials != b->partials) return a->partials < b->partials ? -1 : 1;
    if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      int d = compare(a->args[i], b->args[i]);
      if (d != 0) return d;
    }
    return 0;
  }
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    int d = compare(a->args[i], b->args[i]);
    if (d != 0) return d;
  }
  return 0;
}

bool is_field_kernel(const Kernel& k) {
  switch (k->kind) {
    case KernelKind::Imag:
    case KernelKind::Param:
      return true;
    case KernelKind::Var:
    case KernelKind::Phi:
    case KernelKind::Formal:
      return false;
    default:
      for (const auto& a : k->args)
        if (!a.is_param_only()) return false;
      return true;
  }
}

int compare_monomials(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_kernels(a[i].first, b[i].first);
    if (c != 0) return c;
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

static int compare_poly(const Poly& a, const Poly& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_monomials(a[i].mono, b[i].mono);
    if (c != 0) return c;
    int d = cmp(a[i].coeff, b[i].coeff);
    if (d != 0) return d < 0 ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return 0;
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  int c = compare_poly(a.num(), b.num());
  if (c != 0) return c;
  const auto& da = a.den();
  const auto& db = b.den();
  if (da.size() != db.size()) return da.size() < db.size() ? -1 : 1;
  for (std::size_t i = 0; i < da.size(); ++i) {
    int d = compare_poly(da[i].first, db[i].first);
    if (d != 0) return d;
    if (da[i].second != db[i].second) return da[i].second < db[i].second ? -1 : 1;
  }
  return 0;
}

// ---------------------------------------------------------------- monomials

static Kernel exp_kernel(const Expr& arg) {
  KernelNode n;
  n.kind = KernelKind::Exp;
  n.args = {arg};
  return make_kernel(std::move(n));
}

// Sorts, merges, applies i^2 = -1, eps^2 = 1 and exp(a) exp(b) = exp(a+b).
static void canon_mono(Monomial& m, Rational& coeff) {
  if (m.empty()) return;
  std::sort(m.begin(), m.end(),
            [](const auto& x, const auto& y) { return compare_kernels(x.first, y.first) < 0; });
  Monomial out;
  out.reserve(m.size());
  int exp_count = 0;
  bool exp_dirty = false;
  for (auto& kv : m) {
    if (!out.empty() && compare_kernels(out.back().first, kv.first) == 0) {
      out.back().second += kv.second;
      exp_dirty = exp_dirty || kv.first->kind == KernelKind::Exp;
    } else {
      out.push_back(kv);
    }
  }
  Monomial res;
  res.reserve(out.size());
  Expr exp_arg;
  for (auto& kv : out) {
    const Kernel& k = kv.first;
    int e = kv.second;
    if (k->kind == KernelKind::Imag) {
      e = ((e % 4) + 4) % 4;
      if (e >= 2) {
        coeff = -coeff;
        e -= 2;
      }
    } else if (k->kind == KernelKind::Param && k->unit) {
      e = ((e % 2) + 2) % 2;
    } else if (k->kind == KernelKind::Exp) {
      if (e == 0) continue;
      ++exp_count;
      if (e != 1) exp_dirty = true;
      exp_arg = exp_arg + Expr(e) * k->args[0];
      continue;
    }
    if (e != 0) res.emplace_back(k, e);
  }
  if (exp_count > 1) exp_dirty = true;
  if (exp_count > 0) {
    if (!exp_dirty) {
      for (auto& kv : out)
        if (kv.first->kind == KernelKind::Exp && kv.second != 0) res.emplace_back(kv.first, 1);
    } else if (!exp_arg.is_zero()) {
      res.emplace_back(exp_kernel(exp_arg), 1);
    }
    std::sort(res.begin(), res.end(),
              [](const auto& x, const auto& y) { return compare_kernels(x.first, y.first) < 0; });
  }
  m = std::move(res);
}

static Monomial mono_concat(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.reserve(a.size() + b.size());
  m.insert(m.end(), a.begin(), a.end());
  m.insert(m.end(), b.begin(), b.end());
  return m;
}

// ---------------------------------------------------------------- polynomials

static void combine_terms(Poly& p) {
  std::sort(p.begin(), p.end(),
            [](const Term& a, const Term& b) { return compare_monomials(a.mono, b.mono) < 0; });
  Poly out;
  out.reserve(p.size());
  for (auto& t : p) {
    if (!out.empty() && compare_monomials(out.back().mono, t.mono) == 0) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return sgn(t.coeff) == 0; }),
            out.end());
  p = std::move(out);
}

static Poly rule_poly(const Kernel& k) {
  if (k->kind == KernelKind::Radical) return k->args[0].num();
  KernelNode n;
  n.kind = k->kind == KernelKind::Sin ? KernelKind::Cos : KernelKind::Cosh;
  n.args = k->args;
  Kernel partner = make_kernel(std::move(n));
  Poly p;
  if (k->kind == KernelKind::Sin) {
    p.push_back({{}, Rational(1)});
    p.push_back({{{partner, 2}}, Rational(-1)});
  } else {
    p.push_back({{{partner, 2}}, Rational(1)});
    p.push_back({{}, Rational(-1)});
  }
  return p;
}

static Poly reduce_nonneg(const Poly& p) {
  std::vector<Term> work(p.begin(), p.end());
  Poly out;
  while (!work.empty()) {
    Term tm = std::move(work.back());
    work.pop_back();
    int idx = -1;
    for (std::size_t j = 0; j < tm.mono.size(); ++j) {
      if (reducible_kind(tm.mono[j].first->kind) && tm.mono[j].second >= 2) {
        idx = static_cast<int>(j);
        break;
      }
    }
    if (idx < 0) {
      out.push_back(std::move(tm));
      continue;
    }
    Kernel k = tm.mono[idx].first;
    tm.mono[idx].second -= 2;
    if (tm.mono[idx].second == 0) tm.mono.erase(tm.mono.begin() + idx);
    for (const auto& rt : rule_poly(k)) {
      Term nt{mono_concat(tm.mono, rt.mono), tm.coeff * rt.coeff};
      canon_mono(nt.mono, nt.coeff);
      work.push_back(std::move(nt));
    }
  }
  combine_terms(out);
  return out;
}

// Clear negative powers of reducible kernels, apply the rewrite rules, restore.
// The reduced form decides zero; otherwise it is kept only when it is not
// longer than the input unless force is set.
static void normalize_poly(Poly& p, bool force = false) {
  combine_terms(p);
  if (p.empty()) return;
  std::map<Kernel, std::pair<int, int>, KernelLess> range;  // min, max (absent counts as 0)
  std::map<Kernel, std::size_t, KernelLess> seen;
  for (const auto& t : p)
    for (const auto& [k, e] : t.mono) {
      if (!reducible_kind(k->kind)) continue;
      auto it = range.find(k);
      if (it == range.end()) {
        range.emplace(k, std::make_pair(e, e));
      } else {
        it->second.first = std::min(it->second.first, e);
        it->second.second = std::max(it->second.second, e);
      }
      ++seen[k];
    }
  bool need = false;
  Monomial clear;
  for (auto& [k, mm] : range) {
    int lo = mm.first;
    if (seen[k] < p.size()) lo = std::min(lo, 0);
    int hi = std::max(mm.second, 0);
    if (hi - std::min(lo, 0) >= 2) need = true;
    if (lo < 0) clear.emplace_back(k, -lo);
  }
  if (!need) return;
  Poly q;
  q.reserve(p.size());
  for (const auto& t : p) {
    Term nt{mono_concat(t.mono, clear), t.coeff};
    canon_mono(nt.mono, nt.coeff);
    q.push_back(std::move(nt));
  }
  q = reduce_nonneg(q);
  if (!clear.empty()) {
    Monomial back = clear;
    for (auto& kv : back) kv.second = -kv.second;
    for (auto& t : q) {
      t.mono = mono_concat(t.mono, back);
      canon_mono(t.mono, t.coeff);
    }
    combine_terms(q);
  }
  if (force || q.empty() || q.size() <= p.size()) p = std::move(q);
}

static Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      Term t{mono_concat(x.mono, y.mono), x.coeff * y.coeff};
      canon_mono(t.mono, t.coeff);
      out.push_back(std::move(t));
    }
  normalize_poly(out);
  return out;
}

static Poly poly_one() { return Poly{Term{{}, Rational(1)}}; }

static Poly poly_pow(const Poly& a, int e) {
  Poly r = poly_one();
  for (int i = 0; i < e; ++i) r = poly_mul(r, a);
  return r;
}

static Poly poly_add(const Poly& a, const Poly& b) {
  Poly out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  normalize_poly(out);
  return out;
}

static Poly poly_scale(const Poly& a, const Term& m) {
  Poly out;
  out.reserve(a.size());
  for (const auto& x : a) {
    Term t{mono_concat(x.mono, m.mono), x.coeff * m.coeff};
    canon_mono(t.mono, t.coeff);
    out.push_back(std::move(t));
  }
  normalize_poly(out);
  return out;
}

static Term term_inverse(const Term& t) {
  Term r{t.mono, 1 / t.coeff};
  for (auto& kv : r.mono) kv.second = -kv.second;
  canon_mono(r.mono, r.coeff);
  return r;
}

// ---------------------------------------------------------------- Expr nodes

static std::size_t poly_hash(const Poly& p) {
  std::size_t h = 17;
  for (const auto& t : p) {
    h = hc(h, rat_hash(t.coeff));
    for (const auto& [k, e] : t.mono) h = hc(hc(h, k->hash), static_cast<std::size_t>(e + 1000));
  }
  return h;
}

static std::shared_ptr<const ExprNode> finalize(ExprNode n) {
  std::size_t h = poly_hash(n.num);
  for (const auto& [f, k] : n.den) h = hc(hc(h, poly_hash(f)), static_cast<std::size_t>(k));
  n.hash = h;
  return std::make_shared<const ExprNode>(std::move(n));
}

static const std::shared_ptr<const ExprNode>& zero_node() {
  static const std::shared_ptr<const ExprNode> z = finalize(ExprNode{});
  return z;
}

using DenList = std::vector<std::pair<Poly, int>>;

// Tries num == q * f with q a single term.
static bool divide_by_factor(Poly& num, const Poly& f) {
  if (num.size() != f.size() || f.empty()) return false;
  Term f0inv = term_inverse(f[0]);
  for (const auto& cand : num) {
    Term q{mono_concat(cand.mono, f0inv.mono), cand.coeff * f0inv.coeff};
    canon_mono(q.mono, q.coeff);
    Poly prod = poly_scale(f, q);
    if (compare_poly(prod, num) == 0) {
      num = Poly{q};
      return true;
    }
  }
  return false;
}

static Expr make_expr(Poly num, DenList den) {
  normalize_poly(num);
  if (num.empty()) return Expr();
  std::sort(den.begin(), den.end(),
            [](const auto& a, const auto& b) { return compare_poly(a.first, b.first) < 0; });
  DenList merged;
  for (auto& d : den) {
    if (d.second == 0) continue;
    if (!merged.empty() && compare_poly(merged.back().first, d.first) == 0) {
      merged.back().second += d.second;
    } else {
      merged.push_back(std::move(d));
    }
  }
  for (auto& d : merged) {
    while (d.second > 0 && divide_by_factor(num, d.first)) --d.second;
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const auto& d) { return d.second == 0; }),
               merged.end());
  ExprNode n;
  n.num = std::move(num);
  n.den = std::move(merged);
  return Expr(finalize(std::move(n)));
}

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(int v) : Expr(Rational(v)) {}

Expr::Expr(const Rational& v) {
  if (sgn(v) == 0) {
    node_ = zero_node();
    return;
  }
  ExprNode n;
  n.num.push_back({{}, v});
  node_ = finalize(std::move(n));
}

Expr Expr::from_kernel(const Kernel& k, int power) {
  Term t{{{k, power}}, Rational(1)};
  canon_mono(t.mono, t.coeff);
  return make_expr(Poly{t}, {});
}

Expr Expr::from_poly(Poly num) { return make_expr(std::move(num), {}); }

bool Expr::is_rational() const {
  return num().empty() || (den().empty() && num().size() == 1 && num()[0].mono.empty());
}

Rational Expr::as_rational() const {
  if (num().empty()) return Rational(0);
  if (!is_rational()) throw std::logic_error("expression is not a rational constant: " + str());
  return num()[0].coeff;
}

static bool poly_param_only(const Poly& p) {
  for (const auto& t : p)
    for (const auto& kv : t.mono)
      if (!is_field_kernel(kv.first)) return false;
  return true;
}

bool Expr::is_param_only() const {
  if (!poly_param_only(num())) return false;
  for (const auto& d : den())
    if (!poly_param_only(d.first)) return false;
  return true;
}

static bool kernel_depends(const Kernel& k, int index) {
  switch (k->kind) {
    case KernelKind::Var:
      return k->index == index;
    case KernelKind::Phi:
      return index == 1 || index == 2;
    case KernelKind::Imag:
    case KernelKind::Param:
      return false;
    default:
      for (const auto& a : k->args)
        if (a.depends_on_var(index)) return true;
      return false;
  }
}

static bool poly_depends(const Poly& p, int index) {
  for (const auto& t : p)
    for (const auto& kv : t.mono)
      if (kernel_depends(kv.first, index)) return true;
  return false;
}

bool Expr::depends_on_var(int index) const {
  if (poly_depends(num(), index)) return true;
  for (const auto& d : den())
    if (poly_depends(d.first, index)) return true;
  return false;
}

static bool kernel_has_imag(const Kernel& k) {
  if (k->kind == KernelKind::Imag) return true;
  for (const auto& a : k->args)
    if (a.has_imag()) return true;
  return false;
}

bool Expr::has_imag() const {
  for (const auto& t : num())
    for (const auto& kv : t.mono)
      if (kernel_has_imag(kv.first)) return true;
  for (const auto& d : den())
    for (const auto& t : d.first)
      for (const auto& kv : t.mono)
        if (kernel_has_imag(kv.first)) return true;
  return false;
}

static DenList den_lcm(const DenList& a, const DenList& b) {
  DenList out = a;
  for (const auto& [f, k] : b) {
    bool found = false;
    for (auto& o : out)
      if (compare_poly(o.first, f) == 0) {
        o.second = std::max(o.second, k);
        found = true;
        break;
      }
    if (!found) out.emplace_back(f, k);
  }
  return out;
}

static Poly den_missing_product(const DenList& lcm, const DenList& have) {
  Poly r = poly_one();
  for (const auto& [f, k] : lcm) {
    int h = 0;
    for (const auto& o : have)
      if (compare_poly(o.first, f) == 0) h = o.second;
    if (k > h) r = poly_mul(r, poly_pow(f, k - h));
  }
  return r;
}

static bool den_equal(const DenList& a, const DenList& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].second != b[i].second || compare_poly(a[i].first, b[i].first) != 0) return false;
  return true;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (den_equal(a.den(), b.den())) return make_expr(poly_add(a.num(), b.num()), a.den());
  DenList l = den_lcm(a.den(), b.den());
  Poly na = poly_mul(a.num(), den_missing_product(l, a.den()));
  Poly nb = poly_mul(b.num(), den_missing_product(l, b.den()));
  return make_expr(poly_add(na, nb), l);
}

Expr operator-(const Expr& a) {
  if (a.is_zero()) return a;
  Poly n = a.num();
  for (auto& t : n) t.coeff = -t.coeff;
  ExprNode node;
  node.num = std::move(n);
  node.den = a.den();
  return Expr(finalize(std::move(node)));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  DenList d = a.den();
  d.insert(d.end(), b.den().begin(), b.den().end());
  return make_expr(poly_mul(a.num(), b.num()), std::move(d));
}

// Splits a normalized multi-term polynomial into content (single term) and a
// primitive factor with leading coefficient one.
static std::pair<Term, Poly> split_content(Poly p) {
  Term content{{}, Rational(1)};
  for (int iter = 0; iter < 4 && p.size() > 1; ++iter) {
    std::map<Kernel, std::pair<int, std::size_t>, KernelLess> mins;
    for (const auto& t : p)
      for (const auto& [k, e] : t.mono) {
        auto it = mins.find(k);
        if (it == mins.end()) {
          mins.emplace(k, std::make_pair(e, std::size_t{1}));
        } else {
          it->second.first = std::min(it->second.first, e);
          ++it->second.second;
        }
      }
    Monomial c;
    for (const auto& [k, v] : mins) {
      int lo = v.second < p.size() ? std::min(v.first, 0) : v.first;
      if (lo != 0) c.emplace_back(k, lo);
    }
    if (c.empty()) break;
    Term ct{c, Rational(1)};
    canon_mono(ct.mono, ct.coeff);
    p = poly_scale(p, term_inverse(ct));
    Term nc{mono_concat(content.mono, ct.mono), content.coeff * ct.coeff};
    canon_mono(nc.mono, nc.coeff);
    content = nc;
  }
  if (p.size() == 1) {
    Term nc{mono_concat(content.mono, p[0].mono), content.coeff * p[0].coeff};
    canon_mono(nc.mono, nc.coeff);
    return {nc, {}};
  }
  Rational lc = p[0].coeff;
  for (auto& t : p) t.coeff /= lc;
  content.coeff *= lc;
  return {content, p};
}

Expr Expr::inverse() const {
  if (is_zero()) throw DivisionByZero("division by zero");
  Poly n = poly_one();
  for (const auto& [f, k] : den()) n = poly_mul(n, poly_pow(f, k));
  if (num().size() == 1) return make_expr(poly_scale(n, term_inverse(num()[0])), {});
  auto [content, prim] = split_content(num());
  n = poly_scale(n, term_inverse(content));
  if (prim.empty()) return make_expr(n, {});
  return make_expr(n, {{prim, 1}});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DivisionByZero("division by zero");
  if (a.is_zero()) return a;
  return a * b.inverse();
}

Expr Expr::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Expr r(1), base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

bool equal(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

bool is_identically_zero(const Expr& e) { return e.is_zero(); }

// ---------------------------------------------------------------- atoms

std::string var_name(int index) { return index == 0 ? "t" : "x" + std::to_string(index); }

Expr var(int index) {
  KernelNode n;
  n.kind = KernelKind::Var;
  n.index = index;
  n.name = var_name(index);
  return Expr::from_kernel(make_kernel(std::move(n)));
}

Expr param(const std::string& name) {
  KernelNode n;
  n.kind = KernelKind::Param;
  n.name = name;
  return Expr::from_kernel(make_kernel(std::move(n)));
}

Expr unit_param(const std::string& name) {
  KernelNode n;
  n.kind = KernelKind::Param;
  n.name = name;
  n.unit = true;
  return Expr::from_kernel(make_kernel(std::move(n)));
}

Expr imag() {
  KernelNode n;
  n.kind = KernelKind::Imag;
  n.name = "i";
  return Expr::from_kernel(make_kernel(std::move(n)));
}

Expr phi() {
  KernelNode n;
  n.kind = KernelKind::Phi;
  n.name = "phi";
  return Expr::from_kernel(make_kernel(std::move(n)));
}

Expr r_radius(int dim) {
  Expr s;
  for (int a = 1; a <= dim; ++a) s += var(a) * var(a);
  return sqrt(s);
}

Expr rt_radius() { return sqrt(var(1) * var(1) + var(2) * var(2)); }

Expr formal(const std::string& name, std::vector<Expr> args, std::vector<int> partials) {
  std::sort(partials.begin(), partials.end());
  KernelNode n;
  n.kind = KernelKind::Formal;
  n.name = name;
  n.args = std::move(args);
  n.partials = std::move(partials);
  return Expr::from_kernel(make_kernel(std::move(n)));
}

static Kernel fn_kernel(KernelKind kind, const Expr& arg) {
  KernelNode n;
  n.kind = kind;
  n.args = {arg};
  return make_kernel(std::move(n));
}

// ---------------------------------------------------------------- functions

static bool positive_kind(KernelKind k) {
  return k == KernelKind::Radical || k == KernelKind::Exp || k == KernelKind::Cosh;
}

static Expr sqrt_term(const Term& t) {
  Rational c = t.coeff;
  bool neg = sgn(c) < 0;
  if (neg) c = -c;
  mpz_class n = c.get_num(), d = c.get_den();
  mpz_class sn = ::sqrt(n), sd = ::sqrt(d);
  Expr out(1);
  Rational inside(1);
  if (sn * sn == n && sd * sd == d) {
    out = Expr(Rational(sn, sd));
  } else {
    inside = c;
  }
  Monomial in;
  for (const auto& [k, e] : t.mono) {
    if (k->kind == KernelKind::Exp) {
      out *= exp(k->args[0] * Expr(Rational(e, 2)));
    } else if (e % 2 == 0 && positive_kind(k->kind)) {
      out *= Expr::from_kernel(k, e / 2);
    } else {
      in.emplace_back(k, e);
    }
  }
  if (neg) out *= imag();
  if (in.empty() && inside == 1) return out;
  Term it{in, inside};
  canon_mono(it.mono, it.coeff);
  return out * Expr::from_kernel(fn_kernel(KernelKind::Radical, Expr::from_poly(Poly{it})));
}

Expr sqrt(const Expr& e) {
  if (e.is_zero()) return e;
  Poly n = e.num();
  Expr out_den(1);
  for (const auto& [f, k] : e.den()) {
    Expr fe = Expr::from_poly(f);
    if (k % 2 == 0) {
      out_den *= fe.pow(k / 2);
    } else {
      n = poly_mul(n, f);
      out_den *= fe.pow((k + 1) / 2);
    }
  }
  Expr core;
  if (n.size() == 1) {
    core = sqrt_term(n[0]);
  } else {
    auto [content, prim] = split_content(n);
    if (prim.empty()) {
      core = sqrt_term(content);
    } else {
      if (sgn(content.coeff) < 0) {
        content.coeff = -content.coeff;
        for (auto& t : prim) t.coeff = -t.coeff;
      }
      core = sqrt_term(content) * Expr::from_kernel(fn_kernel(KernelKind::Radical, Expr::from_poly(prim)));
    }
  }
  return core / out_den;
}

Expr exp(const Expr& u) {
  if (u.is_zero()) return Expr(1);
  Expr rest = u;
  Expr pre(1);
  if (u.den().empty()) {
    Poly keep;
    for (const auto& t : u.num()) {
      if (t.mono.size() == 1 && t.mono[0].first->kind == KernelKind::Log && t.mono[0].second == 1 &&
          t.coeff.get_den() == 1 && abs(t.coeff) <= 64) {
        pre *= t.mono[0].first->args[0].pow(static_cast<int>(t.coeff.get_num().get_si()));
      } else {
        keep.push_back(t);
      }
    }
    rest = Expr::from_poly(keep);
  }
  if (rest.is_zero()) return pre;
  return pre * Expr::from_kernel(exp_kernel(rest));
}

static Expr log_term(const Term& t) {
  Expr out;
  if (t.coeff != 1) out += Expr::from_kernel(fn_kernel(KernelKind::Log, Expr(t.coeff)));
  for (const auto& [k, e] : t.mono) {
    if (k->kind == KernelKind::Exp) {
      out += Expr(e) * k->args[0];
    } else {
      out += Expr(e) * Expr::from_kernel(fn_kernel(KernelKind::Log, Expr::from_kernel(k)));
    }
  }
  return out;
}

static Expr log_poly(const Poly& p) {
  if (p.size() == 1) return log_term(p[0]);
  auto [content, prim] = split_content(p);
  Expr out = log_term(content);
  if (!prim.empty()) out += Expr::from_kernel(fn_kernel(KernelKind::Log, Expr::from_poly(prim)));
  return out;
}

Expr log(const Expr& u) {
  if (u.is_zero()) throw DivisionByZero("log of zero");
  Expr out = log_poly(u.num());
  for (const auto& [f, k] : u.den()) out -= Expr(k) * log_poly(f);
  return out;
}

Expr power(const Expr& base, const Expr& exponent) {
  if (exponent.is_rational()) {
    Rational q = exponent.as_rational();
    if (q.get_den() == 1) return base.pow(static_cast<int>(q.get_num().get_si()));
    if (q.get_den() == 2) return sqrt(base).pow(static_cast<int>(q.get_num().get_si()));
  }
  return exp(exponent * log(base));
}

static bool odd_kind(KernelKind k) {
  return k == KernelKind::Sin || k == KernelKind::Sinh || k == KernelKind::Arctan;
}

static Expr trig(KernelKind kind, const Expr& u) {
  if (u.is_zero()) return (kind == KernelKind::Cos || kind == KernelKind::Cosh) ? Expr(1) : Expr();
  if (!u.is_single_term()) return Expr::from_kernel(fn_kernel(kind, u));
  const Term& t = u.num()[0];
  Rational c = t.coeff;
  Expr sign(1);
  if (sgn(c) < 0) {
    c = -c;
    if (odd_kind(kind)) sign = Expr(-1);
  }
  Expr base = Expr::from_poly(Poly{Term{t.mono, Rational(1)}});
  bool expand = kind != KernelKind::Arctan && !t.mono.empty() && c.get_den() == 1 && c > 1 && c <= 64;
  if (!expand) return sign * Expr::from_kernel(fn_kernel(kind, Expr(c) * base));
  bool hyper = kind == KernelKind::Sinh || kind == KernelKind::Cosh;
  Expr c1 = Expr::from_kernel(fn_kernel(hyper ? KernelKind::Cosh : KernelKind::Cos, base));
  Expr s1 = Expr::from_kernel(fn_kernel(hyper ? KernelKind::Sinh : KernelKind::Sin, base));
  bool want_cos = kind == KernelKind::Cos || kind == KernelKind::Cosh;
  Expr prev = want_cos ? Expr(1) : Expr(), cur = want_cos ? c1 : s1;
  int k = static_cast<int>(c.get_num().get_si());
  for (int j = 2; j <= k; ++j) {
    Expr next = Expr(2) * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return sign * cur;
}

Expr sin(const Expr& e) { return trig(KernelKind::Sin, e); }
Expr cos(const Expr& e) { return trig(KernelKind::Cos, e); }
Expr sinh(const Expr& e) { return trig(KernelKind::Sinh, e); }
Expr cosh(const Expr& e) { return trig(KernelKind::Cosh, e); }
Expr arctan(const Expr& e) { return trig(KernelKind::Arctan, e); }

// ---------------------------------------------------------------- calculus

static Expr kernel_derivative(const Kernel& k, int v) {
  if (!kernel_depends(k, v)) return Expr();
  const Expr* arg = k->args.empty() ? nullptr : &k->args[0];
  switch (k->kind) {
    case KernelKind::Var:
      return Expr(1);
    case KernelKind::Phi: {
      Expr rt2inv = rt_radius().pow(-2);
      return v == 1 ? -var(2) * rt2inv : var(1) * rt2inv;
    }
    case KernelKind::Radical:
      return differentiate(*arg, v) * Expr(Rational(1, 2)) * Expr::from_kernel(k, -1);
    case KernelKind::Exp:
      return Expr::from_kernel(k) * differentiate(*arg, v);
    case KernelKind::Log:
      return differentiate(*arg, v) / *arg;
    case KernelKind::Sin:
      return cos(*arg) * differentiate(*arg, v);
    case KernelKind::Cos:
      return -sin(*arg) * differentiate(*arg, v);
    case KernelKind::Sinh:
      return cosh(*arg) * differentiate(*arg, v);
    case KernelKind::Cosh:
      return sinh(*arg) * differentiate(*arg, v);
    case KernelKind::Arctan:
      return differentiate(*arg, v) / (Expr(1) + *arg * *arg);
    case KernelKind::Formal: {
      Expr out;
      for (std::size_t i = 0; i < k->args.size(); ++i) {
        Expr da = differentiate(k->args[i], v);
        if (da.is_zero()) continue;
        std::vector<int> p = k->partials;
        p.push_back(static_cast<int>(i));
        out += da * formal(k->name, k->args, p);
      }
      return out;
    }
    default:
      return Expr();
  }
}

Expr differentiate(const Expr& e, int v) {
  if (e.is_zero() || !e.depends_on_var(v)) return Expr();
  std::map<Kernel, Expr, KernelLess> memo;
  auto dk = [&](const Kernel& k) -> const Expr& {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    return memo.emplace(k, kernel_derivative(k, v)).first->second;
  };
  auto dpoly = [&](const Poly& p) {
    Poly acc;
    std::vector<Expr> extra;
    for (const auto& t : p) {
      for (std::size_t j = 0; j < t.mono.size(); ++j) {
        const Kernel& k = t.mono[j].first;
        if (!kernel_depends(k, v)) continue;
        const Expr& d = dk(k);
        if (d.is_zero()) continue;
        Term base{t.mono, t.coeff * t.mono[j].second};
        base.mono[j].second -= 1;
        canon_mono(base.mono, base.coeff);
        if (d.den().empty()) {
          for (const auto& dt : d.num()) {
            Term nt{mono_concat(base.mono, dt.mono), base.coeff * dt.coeff};
            canon_mono(nt.mono, nt.coeff);
            acc.push_back(std::move(nt));
          }
        } else {
          extra.push_back(make_expr(Poly{base}, {}) * d);
        }
      }
    }
    Expr r = make_expr(std::move(acc), {});
    for (const auto& x : extra) r += x;
    return r;
  };
  Expr dn = dpoly(e.num());
  if (e.den().empty()) return dn;
  Expr inv_den = make_expr(poly_one(), e.den());
  Expr s;
  for (const auto& [f, k] : e.den()) {
    Expr df = dpoly(f);
    if (!df.is_zero()) s += Expr(k) * df / Expr::from_poly(f);
  }
  return dn * inv_den - e * s;
}

// ---------------------------------------------------------------- substitution

namespace {

struct Substituter {
  const Bindings& b;
  std::map<Kernel, std::optional<Expr>, KernelLess> memo;  // nullopt: unchanged

  std::optional<Expr> kernel(const Kernel& k) {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    std::optional<Expr> r = compute(k);
    memo.emplace(k, r);
    return r;
  }

  std::optional<Expr> compute(const Kernel& k) {
    switch (k->kind) {
      case KernelKind::Imag:
        return std::nullopt;
      case KernelKind::Var:
      case KernelKind::Param: {
        auto it = b.find(k->name);
        if (it == b.end()) return std::nullopt;
        return it->second;
      }
      case KernelKind::Phi: {
        auto x1 = kernel(var(1).num()[0].mono[0].first);
        auto x2 = kernel(var(2).num()[0].mono[0].first);
        if (!x1 && !x2) return std::nullopt;
        Expr u = x1 ? *x1 : var(1), w = x2 ? *x2 : var(2);
        if (!u.is_zero() && (u * var(2) - w * var(1)).is_zero()) {
          Expr lam = u / var(1);
          if (lam.is_single_term() && sgn(lam.num()[0].coeff) > 0) {
            bool pos = true;
            for (const auto& kv : lam.num()[0].mono) pos = pos && positive_kind(kv.first->kind);
            if (pos) return std::nullopt;
          }
        }
        if (u.is_zero()) throw DivisionByZero("phi undefined after substitution");
        return arctan(w / u);
      }
      default:
        break;
    }
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : k->args) {
      args.push_back(expr(a));
      changed = changed || !same(args.back(), a);
    }
    if (!changed) return std::nullopt;
    switch (k->kind) {
      case KernelKind::Radical: return sqrt(args[0]);
      case KernelKind::Exp: return exp(args[0]);
      case KernelKind::Log: return log(args[0]);
      case KernelKind::Sin: return sin(args[0]);
      case KernelKind::Cos: return cos(args[0]);
      case KernelKind::Sinh: return sinh(args[0]);
      case KernelKind::Cosh: return cosh(args[0]);
      case KernelKind::Arctan: return arctan(args[0]);
      case KernelKind::Formal: return formal(k->name, args, k->partials);
      default: return std::nullopt;
    }
  }

  Expr poly(const Poly& p) {
    Poly keep;
    Expr out;
    for (const auto& t : p) {
      bool changed = false;
      Expr tv(t.coeff);
      Monomial rest;
      for (const auto& [k, e] : t.mono) {
        auto s = kernel(k);
        if (s) {
          changed = true;
          tv *= s->pow(e);
        } else {
          rest.emplace_back(k, e);
        }
      }
      if (!changed) {
        keep.push_back(t);
      } else {
        if (!rest.empty()) tv *= make_expr(Poly{Term{rest, Rational(1)}}, {});
        out += tv;
      }
    }
    return out + make_expr(std::move(keep), {});
  }

  Expr expr(const Expr& e) {
    Expr out = poly(e.num());
    for (const auto& [f, k] : e.den()) {
      Expr fe = poly(f);
      if (fe.is_zero()) throw DivisionByZero("denominator vanishes after substitution");
      out *= fe.pow(-k);
    }
    return out;
  }
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& b) {
  if (b.empty() || e.is_zero()) return e;
  Substituter s{b, {}};
  return s.expr(e);
}

// ---------------------------------------------------------------- numerics

namespace {

using C = std::complex<double>;

struct Evaluator {
  const NumericPoint& p;
  std::map<Kernel, C, KernelLess> memo;

  double lookup(const std::string& name) const {
    auto it = p.find(name);
    if (it == p.end()) throw std::invalid_argument("no numeric value for '" + name + "'");
    return it->second;
  }

  C kernel(const Kernel& k) {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    C v = compute(k);
    memo.emplace(k, v);
    return v;
  }

  C compute(const Kernel& k) {
    switch (k->kind) {
      case KernelKind::Imag: return C(0, 1);
      case KernelKind::Var:
      case KernelKind::Param: return C(lookup(k->name), 0);
      case KernelKind::Phi: return C(std::atan2(lookup("x2"), lookup("x1")), 0);
      case KernelKind::Radical: return std::sqrt(expr(k->args[0]));
      case KernelKind::Exp: return std::exp(expr(k->args[0]));
      case KernelKind::Log: return std::log(expr(k->args[0]));
      case KernelKind::Sin: return std::sin(expr(k->args[0]));
      case KernelKind::Cos: return std::cos(expr(k->args[0]));
      case KernelKind::Sinh: return std::sinh(expr(k->args[0]));
      case KernelKind::Cosh: return std::cosh(expr(k->args[0]));
      case KernelKind::Arctan: return std::atan(expr(k->args[0]));
      case KernelKind::Formal: throw std::invalid_argument("cannot evaluate formal function " + k->name);
    }
    return C();
  }

  C poly(const Poly& q) {
    C s = 0;
    for (const auto& t : q) {
      C v(t.coeff.get_d(), 0);
      for (const auto& [k, e] : t.mono) v *= std::pow(kernel(k), e);
      s += v;
    }
    return s;
  }

  C expr(const Expr& e) {
    C v = poly(e.num());
    for (const auto& [f, k] : e.den()) v /= std::pow(poly(f), k);
    return v;
  }
};

}  // namespace

std::complex<double> evaluate_complex(const Expr& e, const NumericPoint& p) {
  Evaluator ev{p, {}};
  return ev.expr(e);
}

double evaluate_numeric(const Expr& e, const NumericPoint& p) {
  C v = evaluate_complex(e, p);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real())))
    throw std::domain_error("expression is not real at the given point");
  return v.real();
}

// ---------------------------------------------------------------- printing

static std::string poly_str(const Poly& p);

static std::string kernel_str(const Kernel& k) {
  switch (k->kind) {
    case KernelKind::Imag:
    case KernelKind::Param:
    case KernelKind::Var:
    case KernelKind::Phi:
      return k->name;
    case KernelKind::Radical: {
      static const Poly r3 = (var(1) * var(1) + var(2) * var(2) + var(3) * var(3)).num();
      static const Poly r2 = (var(1) * var(1) + var(2) * var(2)).num();
      const Poly& rad = k->args[0].num();
      if (k->args[0].den().empty() && compare_poly(rad, r3) == 0) return "r";
      if (k->args[0].den().empty() && compare_poly(rad, r2) == 0) return "rt";
      return "sqrt(" + k->args[0].str() + ")";
    }
    case KernelKind::Formal: {
      std::string s = k->name;
      if (!k->partials.empty()) {
        s += "_{";
        for (std::size_t i = 0; i < k->partials.size(); ++i)
          s += (i ? "," : "") + std::to_string(k->partials[i] + 1);
        s += "}";
      }
      s += "(";
      for (std::size_t i = 0; i < k->args.size(); ++i) s += (i ? "," : "") + k->args[i].str();
      return s + ")";
    }
    default:
      break;
  }
  static const char* names[] = {"", "", "", "", "", "exp", "log", "sin", "cos", "sinh", "cosh", "arctan", ""};
  return std::string(names[static_cast<int>(k->kind)]) + "(" + k->args[0].str() + ")";
}

static std::string term_str(const Term& t) {
  std::string s;
  Rational c = abs(t.coeff);
  bool first = true;
  if (c != 1 || t.mono.empty()) {
    s = c.get_str();
    first = false;
  }
  for (const auto& [k, e] : t.mono) {
    if (!first) s += "*";
    first = false;
    s += kernel_str(k);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

static std::string poly_str(const Poly& p) {
  if (p.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool neg = sgn(p[i].coeff) < 0;
    if (i == 0) {
      s += neg ? "-" : "";
    } else {
      s += neg ? " - " : " + ";
    }
    s += term_str(p[i]);
  }
  return s;
}

std::string Expr::str() const {
  if (den().empty()) return poly_str(num());
  std::string s = "(" + poly_str(num()) + ")/(";
  for (std::size_t i = 0; i < den().size(); ++i) {
    if (i) s += "*";
    s += "(" + poly_str(den()[i].first) + ")";
    if (den()[i].second != 1) s += "^" + std::to_string(den()[i].second);
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

// ---------------------------------------------------------------- queries

static void collect_params_poly(const Poly& p, std::vector<std::string>& out);

static void collect_params_kernel(const Kernel& k, std::vector<std::string>& out) {
  if (k->kind == KernelKind::Param) {
    if (std::find(out.begin(), out.end(), k->name) == out.end()) out.push_back(k->name);
    return;
  }
  for (const auto& a : k->args) collect_params(a, out);
}

static void collect_params_poly(const Poly& p, std::vector<std::string>& out) {
  for (const auto& t : p)
    for (const auto& kv : t.mono) collect_params_kernel(kv.first, out);
}

void collect_params(const Expr& e, std::vector<std::string>& out) {
  collect_params_poly(e.num(), out);
  for (const auto& d : e.den()) collect_params_poly(d.first, out);
}

std::vector<Expr> common_numerators(const std::vector<Expr>& es) {
  DenList l;
  for (const auto& e : es) l = den_lcm(l, e.den());
  std::vector<Expr> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(make_expr(poly_mul(e.num(), den_missing_product(l, e.den())), {}));
  return out;
}

std::vector<CoefficientMap> split_family(const std::vector<Expr>& es) {
  std::vector<Expr> nums = common_numerators(es);
  std::map<Kernel, int, KernelLess> lo;
  for (const auto& n : nums)
    for (const auto& t : n.num())
      for (const auto& [k, e] : t.mono)
        if (!is_field_kernel(k) && e < 0) {
          auto it = lo.find(k);
          if (it == lo.end()) {
            lo.emplace(k, e);
          } else {
            it->second = std::min(it->second, e);
          }
        }
  Monomial clear;
  for (const auto& [k, e] : lo) clear.emplace_back(k, -e);
  Term ct{clear, Rational(1)};
  std::vector<CoefficientMap> out;
  out.reserve(nums.size());
  for (const auto& n : nums) {
    Poly p = clear.empty() ? n.num() : poly_scale(n.num(), ct);
    normalize_poly(p, true);
    CoefficientMap m;
    for (const auto& t : p) {
      Monomial field, fn;
      for (const auto& kv : t.mono) (is_field_kernel(kv.first) ? field : fn).push_back(kv);
      Expr c = make_expr(Poly{Term{field, t.coeff}}, {});
      auto it = m.find(fn);
      if (it == m.end()) {
        m.emplace(fn, c);
      } else {
        it->second += c;
      }
    }
    for (auto it = m.begin(); it != m.end();) it = it->second.is_zero() ? m.erase(it) : std::next(it);
    out.push_back(std::move(m));
  }
  return out;
}

Poly reduced_numerator(const Expr& e) {
  Poly p = e.num();
  normalize_poly(p, true);
  return p;
}

}  // namespace symschrod
