#include "symschrod/linalg.hpp"

#include <set>
#include <stdexcept>

namespace symschrod {

static std::size_t pivot_cost(const Expr& e) {
  if (e.is_rational()) return 0;
  std::size_t c = e.num().size();
  for (const auto& d : e.den()) c += d.first.size();
  return c;
}

std::vector<int> rref_in_place(ExprMatrix& m, int pivot_cols) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return pivots;
  const int ncols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < pivot_cols && r < rows; ++c) {
    int best = -1;
    std::size_t best_cost = 0;
    for (int i = r; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      std::size_t cost = pivot_cost(m[i][c]);
      if (best < 0 || cost < best_cost) {
        best = i;
        best_cost = cost;
        if (cost == 0) break;
      }
    }
    if (best < 0) continue;
    std::swap(m[r], m[best]);
    Expr inv = m[r][c].inverse();
    for (int j = c; j < ncols; ++j)
      if (!m[r][j].is_zero()) m[r][j] = m[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Expr f = m[i][c];
      for (int j = c; j < ncols; ++j)
        if (!m[r][j].is_zero()) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

ExprMatrix nullspace(const ExprMatrix& m, int cols) {
  ExprMatrix a = m;
  std::vector<int> piv = rref_in_place(a, cols);
  std::set<int> pset(piv.begin(), piv.end());
  ExprMatrix basis;
  for (int f = 0; f < cols; ++f) {
    if (pset.count(f)) continue;
    std::vector<Expr> v(cols);
    v[f] = Expr(1);
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  rref_in_place(basis, cols);
  return basis;
}

ExprMatrix linear_rows(const std::vector<std::vector<Expr>>& columns) {
  ExprMatrix rows;
  if (columns.empty()) return rows;
  const std::size_t slots = columns[0].size();
  const std::size_t n = columns.size();
  for (std::size_t s = 0; s < slots; ++s) {
    std::vector<Expr> family(n);
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      family[j] = columns[j][s];
      any = any || !family[j].is_zero();
    }
    if (!any) continue;
    std::vector<CoefficientMap> maps = split_family(family);
    std::set<Monomial, MonomialLess> keys;
    for (const auto& mp : maps)
      for (const auto& kv : mp) keys.insert(kv.first);
    for (const auto& k : keys) {
      std::vector<Expr> row(n);
      for (std::size_t j = 0; j < n; ++j) {
        auto it = maps[j].find(k);
        if (it != maps[j].end()) row[j] = it->second;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

static std::vector<MultiIndex> union_indices(const std::vector<const DiffOp*>& ops) {
  std::set<MultiIndex> s;
  for (const auto* op : ops)
    for (const auto& kv : op->terms()) s.insert(kv.first);
  return {s.begin(), s.end()};
}

std::vector<Expr> diffop_components(const DiffOp& op) {
  std::vector<Expr> out;
  for (const auto& kv : op.terms()) out.push_back(kv.second);
  return out;
}

static std::vector<std::vector<Expr>> components_on(const std::vector<const DiffOp*>& ops,
                                                    const std::vector<MultiIndex>& idx) {
  std::vector<std::vector<Expr>> cols;
  for (const auto* op : ops) {
    std::vector<Expr> c;
    c.reserve(idx.size());
    for (const auto& m : idx) c.push_back(op->coefficient(m));
    cols.push_back(std::move(c));
  }
  return cols;
}

std::vector<std::optional<std::vector<Expr>>> span_coordinates(const std::vector<DiffOp>& basis,
                                                               const std::vector<DiffOp>& targets) {
  std::vector<const DiffOp*> all;
  for (const auto& b : basis) all.push_back(&b);
  for (const auto& t : targets) all.push_back(&t);
  auto idx = union_indices(all);
  ExprMatrix rows = linear_rows(components_on(all, idx));
  const int d = static_cast<int>(basis.size());
  std::vector<int> piv = rref_in_place(rows, d);
  std::vector<std::optional<std::vector<Expr>>> out;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const int col = d + static_cast<int>(t);
    bool ok = true;
    for (std::size_t i = piv.size(); i < rows.size() && ok; ++i) ok = rows[i][col].is_zero();
    if (!ok) {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::vector<Expr> coords(d);
    for (std::size_t i = 0; i < piv.size(); ++i) coords[piv[i]] = rows[i][col];
    out.emplace_back(std::move(coords));
  }
  return out;
}

int operator_rank(const std::vector<DiffOp>& ops) {
  std::vector<const DiffOp*> all;
  for (const auto& o : ops) all.push_back(&o);
  auto idx = union_indices(all);
  ExprMatrix rows = linear_rows(components_on(all, idx));
  return static_cast<int>(rref_in_place(rows, static_cast<int>(ops.size())).size());
}

ExprMatrix inverse_matrix(const ExprMatrix& m) {
  const int n = static_cast<int>(m.size());
  ExprMatrix aug(n, std::vector<Expr>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = Expr(1);
  }
  if (static_cast<int>(rref_in_place(aug, n).size()) != n) throw std::invalid_argument("matrix is singular");
  ExprMatrix inv(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// ---------------------------------------------------------------- rationals

std::vector<int> q_rref_in_place(QMatrix& m, int pivot_cols) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return pivots;
  const int ncols = static_cast<int>(m[0].size());
  if (pivot_cols < 0) pivot_cols = ncols;
  int r = 0;
  for (int c = 0; c < pivot_cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m[i][c]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    Rational inv = 1 / m[r][c];
    for (int j = c; j < ncols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (int j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int q_rank(QMatrix m) { return static_cast<int>(q_rref_in_place(m).size()); }

QMatrix q_nullspace(const QMatrix& m, int cols) {
  QMatrix a = m;
  std::vector<int> piv = q_rref_in_place(a, cols);
  std::set<int> pset(piv.begin(), piv.end());
  QMatrix basis;
  for (int f = 0; f < cols; ++f) {
    if (pset.count(f)) continue;
    QVector v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  q_rref_in_place(basis, cols);
  return basis;
}

QMatrix q_row_basis(QMatrix rows, int cols) {
  auto piv = q_rref_in_place(rows, cols);
  rows.resize(piv.size());
  return rows;
}

QMatrix q_transpose(const QMatrix& m, int cols) {
  QMatrix t(cols, QVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int j = 0; j < cols; ++j) t[j][i] = m[i][j];
  return t;
}

}  // namespace symschrod
