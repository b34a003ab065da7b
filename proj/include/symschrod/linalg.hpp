#pragma once

#include <optional>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/expr.hpp"

namespace symschrod {

// Matrices over the field of parameter expressions; zero tests go through
// the normal form.
using ExprMatrix = std::vector<std::vector<Expr>>;

// Reduced row-echelon form restricted to the first pivot_cols columns (the
// remaining columns are carried along). Returns pivot columns.
std::vector<int> rref_in_place(ExprMatrix& m, int pivot_cols);

// Basis of {c : M c = 0} as rows in reduced row-echelon form.
ExprMatrix nullspace(const ExprMatrix& m, int cols);
// Throws std::invalid_argument when m is singular.
ExprMatrix inverse_matrix(const ExprMatrix& m);

// Each element of `columns` is one vector given as a list of expressions
// (its components); components are split by function monomial so that the
// returned rows are linear equations over the parameter field.
ExprMatrix linear_rows(const std::vector<std::vector<Expr>>& columns);

// Components of a differential operator in a fixed slot order.
std::vector<Expr> diffop_components(const DiffOp& op);

// Coordinates of each target in the span of basis, or nullopt if outside.
std::vector<std::optional<std::vector<Expr>>> span_coordinates(const std::vector<DiffOp>& basis,
                                                               const std::vector<DiffOp>& targets);

// Rank of a family of operators over the parameter field.
int operator_rank(const std::vector<DiffOp>& ops);

// Exact rational linear algebra.
using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

std::vector<int> q_rref_in_place(QMatrix& m, int pivot_cols = -1);
int q_rank(QMatrix m);
QMatrix q_nullspace(const QMatrix& m, int cols);
// Row basis (RREF) of the span of the given rows.
QMatrix q_row_basis(QMatrix rows, int cols);
QMatrix q_transpose(const QMatrix& m, int cols);

}  // namespace symschrod
