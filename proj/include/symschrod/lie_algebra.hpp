#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/expr.hpp"
#include "symschrod/linalg.hpp"

namespace symschrod {

struct AbstractLieAlgebra {
  int dim = 0;
  std::vector<std::string> labels;
  // c[i][j][k]: coefficient of e_k in [e_i, e_j]
  std::vector<std::vector<std::vector<Expr>>> c;

  Expr bracket_coefficient(int i, int j, int k) const { return c[i][j][k]; }
  // Multiplies every constant by i; turns the anti-Hermitian convention
  // [X, Y] = i c Z into real constants.
  AbstractLieAlgebra real_form() const;
};

class NonClosure : public std::runtime_error {
 public:
  NonClosure(std::string a, std::string b, std::string residual)
      : std::runtime_error("[" + a + ", " + b + "] leaves the span: " + residual),
        left(std::move(a)),
        right(std::move(b)),
        residual(std::move(residual)) {}
  std::string left, right, residual;
};

AbstractLieAlgebra structure_constants(const std::vector<DiffOp>& ops, const std::vector<std::string>& labels);
AbstractLieAlgebra structure_constants(const std::vector<Generator>& gens);

// Identically in parameters.
bool satisfies_jacobi(const AbstractLieAlgebra& alg);

// Change of basis e'_i = sum_j m[i][j] e_j (m invertible).
AbstractLieAlgebra change_basis(const AbstractLieAlgebra& alg, const std::vector<std::vector<Expr>>& m);

// A quotient or specialized copy with rational constants.
struct RationalLieAlgebra {
  int dim = 0;
  std::vector<std::vector<QVector>> c;  // c[i][j] is the bracket vector
};

// Parameter values used to specialize; unknown names fall back to later
// entries of a fixed list of generic rationals.
Bindings default_specialization(int attempt = 0);
// Throws std::domain_error when a constant is not real after specialization.
RationalLieAlgebra specialize(const AbstractLieAlgebra& real_alg, const Bindings& values);

// Eigenvalue type counts of ad X for generic X. Only meaningful for
// solvable algebras, where the eigenvalues are linear in X; otherwise all
// fields stay -1.
struct Spectrum {
  int zero = 0;       // multiplicity of eigenvalue 0
  int real = 0;       // nonzero real eigenvalues, with multiplicity
  int imaginary = 0;  // nonzero purely imaginary ones
  int complex = 0;    // the rest
  int distinct = 0;   // distinct eigenvalues over C
  bool operator==(const Spectrum& o) const {
    return zero == o.zero && real == o.real && imaginary == o.imaginary && complex == o.complex &&
           distinct == o.distinct;
  }
};

struct Fingerprint {
  int dim = 0;
  std::vector<int> derived;  // dims of g, [g,g], ... down to the stable term
  std::vector<int> lower_central;
  int center = 0;
  bool solvable = false;
  bool nilpotent = false;
  int killing_rank = 0;
  int killing_pos = 0, killing_neg = 0;
  std::string levi;  // "", "sl(2,R)", "so(3)", "sl(2,R)+so(3)", ...
  int radical = 0;
  Spectrum spectrum;  // of ad X for a seeded random X
  std::string specialization;

  bool same_invariants(const Fingerprint& o) const;
  std::string str() const;
};

Fingerprint fingerprint(const RationalLieAlgebra& alg);
// Real form plus specialization with retry when a specialization loses rank.
Fingerprint fingerprint(const AbstractLieAlgebra& alg);

struct Identification {
  std::string label;
  int abelian_summands = 0;  // central directions outside [g,g]
  std::string base;          // template matched by the rest
  Fingerprint base_fingerprint;
};

class IdentificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Peels central directions outside [g,g], then matches the remainder
// against the stored templates. Throws IdentificationError on no or
// ambiguous match.
Identification identify(const AbstractLieAlgebra& alg);

// Base template names (the label grammar's atoms, eps patterns included).
std::vector<std::string> template_names();
const AbstractLieAlgebra& template_algebra(const std::string& name);

// Compares label strings modulo the ordering of eps tuples where the
// algebra is symmetric in them.
std::string canonical_label(const std::string& label);
bool labels_match(const std::string& expected, const std::string& computed);

// A relation [a, b] = sum coeff * basis element, entries named by label.
struct Relation {
  std::string left, right;
  std::vector<std::pair<Expr, std::string>> rhs;
  std::string text;
};
struct RelationOutcome {
  Relation relation;
  bool holds = false;
  std::string computed;
};
std::vector<RelationOutcome> check_relations(const AbstractLieAlgebra& alg, const std::vector<Relation>& rels);
// Renders [e_i, e_j] as a combination of labels.
std::string bracket_string(const AbstractLieAlgebra& alg, int i, int j);

}  // namespace symschrod
