#include <gtest/gtest.h>

#include <map>

#include "symschrod/catalog.hpp"
#include "symschrod/determining.hpp"
#include "symschrod/lie_algebra.hpp"
#include "symschrod/parser.hpp"

using namespace symschrod;

namespace {

AbstractLieAlgebra algebra(const std::vector<std::string>& names, int dim = 3, const Bindings& regime = {}) {
  std::vector<Generator> gens;
  for (const auto& n : names) {
    gens.push_back(parse_generator(n, dim, regime));
    gens.back().name = n;
  }
  return structure_constants(gens);
}

int index_of(const AbstractLieAlgebra& a, const std::string& n) {
  for (int k = 0; k < a.dim; ++k)
    if (a.labels[k] == n) return k;
  return -1;
}

// [x, y] as a map label -> coefficient
std::map<std::string, Expr> bracket(const AbstractLieAlgebra& a, const std::string& x, const std::string& y) {
  std::map<std::string, Expr> out;
  int i = index_of(a, x), j = index_of(a, y);
  for (int k = 0; k < a.dim; ++k)
    if (!a.c[i][j][k].is_zero()) out[a.labels[k]] = a.c[i][j][k];
  return out;
}

bool bracket_is(const AbstractLieAlgebra& a, const std::string& x, const std::string& y, const std::string& z,
                const Expr& c) {
  auto b = bracket(a, x, y);
  return b.size() == 1 && b.count(z) && is_identically_zero(b[z] - c);
}

const Expr I = imag();

}  // namespace

TEST(StructureConstants, FreeParticleSample) {
  auto a = algebra(free_particle_basis(3));
  EXPECT_TRUE(bracket_is(a, "D", "A", "A", Expr(2) * I));
  EXPECT_TRUE(bracket_is(a, "P0", "A", "D", I));
  EXPECT_TRUE(bracket_is(a, "P1", "G1", "I", I));
  EXPECT_TRUE(bracket(a, "P1", "P2").empty());
  EXPECT_TRUE(satisfies_jacobi(a));
}

TEST(StructureConstants, OscillatorSample) {
  const Bindings reg{{"eps1", Expr(1)}, {"eps2", Expr(-1)}, {"eps3", Expr(1)}};
  auto a = algebra({"P0", "B1^eps1(omega1)", "B2^eps2(omega2)", "B3^eps3(omega3)", "Bh1^eps1(omega1)",
                    "Bh2^eps2(omega2)", "Bh3^eps3(omega3)", "I"},
                   3, reg);
  EXPECT_TRUE(bracket_is(a, "P0", "B1^eps1(omega1)", "Bh1^eps1(omega1)", I * param("omega1")));
  EXPECT_TRUE(bracket_is(a, "P0", "B2^eps2(omega2)", "Bh2^eps2(omega2)", I * param("omega2")));
  EXPECT_TRUE(satisfies_jacobi(a));
}

TEST(StructureConstants, AbelianPair) {
  auto a = algebra({"P0", "I"});
  EXPECT_TRUE(bracket(a, "P0", "I").empty());
  EXPECT_EQ(identify(a).label, "2n_{1,1}");
}

TEST(StructureConstants, NonClosureNamesThePair) {
  try {
    algebra({"P0", "A"});
    FAIL();
  } catch (const NonClosure& nc) {
    EXPECT_EQ(nc.left, "P0");
    EXPECT_EQ(nc.right, "A");
  }
}

TEST(Fingerprint, SlTwo) {
  auto f = fingerprint(algebra({"P0", "D", "A"}));
  EXPECT_EQ(f.levi, "sl(2,R)");
  EXPECT_EQ(f.killing_pos, 2);
  EXPECT_EQ(f.killing_neg, 1);
  EXPECT_EQ(f.radical, 0);
}

TEST(Fingerprint, SoThree) {
  auto f = fingerprint(algebra({"L1", "L2", "L3"}));
  EXPECT_EQ(f.levi, "so(3)");
  EXPECT_EQ(f.killing_pos, 0);
  EXPECT_EQ(f.killing_neg, 3);
}

TEST(Fingerprint, Heisenberg) {
  auto f = fingerprint(algebra({"L3 + kappa*t", "P0", "I"}));
  EXPECT_TRUE(f.nilpotent);
  EXPECT_EQ(f.lower_central, (std::vector<int>{3, 1, 0}));
  EXPECT_EQ(f.center, 1);
}

TEST(Fingerprint, SchrodingerThree) {
  auto f = fingerprint(algebra(free_particle_basis(3)));
  EXPECT_EQ(f.dim, 13);
  EXPECT_EQ(f.levi, "sl(2,R)+so(3)");
  EXPECT_EQ(f.radical, 7);
  // the conformal part alone (no rotations) has the sl(2,R) Levi factor
  auto g = fingerprint(algebra({"P0", "D", "A", "P1", "P2", "P3", "G1", "G2", "G3", "I"}));
  EXPECT_EQ(g.levi, "sl(2,R)");
  EXPECT_EQ(g.radical, 7);
}

TEST(Identify, TableExamples) {
  EXPECT_EQ(identify(algebra({"L3 + kappa*t", "P0", "I"})).label, "n_{3,1}");
  EXPECT_EQ(identify(algebra({"L3 + kappa*t", "P0", "I"}, 3, {{"kappa", Expr(0)}})).label, "3n_{1,1}");
  EXPECT_EQ(identify(algebra({"A", "D", "P0", "I"})).label, "sl(2,R)⊕n_{1,1}");
  EXPECT_EQ(identify(algebra({"A", "D", "L1", "L2", "L3", "P0", "I"})).label, "sl(2,R)⊕so(3)⊕n_{1,1}");
  EXPECT_EQ(identify(algebra({"A", "D", "G2", "G3", "P2", "P3", "L1", "P0", "I"})).label, "schr(1,2)");
  EXPECT_EQ(identify(algebra(free_particle_basis(3))).label, "schr(1,3)");
}

TEST(Identify, SolvedBasis) {
  auto sb = solve_symmetries(parse_expr("kappa/x1^2", 3), 3);
  EXPECT_EQ(identify(structure_constants(sb.generators)).label, "schr(1,2)");
}

TEST(Identify, EveryTemplateIsItselfAndUnique) {
  const auto names = template_names();
  EXPECT_GE(names.size(), 30u);
  for (const auto& n : names) {
    const auto& a = template_algebra(n);
    EXPECT_TRUE(satisfies_jacobi(a)) << n;
    Identification id;
    ASSERT_NO_THROW(id = identify(a)) << n;
    EXPECT_TRUE(labels_match(n, id.label)) << n << " identified as " << id.label;
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (canonical_label(names[i]) == canonical_label(names[j])) continue;
      auto fi = fingerprint(template_algebra(names[i]));
      auto fj = fingerprint(template_algebra(names[j]));
      EXPECT_FALSE(fi.same_invariants(fj)) << names[i] << " vs " << names[j];
    }
}

TEST(Identify, NoMatchReportsFingerprint) {
  // a 7-dimensional solvable algebra outside the template set
  auto a = algebra({"P0", "B1^+(omega)", "B2^+(omega)", "Bh1^+(omega)", "Bh2^+(omega)", "L3", "I"});
  try {
    identify(a);
    FAIL();
  } catch (const IdentificationError& e) {
    EXPECT_NE(std::string(e.what()).find("dim=7"), std::string::npos);
  }
}

TEST(Labels, Canonical) {
  EXPECT_TRUE(labels_match("s_{8,1}(1,-1,1)", "s_{8,1}(1,1,-1)"));
  EXPECT_TRUE(labels_match("s_{8,2}(1,-1)", "s_{8,2}(-1,1)"));
  EXPECT_FALSE(labels_match("s_{8,1}(1,1,1)", "s_{8,1}(1,1,-1)"));
  EXPECT_FALSE(labels_match("s_{9,1}(1,-1)", "s_{9,1}(-1,1)"));
  EXPECT_FALSE(labels_match("n_{3,1}", "3n_{1,1}"));
}

TEST(Relations, CheckedAgainstComputedTable) {
  auto a = algebra({"P0", "B1^+(omega)", "Bh1^+(omega)", "I"});
  const Expr w = param("omega");
  std::vector<Relation> rels = {
      {"P0", "B1^+(omega)", {{I * w, "Bh1^+(omega)"}}, "[P0,B] = i w Bh"},
      {"P0", "Bh1^+(omega)", {{-I * w, "B1^+(omega)"}}, "[P0,Bh] = -i w B"},
      {"B1^+(omega)", "Bh1^+(omega)", {{-I * w, "I"}}, "[B,Bh] = -i w I"},
      {"P0", "Bh1^+(omega)", {{I * w, "B1^+(omega)"}}, "[P0,Bh] = i w B"},
  };
  auto out = check_relations(a, rels);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_TRUE(out[0].holds);
  EXPECT_TRUE(out[1].holds);
  EXPECT_TRUE(out[2].holds);
  EXPECT_FALSE(out[3].holds) << out[3].computed;
}

TEST(ChangeBasis, Roundtrip) {
  auto a = algebra({"P0", "D", "A", "I"});
  std::vector<std::vector<Expr>> m = {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 2, 1, 0}, {0, 0, 3, 1}};
  auto b = change_basis(a, m);
  EXPECT_TRUE(satisfies_jacobi(b));
  EXPECT_TRUE(fingerprint(a).same_invariants(fingerprint(b)));
}
