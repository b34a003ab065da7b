#include <gtest/gtest.h>

#include <algorithm>

#include "symschrod/catalog.hpp"
#include "symschrod/determining.hpp"
#include "symschrod/linalg.hpp"
#include "symschrod/parser.hpp"
#include "symschrod/transforms.hpp"

using namespace symschrod;

namespace {

Expr P(const char* s, int dim = 3) { return parse_expr(s, dim); }

Expr residual(const std::vector<DeterminingResidual>& rs, const std::string& label) {
  for (const auto& r : rs)
    if (r.label == label) return r.value;
  ADD_FAILURE() << "no residual " << label;
  return Expr();
}

bool in_span(const SymmetryBasis& sb, const Generator& g) {
  std::vector<DiffOp> ops;
  for (const auto& s : sb.generators) ops.push_back(s.to_diffop());
  return span_coordinates(ops, {g.to_diffop()})[0].has_value();
}

bool same_span(const SymmetryBasis& sb, const std::vector<std::string>& names, int dim) {
  std::vector<DiffOp> want;
  for (const auto& n : names) want.push_back(parse_generator(n, dim).to_diffop());
  if (static_cast<int>(sb.generators.size()) != operator_rank(want)) return false;
  for (const auto& n : names)
    if (!in_span(sb, parse_generator(n, dim))) return false;
  return true;
}

}  // namespace

TEST(Residuals, DilationKinematicPart) {
  auto rs = determining_residuals(standard_generator("D", 3), P("G(x1,x2,x3)"), 3);
  for (const auto& r : rs)
    if (r.label != "de8") EXPECT_TRUE(is_identically_zero(r.value)) << r.label;
}

TEST(Residuals, ShearBreaksConformality) {
  Generator q;
  q.dim = 3;
  q.scale = -imag();
  q.xi = {var(2), Expr(), Expr()};
  auto rs = determining_residuals(q, Expr(), 3);
  EXPECT_TRUE(is_identically_zero(residual(rs, "de2_12") - Expr(1)));
}

TEST(Residuals, TranslationAlongFlatAxis) {
  auto rs = determining_residuals(standard_generator("P3", 3), P("G(x1,x2)"), 3);
  EXPECT_EQ(rs.size(), 1u + 3u + 6u + 1u + 3u + 1u);
  EXPECT_TRUE(all_residuals_vanish(rs));
}

TEST(Ded, DilationOfInverseSquare) {
  AnsatzCoefficients c(3);
  c.xi0 = Expr(-2) * t_var();  // alpha = 2
  EXPECT_TRUE(c.alpha().is_rational() && c.alpha().as_rational() == 2);
  EXPECT_TRUE(is_identically_zero(ded_residual(c, P("kappa/r^2"))));
}

TEST(Ded, RotationWithLinearPhase) {
  const Expr V = P("kappa*phi + G(rt,x3)");
  const Expr k = param("kappa");
  AnsatzCoefficients c(3);
  // L3 + kappa t: theta^{12} = -1 with f = kappa t
  c.set_theta(1, 2, Expr(-1));
  c.f = k * t_var();
  EXPECT_TRUE(is_identically_zero(ded_residual(c, V)));
  // the same rotation with both signs flipped
  c.set_theta(1, 2, Expr(1));
  c.f = -k * t_var();
  EXPECT_TRUE(is_identically_zero(ded_residual(c, V)));
  // theta^{12} = 1 with f = +kappa t leaves 2 kappa
  c.f = k * t_var();
  EXPECT_TRUE(is_identically_zero(ded_residual(c, V) - Expr(2) * k));
}

TEST(Ded, TrivialGenerator) {
  AnsatzCoefficients c(3);
  EXPECT_TRUE(ded_residual(c, P("G(x1,x2,x3)")).is_zero());
}

TEST(Frequencies, Examples) {
  auto f = detect_frequencies(P("omega^2*x3^2/2 + G(x1,x2)"), 3);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].axis, 3);
  EXPECT_EQ(f[0].sign, 1);
  EXPECT_TRUE(same(f[0].omega, param("omega")));

  EXPECT_TRUE(detect_frequencies(P("kappa/r^2"), 3).empty());

  auto g = detect_frequencies(P("omega1^2*x1^2/2 - omega2^2*x2^2/2"), 3);
  ASSERT_EQ(g.size(), 2u);
  std::sort(g.begin(), g.end(), [](const Frequency& a, const Frequency& b) { return a.axis < b.axis; });
  EXPECT_EQ(g[0].axis, 1);
  EXPECT_EQ(g[0].sign, 1);
  EXPECT_TRUE(same(g[0].omega, param("omega1")));
  EXPECT_EQ(g[1].axis, 2);
  EXPECT_EQ(g[1].sign, -1);
  EXPECT_TRUE(same(g[1].omega, param("omega2")));
}

TEST(Frequencies, EpsLeavesSignOpen) {
  auto f = detect_frequencies(P("eps*omega^2*rt^2/2"), 3);
  ASSERT_EQ(f.size(), 2u);
  for (const auto& fr : f) EXPECT_EQ(fr.sign, 0);
}

TEST(Ansatz, FreeSpace) {
  // the free-particle generators plus the multipliers t and t^2, which the solve removes
  EXPECT_EQ(build_ansatz_space(3, {}).size(), 15u);
  EXPECT_EQ(build_ansatz_space(2, {}).size(), 11u);
  auto a = build_ansatz_space(3, {});
  EXPECT_EQ(a.front().name, "P0");
  EXPECT_EQ(a.back().name, "I");
}

TEST(Ansatz, OscillatorProfiles) {
  auto a = build_ansatz_space(3, {Frequency{3, param("omega"), 1}});
  auto has = [&](const std::string& key) {
    Generator want = standard_generator(key, 3, 1, param("omega"));
    for (const auto& e : a) {
      DiffOp diff = e.generator().to_diffop() - want.to_diffop();
      bool zero = true;
      for (const auto& [m, c] : diff.terms()) zero = zero && is_identically_zero(c);
      if (zero) return true;
    }
    return false;
  };
  EXPECT_TRUE(has("B3"));
  EXPECT_TRUE(has("Bh3"));
}

TEST(Solver, FreeParticle) {
  auto s3 = solve_symmetries(Expr(), 3);
  EXPECT_EQ(s3.generators.size(), 13u);
  EXPECT_TRUE(same_span(s3, free_particle_basis(3), 3));
  auto s2 = solve_symmetries(Expr(), 2);
  EXPECT_EQ(s2.generators.size(), 9u);
  EXPECT_TRUE(same_span(s2, free_particle_basis(2), 2));
}

TEST(Solver, InverseSquareWall) {
  auto sb = solve_symmetries(P("kappa/x1^2"), 3);
  EXPECT_EQ(sb.generators.size(), 9u);
  EXPECT_TRUE(same_span(sb, {"A", "D", "G2", "G3", "P2", "P3", "L1", "P0", "I"}, 3));
}

TEST(Solver, AngularRamp) {
  auto sb = solve_symmetries(P("kappa*phi + G(rt,x3)"), 3);
  EXPECT_EQ(sb.generators.size(), 3u);
  EXPECT_TRUE(same_span(sb, {"P0", "L3 + kappa*t", "I"}, 3));
  EXPECT_EQ(sb.generators.front().name, "P0");
  EXPECT_EQ(sb.generators.back().name, "I");
}

TEST(Solver, AlwaysPoAndI) {
  auto sb = solve_symmetries(P("G(x1,x2,x3)"), 3);
  EXPECT_EQ(sb.generators.size(), 2u);
  EXPECT_TRUE(same_span(sb, {"P0", "I"}, 3));
}

TEST(Solver, HomogeneousOfDegreeMinusTwo) {
  auto sb = solve_symmetries(P("G(phi, rt/r)/r^2"), 3);
  EXPECT_TRUE(in_span(sb, standard_generator("D", 3)));
  EXPECT_TRUE(in_span(sb, standard_generator("A", 3)));
}

TEST(Solver, IsotropicOscillatorBringsRotation) {
  auto sb = solve_symmetries(P("omega^2*rt^2/2 + G(x3)"), 3);
  EXPECT_TRUE(in_span(sb, standard_generator("L3", 3)));
  EXPECT_TRUE(in_span(sb, standard_generator("B1", 3, 1, param("omega"))));
  EXPECT_EQ(sb.generators.size(), 7u);
}

TEST(Solver, EuclidInvariantDimension) {
  const char* pots[] = {"kappa/x1^2", "kappa*phi + G(rt,x3)", "G(x1,x2)", "kappa/r^2", "omega^2*x3^2/2 + G(x1,x2)"};
  PointTransform T = catalog_transform("euclid", 3);
  for (const char* p : pots) {
    Expr V = P(p);
    Expr W = euclid_image_potential(T, V);
    EXPECT_EQ(solve_symmetries(V, 3).generators.size(), solve_symmetries(W, 3).generators.size()) << p;
  }
}

TEST(Solver, ChecksAgree) {
  const char* pots[] = {"0", "kappa/r^2", "kappa*phi + G(rt,x3)", "G(x1,x2)", "omega^2*x3^2/2 + G(x1,x2)"};
  for (const char* p : pots) {
    Expr V = P(p);
    auto elems = build_ansatz_space(3, detect_frequencies(V, 3));
    for (const auto& e : elems) {
      bool ded = is_identically_zero(ded_residual(e.coeffs, V));
      Generator g = e.generator();
      bool ic = check_point_symmetry(g, V).symmetric;
      bool de = all_residuals_vanish(determining_residuals(g, V, 3));
      EXPECT_EQ(ded, ic) << p << " " << e.name;
      EXPECT_EQ(de, ic) << p << " " << e.name;
    }
  }
}

TEST(Seeds, Sizes) {
  auto s = enumerate_subalgebra_seeds(3);
  EXPECT_EQ(s.one_dim.size(), 4u);
  EXPECT_EQ(s.two_dim.size(), 4u);
  EXPECT_EQ(s.three_dim.size(), 7u);
  EXPECT_THROW(enumerate_subalgebra_seeds(2), std::invalid_argument);
  for (const auto& list : {s.one_dim, s.two_dim, s.three_dim})
    for (const auto& sub : list)
      for (const auto& g : sub) EXPECT_NO_THROW(parse_generator(g, 3)) << g;
}
