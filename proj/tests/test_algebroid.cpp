#include <gtest/gtest.h>

#include "plectic/algebroid.hpp"
#include "plectic/catalog.hpp"

using namespace plectic;

namespace {

// so(3) acting on R^3 by rho_a(x) = x × e_a, so that [e_a, e_b] = ε_abc e_c.
AlgebroidModel so3(double perturb = 0.0) {
  AlgebroidModel a;
  a.m = 3;
  a.aconn = Connection::trivial(3, 3);
  const char* rho[3][3] = {{"0", "x2", "-x1"}, {"-x2", "0", "x0"}, {"x1", "-x0", "0"}};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) a.anchor.push_back(SmoothFunction::parse(rho[i][k], 3));
  a.structure.assign(27, SmoothFunction::constant(0.0, 3));
  a.set_bracket(0, 1, 2, "1");
  a.set_bracket(1, 2, 0, "1");
  a.set_bracket(2, 0, 1, perturb == 0.0 ? "1" : "1.1");
  return a;
}

AlgebroidModel abelian_rank1() {
  AlgebroidModel a;
  a.m = 1;
  a.aconn = Connection::trivial(2, 1);
  a.anchor = {SmoothFunction::parse("1", 2), SmoothFunction::parse("0", 2)};
  a.structure = {SmoothFunction::constant(0.0, 2)};
  return a;
}

}  // namespace

TEST(AlgebroidValidate, AbelianRankOneIsExact) {
  const Report r = validate(abelian_rank1(), Chart::box(2, -1, 1), "abelian", 20, 3, 1e-12);
  for (const auto& e : r.entries()) EXPECT_EQ(e.residual, 0.0) << e.id;
}

TEST(AlgebroidValidate, So3ActionPasses) {
  const Report r = validate(so3(), Chart::box(3, -2, 2), "so3", 50, 3, 1e-10);
  EXPECT_TRUE(r.pass()) << r.to_text();
}

TEST(AlgebroidValidate, So3PerturbedFailsAnchorMorphism) {
  const Report r = validate(so3(0.1), Chart::box(3, -2, 2), "so3", 50, 3, 1e-10);
  EXPECT_GE(r.find("ANCHOR_MORPHISM")->residual, 0.05);
}

TEST(AlgebroidDiff, So3SquaresToZero) {
  const AlgebroidModel a = so3();
  Sampler rng(11);
  for (int q = 0; q <= 1; ++q) {
    const SymForm t = random_a_form(3, 3, q, BundleKind::kScalar, 1, 3, rng);
    for (int s = 0; s < 20; ++s) {
      const auto x = rng.point(Chart::box(3, -2, 2));
      const AlgebroidJets j = a.eval(x);
      EXPECT_LE(algebroid_diff(algebroid_diff(t.eval(x), j), j).max_abs(), 1e-10);
    }
  }
}

TEST(AlgebroidDiff, FunctionIsAnchorDerivative) {
  const AlgebroidModel a = so3();
  const SmoothFunction f = SmoothFunction::parse("x0*x1^2 + sin(x2)", 3);
  const std::vector<double> x{0.3, -0.7, 1.1};
  SymForm t = SymForm::zero(3, 3, 0, 0, BundleKind::kScalar, 1);
  t.coeffs[0] = f;
  const MixedJets df = algebroid_diff(t.eval(x), a.eval(x));
  const Jet2 fj = f.eval_jet2(x);
  const AlgebroidJets j = a.eval(x);
  for (int b = 0; b < 3; ++b) {
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += j.anchor[b][k].value() * fj.grad(k);
    EXPECT_NEAR(df.at(0, b, 0).value(), v, 1e-14);
  }
}

TEST(AlgebroidDiff, RejectsNontrivialConnection) {
  const Model m = builtin("E5_curvature");
  const std::vector<double> x{0.1, 0.2};
  const SymForm t = SymForm::zero(2, 2, 0, 1, BundleKind::kE, 1);
  EXPECT_THROW(algebroid_diff(m, t, x), std::invalid_argument);
}

TEST(ACurvature, PullbackOfBundleCurvature) {
  const Model m = builtin("E5_curvature");
  const std::vector<double> x{0.4, -1.3};
  const MixedJets r = a_curvature(m.algebroid->eval(x), m.connection.eval(x));
  EXPECT_NEAR(r.at(0, 0, 0).value(), 1.0, 1e-14);
}

TEST(ACurvature, VanishesForTrivialConnection) {
  const Model m = builtin("E3_heisenberg");
  const std::vector<double> x{0.4, -1.3, 0.2};
  EXPECT_EQ(a_curvature(m.algebroid->eval(x), m.connection.eval(x)).max_abs(), 0.0);
}

TEST(IotaRho, TorusExample) {
  const Model m = builtin("E4_torus4");
  const std::vector<double> x{0.4, -1.3, 0.2, 2.0};
  const MixedJets i1 = iota_rho(1, m.omega()->eval(x), m.algebroid->eval(x));
  // dθ1 ⊗ e1: TM index {1} has rank 1 among 1-subsets of 4
  for (int jr = 0; jr < 4; ++jr)
    for (int f = 0; f < 3; ++f) EXPECT_EQ(i1.at(jr, 0, f).value(), (jr == 1 && f == 0) ? 1.0 : 0.0);
}

TEST(MixedD, TorusMomentumIsHomotopyMomentum) {
  const Model m = builtin("E4_torus4");
  Sampler rng(5);
  for (int s = 0; s < 20; ++s) {
    const auto x = rng.point(m.chart);
    const AlgebroidJets a = m.algebroid->eval(x);
    const ConnJets ce = m.connection.eval(x);
    const MixedJets lhs = mixed_d(m.momentum[0].eval(x), a, ce);
    const MixedJets rhs = iota_rho(1, m.omega()->eval(x), a);
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
  }
}

TEST(PairSection, TorusPairing) {
  const Model m = builtin("E4_torus4");
  const std::vector<double> x{0.4, -1.3, 0.2, 2.0};
  const VecJets alpha = constant_vec(std::vector<double>{1.0}, 4);
  const MixedJets mu = pair_section(m.momentum[0].eval(x), alpha);
  EXPECT_DOUBLE_EQ(mu.at(0, 0, 0).value(), -1.3);
  EXPECT_THROW(pair_section(m.omega()->eval(x), alpha), std::invalid_argument);
}

TEST(MixedEth, EquivariantMomentumOnPlane) {
  const Model m = builtin("E1_symplectic");
  Sampler rng(9);
  for (int s = 0; s < 20; ++s) {
    const auto x = rng.point(m.chart);
    const AlgebroidJets a = m.algebroid->eval(x);
    const MixedJets lhs = mixed_eth(m.momentum[0].eval(x), a, m.connection.eval(x));
    EXPECT_LE(lhs.max_abs(), 1e-10);  // rank 1: both sides live in a zero space
  }
}

class AlgebroidSuite : public ::testing::TestWithParam<std::string> {};

TEST_P(AlgebroidSuite, Passes) {
  const Model m = builtin(GetParam());
  const Report r = algebroid_suite(m, 30, 42, 1e-9);
  EXPECT_TRUE(r.pass()) << r.to_text();
}

INSTANTIATE_TEST_SUITE_P(Builtins, AlgebroidSuite, ::testing::ValuesIn(builtin_names()));
