#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "plectic/catalog.hpp"
#include "plectic/linalg.hpp"
#include "plectic/reduction.hpp"

using namespace plectic;

namespace {

constexpr double kPi = std::numbers::pi;

VectorField rotation() { return VectorField::parse({"-x1", "x0"}, 2); }

std::vector<double> unit(int d, int i) {
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

}  // namespace

TEST(Flow, RotationQuarterTurn) {
  const Chart c = Chart::box(2, -2, 2);
  const std::vector<double> x0{1.0, 0.0};
  const FlowResult r = flow(rotation(), c, x0, kPi / 2, true);
  EXPECT_NEAR(r.x[0], 0.0, 1e-9);
  EXPECT_NEAR(r.x[1], 1.0, 1e-9);
  EXPECT_NEAR(r.jacobian(0, 0), 0.0, 1e-9);
  EXPECT_NEAR(r.jacobian(0, 1), -1.0, 1e-9);
  EXPECT_NEAR(r.jacobian(1, 0), 1.0, 1e-9);
  EXPECT_NEAR(r.jacobian(1, 1), 0.0, 1e-9);
}

TEST(Flow, RotationFullPeriod) {
  const Chart c = Chart::box(2, -2, 2);
  const std::vector<double> x0{0.6, -0.8};
  const FlowResult r = flow(rotation(), c, x0, 2 * kPi);
  EXPECT_NEAR(r.x[0], 0.6, 1e-8);
  EXPECT_NEAR(r.x[1], -0.8, 1e-8);
  const FlowResult back = flow(rotation(), c, flow(rotation(), c, x0, 1.3).x, -1.3);
  EXPECT_NEAR(back.x[0], 0.6, 1e-12);
  EXPECT_NEAR(back.x[1], -0.8, 1e-12);
}

TEST(Flow, LeavingTheBoxThrows) {
  const Chart c = Chart::box(2, -2, 2);
  const VectorField v = VectorField::parse({"1", "0"}, 2);
  EXPECT_THROW(flow(v, c, std::vector<double>{1.9, 0.0}, 1.0), std::domain_error);
}

TEST(Flow, PeriodicCoordinatesWrap) {
  const Model t4 = builtin("E4_torus4");
  const VectorField v = t4.algebroid->anchor_field(0);
  const FlowResult r = flow(v, t4.chart, std::vector<double>{3.0, 0.0, 0.0, 0.0}, 1.0);
  EXPECT_NEAR(r.x[0], 4.0 - 2 * kPi, 1e-12);
  EXPECT_TRUE(t4.chart.contains(r.x));
}

TEST(OmegaOrthogonal, DimensionAndDoubleComplement) {
  const Model m = builtin("E1T_translation");
  const MixedJets w = m.omega()->eval(std::vector<double>{0.1, 0.2, 0.3, 0.4}, 0);
  Sampler rng(4);
  for (int k = 1; k <= 3; ++k) {
    Eigen::MatrixXd sub(4, k);
    for (int j = 0; j < k; ++j) {
      const auto v = rng.vector(4);
      for (int i = 0; i < 4; ++i) sub(i, j) = v[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd perp = omega_orthogonal(w, sub);
    EXPECT_EQ(perp.cols() + k, 4);
    const Eigen::MatrixXd back = omega_orthogonal(w, perp);
    const Eigen::MatrixXd q = column_space(sub);
    EXPECT_LE((back * back.transpose() - q * q.transpose()).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(ZeroSet, TorusMembershipAndTangent) {
  const Model t4 = builtin("E4_torus4");
  const std::vector<double> params{0.3, -1.0, 2.0};
  const auto z = zero_set_point(t4, params);
  const Membership m = zero_set_membership(t4, z, 1e-12, &params);
  EXPECT_TRUE(m.member);
  ASSERT_EQ(m.tangent.cols(), 3);
  EXPECT_LE(m.tangent.row(1).lpNorm<Eigen::Infinity>(), 1e-15);
  const Membership off = zero_set_membership(t4, std::vector<double>{0.3, 0.2, 2.0, 0.0}, 1e-12);
  EXPECT_FALSE(off.member);
  EXPECT_NEAR(off.residual, 0.2, 1e-15);
}

TEST(Transversality, ViolatedOnCatalogSatisfiedOnOpenZeroSet) {
  for (const char* name : {"E4_torus4", "E1T_translation"}) {
    const Model m = builtin(name);
    const Transversality t = transversality_check(m, std::vector<double>{0.1, 0.2, 0.3});
    EXPECT_FALSE(t.satisfied()) << name;
    EXPECT_EQ(t.tangent_rank, 3);
    EXPECT_EQ(t.sum_rank, 3);
  }
  Model open = builtin("E1T_translation");
  open.momentum[0] = SymForm::zero(4, 1, 0, 1, BundleKind::kE, 1);
  open.algebroid->anchor[0] = SmoothFunction::constant(0.0, 4);
  ZeroSet z;
  z.dim = 4;
  z.params = Chart::box(4, -1, 1);
  for (const char* e : {"x0", "x1", "x2", "x3"}) z.embedding.push_back(SmoothFunction::parse(e, 4));
  open.zero_set = z;
  const Transversality t = transversality_check(open, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  EXPECT_TRUE(t.satisfied());
  EXPECT_THROW(transversality_check(builtin("E4_torus4"), std::vector<double>{0.1}), std::exception);
}

TEST(Orbits, RhoFlowsPreserveZeroSet) {
  for (const char* name : {"E4_torus4", "E1T_translation"}) {
    const Model m = builtin(name);
    const auto z = zero_set_point(m, std::vector<double>{0.2, -0.4, 0.5});
    const OrbitSample o = orbit_sample(m, z, OrbitMode::kRho0, 100, 7);
    EXPECT_EQ(o.endpoints.size(), 100U);
    EXPECT_LE(o.membership, 1e-8) << name;
    const OrbitSample mu = orbit_sample(m, z, OrbitMode::kMu, 10, 7);
    EXPECT_EQ(mu.words.size(), 10U);
  }
}

TEST(Orbits, FormInvarianceDetectsNonInvariantForm) {
  const Model t4 = builtin("E4_torus4");
  const auto z = zero_set_point(t4, std::vector<double>{0.2, -0.4, 0.5});
  const OrbitSample o = orbit_sample(t4, z, OrbitMode::kMu, 5, 3);
  for (const auto& w : o.words)
    EXPECT_LE(form_invariance(*t4.omega(), t4.chart, apply_word(t4, w, z, true), z), 1e-12);

  const Chart c = Chart::box(2, -3, 3);
  SymForm f = SymForm::zero(2, 0, 2, 0, BundleKind::kE, 1);
  f.set({0, 1}, {}, 0, "x0");
  FlowResult r = flow(VectorField::parse({"1", "0"}, 2), c, std::vector<double>{0.0, 0.0}, 1.0, true);
  EXPECT_NEAR(form_invariance(f, c, r, std::vector<double>{0.0, 0.0}), 1.0, 1e-12);
}

TEST(ReducedForm, ValuesAndErrors) {
  const Model e1t = builtin("E1T_translation");
  const auto z = zero_set_point(e1t, std::vector<double>{0.2, -0.4, 0.5});
  const ReducedValue r = reduced_form(e1t, z, unit(4, 2), unit(4, 3));
  EXPECT_NEAR(r.value[0], 1.0, 1e-15);
  EXPECT_THROW(reduced_form(e1t, std::vector<double>{0, 0.5, 0, 0}, unit(4, 2), unit(4, 3)), std::invalid_argument);
  EXPECT_THROW(reduced_form(e1t, z, unit(4, 1), unit(4, 3)), std::invalid_argument);

  const Model t4 = builtin("E4_torus4");
  const auto zt = zero_set_point(t4, std::vector<double>{0.2, -0.4, 0.5});
  const ReducedValue rt = reduced_form(t4, zt, unit(4, 2), unit(4, 3));
  for (double v : rt.value) EXPECT_EQ(v, 0.0);
  // Second representative shifted along the anchor.
  std::vector<double> z2 = zt;
  z2[0] += 0.7;
  std::vector<double> u2 = unit(4, 2);
  u2[0] = 0.4;
  const ReducedValue cross = reduced_form(t4, zt, unit(4, 2), unit(4, 3), z2, u2, unit(4, 3));
  EXPECT_LE(cross.cross_residual, 1e-15);
}

TEST(ReducedConnection, TorusSineSection) {
  const Model t4 = builtin("E4_torus4");
  const std::vector<SmoothFunction> s{SmoothFunction::parse("sin(x2)", 4), SmoothFunction::constant(0.0, 4),
                                      SmoothFunction::constant(0.0, 4)};
  const std::vector<double> z{0.5, 0.0, 0.0, 1.0};
  const OrbitSample o = orbit_sample(t4, z, OrbitMode::kRho0, 5, 1);
  const ReducedValue r = reduced_connection_eval(t4, s, z, unit(4, 2), o);
  EXPECT_NEAR(r.value[0], 1.0, 1e-15);
  EXPECT_EQ(r.value[1], 0.0);
  const std::vector<SmoothFunction> bad{SmoothFunction::parse("sin(x0)", 4), SmoothFunction::constant(0.0, 4),
                                        SmoothFunction::constant(0.0, 4)};
  EXPECT_THROW(reduced_connection_eval(t4, bad, z, unit(4, 2), o), std::invalid_argument);
}

TEST(SubspaceLemma, TangentAndFault) {
  const Model t4 = builtin("E4_torus4");
  const std::vector<double> params{0.2, -0.4, 0.5};
  const auto z = zero_set_point(t4, params);
  const Membership m = zero_set_membership(t4, z, 1e-12, &params);
  const auto [ker, orth] = subspace_lemma_residuals(t4, z, m.tangent);
  EXPECT_LE(ker, 1e-12);
  EXPECT_LE(orth, 1e-12);
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(4, 1);
  normal(1, 0) = 1.0;
  const auto [ker_bad, orth_bad] = subspace_lemma_residuals(t4, z, normal);
  EXPECT_GE(ker_bad, 0.1);
  EXPECT_GE(orth_bad, 0.1);
}

TEST(Pullback, PolarCoordinates) {
  SymForm area = SymForm::zero(2, 0, 2, 0, BundleKind::kE, 1);
  area.set({0, 1}, {}, 0, "1");
  const std::vector<SmoothFunction> polar{SmoothFunction::parse("x0*cos(x1)", 2), SmoothFunction::parse("x0*sin(x1)", 2)};
  Sampler rng(8);
  for (int s = 0; s < 10; ++s) {
    const auto q = rng.point(Chart::box(2, 0.1, 2));
    const MixedJets pb = pullback(area, polar, q);
    EXPECT_NEAR(pb.at(0, 0, 0).value(), q[0], 1e-14);
    EXPECT_NEAR(pb.at(0, 0, 0).grad(0), 1.0, 1e-14);
  }
}

TEST(ReductionSuite, CatalogModels) {
  for (const char* name : {"E4_torus4", "E1T_translation", "E2_hyperkahler"}) {
    const Report r = reduction_suite(builtin(name), 20, 42, 1e-8);
    EXPECT_TRUE(r.pass()) << r.to_text();
  }
  const Report t4 = reduction_suite(builtin("E4_torus4"), 20, 42, 1e-8);
  EXPECT_LE(t4.find("REDUCED_FORM")->residual, 1e-9);
  EXPECT_GE(t4.find("TRANSVERSALITY")->residual, 1.0);
}
