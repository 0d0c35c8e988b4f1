#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "plectic/catalog.hpp"
#include "plectic/geometry.hpp"
#include "plectic/linalg.hpp"
#include "plectic/plectic.hpp"

using namespace plectic;

TEST(Christoffel, PolarMetricClosedForm) {
  const Metric g = Metric::parse({{"1", "0"}, {"0", "x0^2"}}, 2);
  Sampler rng(1);
  for (int s = 0; s < 20; ++s) {
    const auto x = rng.point(Chart::box(2, 0.2, 2));
    const Christoffel c = christoffel(g, x);
    EXPECT_NEAR(c.at(0, 1, 1).value(), -x[0], 1e-14);
    EXPECT_NEAR(c.at(1, 0, 1).value(), 1.0 / x[0], 1e-14);
    EXPECT_NEAR(c.at(1, 1, 0).value(), 1.0 / x[0], 1e-14);
    EXPECT_NEAR(c.at(1, 0, 1).grad(0), -1.0 / (x[0] * x[0]), 1e-13);
    EXPECT_EQ(c.at(0, 0, 0).value(), 0.0);
    EXPECT_EQ(c.at(0, 0, 1).value(), 0.0);
    EXPECT_EQ(c.at(1, 1, 1).value(), 0.0);
  }
}

TEST(Metric, RejectsIndefinite) {
  const Metric g = Metric::parse({{"1", "0"}, {"0", "x0"}}, 2);
  EXPECT_THROW(g.eval(std::vector<double>{-0.5, 0.0}), std::domain_error);
}

TEST(Chart, ValidationAndWrap) {
  Chart c = Chart::box(2, 0, 1);
  c.periodic[0] = true;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  Chart t = Chart::box(1, -M_PI, M_PI);
  t.periodic[0] = true;
  EXPECT_NO_THROW(t.validate());
  std::vector<double> x{3 * M_PI};
  t.wrap(x);
  EXPECT_NEAR(x[0], -M_PI, 1e-12);
  EXPECT_THROW(Chart::box(2, 1, 1).validate(), std::invalid_argument);
}

TEST(LieBracket, CoordinateRotation) {
  const VectorField a = VectorField::parse({"-x1", "x0"}, 2);
  const VectorField b = VectorField::parse({"1", "0"}, 2);
  const VecJets r = lie_bracket(a, b, std::vector<double>{0.3, 0.4});
  EXPECT_NEAR(r[0].value(), 0.0, 1e-15);
  EXPECT_NEAR(r[1].value(), -1.0, 1e-15);
}

TEST(Linalg, RankNullSpaceAndSolvers) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  EXPECT_EQ(numerical_rank(a).rank, 2);
  const Eigen::MatrixXd n = null_space(a);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_LE((a * n).norm(), 1e-12);
  Eigen::MatrixXd b(3, 2);
  b << 1, 0, 0, 1, 1, 1;
  const Eigen::VectorXd rhs = b * Eigen::Vector2d(0.5, -2.0);
  for (LsqMethod m : {LsqMethod::kSvd, LsqMethod::kQr, LsqMethod::kNormal})
    EXPECT_LE((least_squares(b, rhs, m) - Eigen::Vector2d(0.5, -2.0)).norm(), 1e-12);
}

TEST(Linalg, JetInverse) {
  const std::vector<double> x{0.3, 0.5};
  std::vector<Jet2> m{SmoothFunction::parse("1 + x0", 2).eval_jet2(x), SmoothFunction::parse("x1", 2).eval_jet2(x),
                      SmoothFunction::parse("0", 2).eval_jet2(x), SmoothFunction::parse("2", 2).eval_jet2(x)};
  const auto inv = jet_inverse(m, 2);
  EXPECT_NEAR(inv[0].value(), 1 / 1.3, 1e-15);
  EXPECT_NEAR(inv[0].grad(0), -1 / (1.3 * 1.3), 1e-14);
  EXPECT_NEAR(inv[1].value(), -0.5 / 2.6, 1e-15);
  std::vector<Jet2> sing{m[2], m[2], m[2], m[2]};
  EXPECT_THROW(jet_inverse(sing, 2), std::domain_error);
}

TEST(ModelFiles, RoundTripAllBuiltins) {
  const auto dir = std::filesystem::temp_directory_path() / "plectic_roundtrip";
  std::filesystem::create_directories(dir);
  for (const auto& name : builtin_names()) {
    const Model a = builtin(name);
    const std::string path = (dir / (name + ".json")).string();
    save_model(a, path);
    const Model b = load_model(path);
    EXPECT_EQ(model_to_json(a).dump(), model_to_json(b).dump()) << name;
    Sampler rng(50);
    for (int s = 0; s < 50; ++s) {
      const auto x = rng.point(a.chart);
      for (const auto& [k, f] : a.forms) EXPECT_EQ(max_abs_diff(f.eval(x), b.forms.at(k).eval(x)), 0.0) << name;
      for (std::size_t k = 0; k < a.momentum.size(); ++k)
        EXPECT_EQ(max_abs_diff(a.momentum[k].eval(x), b.momentum[k].eval(x)), 0.0) << name;
    }
  }
  std::filesystem::remove_all(dir);
}

TEST(ModelFiles, ShippedExamplesMatchCatalog) {
  for (const char* name : {"E1_symplectic", "E4_torus4"}) {
    const Model shipped = load_model(std::string(PLECTIC_SOURCE_DIR) + "/docs/models/" + name + ".json");
    EXPECT_EQ(model_to_json(shipped).dump(), model_to_json(builtin(name)).dump());
  }
  const Model e1 = load_model(std::string(PLECTIC_SOURCE_DIR) + "/docs/models/E1_symplectic.json");
  const Report r = hms_defect(e1, e1.momentum, 50, 1, 1e-10);
  EXPECT_FALSE(r.entries().empty());
  EXPECT_TRUE(r.pass()) << r.to_text();
}

TEST(ModelFiles, ErrorsNameTheField) {
  nlohmann::json j = model_to_json(builtin("E4_torus4"));
  j["algebroid"].erase("anchor");
  try {
    model_from_json(j);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("algebroid.anchor"), std::string::npos) << e.what();
  }
  nlohmann::json k = model_to_json(builtin("E4_torus4"));
  k["algebroid"]["anchor"][0][1] = "x0 +";
  try {
    model_from_json(k);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("algebroid.anchor[0][1]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(resolve_model("no_such_model"), std::invalid_argument);
  EXPECT_THROW(load_model("/nonexistent/model.json"), ModelError);
}
