#include <gtest/gtest.h>

#include "plectic/bundle.hpp"
#include "plectic/catalog.hpp"

using namespace plectic;

namespace {

double run(Identity id, const Model& m, int samples = 50) {
  const Report r = identity_residual(id, m, samples, 7, 1e-8);
  return r.entries().empty() ? 0.0 : r.entries()[0].residual;
}

}  // namespace

class CatalogIdentities : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogIdentities, CartanFamilyHolds) {
  const Model m = builtin(GetParam());
  EXPECT_LE(run(Identity::kCartan1, m), 1e-9);
  EXPECT_LE(run(Identity::kCartan2, m), 1e-9);
  EXPECT_LE(run(Identity::kCartan3, m), 1e-9);
  EXPECT_LE(run(Identity::kDSquared, m), 1e-9);
  EXPECT_LE(run(Identity::kBianchi, m), 1e-9);
  EXPECT_LE(run(Identity::kFlatCommute, m), 1e-9);
  EXPECT_LE(run(Identity::kCoefficientVsInvariant, m), 1e-10);
  if (m.metric) EXPECT_LE(run(Identity::kTilde, m), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Builtins, CatalogIdentities, ::testing::ValuesIn(builtin_names()));
