// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "plectic/algebroid.hpp"
#include "plectic/bundle.hpp"
#include "plectic/catalog.hpp"
#include "plectic/plectic.hpp"
#include "plectic/reduction.hpp"
#include "plectic/suites.hpp"
#include "poly_oracle.hpp"

using namespace plectic;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kPoints = 200;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double residual(const Report& r, const std::string& id) {
  const CheckResult* c = r.find(id);
  if (!c) throw std::runtime_error("report has no " + id);
  return c->residual;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome cartan() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& name : builtin_names()) {
    const Model m = builtin(name);
    for (Identity id : {Identity::kCartan1, Identity::kCartan2, Identity::kCartan3, Identity::kDSquared,
                        Identity::kBianchi}) {
      const double r = residual(identity_residual(id, m, kPoints, kSeed, 1e-8), to_string(id));
      worst = std::max(worst, r);
      o.require(r <= 1e-8, name + " " + to_string(id) + " = " + fmt(r));
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 10.0, "took " + fmt(t) + " s");
  o.detail = o.pass ? "7 models x 5 identities, max residual " + fmt(worst) + ", " + fmt(t) + " s" : o.detail;
  return o;
}

Outcome algebroid() {
  Outcome o;
  int models = 0;
  for (const auto& name : builtin_names()) {
    const Model m = builtin(name);
    if (!m.algebroid) continue;
    ++models;
    const Report r = algebroid_suite(m, kPoints, kSeed, 1e-8);
    for (const char* id : {"ANCHOR_MORPHISM", "ALGEBROID_JACOBI", "ETH_SQUARED", "ETH_LEIBNIZ", "COMMUTING_LEMMA_M0",
                           "COMMUTING_LEMMA_M1"})
      o.require(r.find(id) != nullptr, name + " missing " + id);
    for (const auto& e : r.entries()) o.require(e.pass(), name + " " + e.id + " = " + fmt(e.residual));
  }
  if (o.pass) o.detail = std::to_string(models) + " algebroid models";
  return o;
}

Outcome hms() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"E1_symplectic", "E1T_translation", "E2_hyperkahler", "E3_heisenberg", "E4_torus4"}) {
    const Model m = builtin(name);
    const Report r = hms_defect(m, m.momentum, kPoints, kSeed, 1e-8);
    o.require(r.find("HMS_1_1") && r.find("HMS_0_2"), std::string(name) + " missing bidegrees");
    for (const auto& e : r.entries()) {
      worst = std::max(worst, e.residual);
      o.require(e.pass(), std::string(name) + " " + e.id + " = " + fmt(e.residual));
    }
  }
  double fault = 1e300;
  for (const char* name : {"E1_symplectic", "E4_torus4"}) {
    const Model bad = perturb_momentum(builtin(name), 0.1);
    const double r = residual(hms_defect(bad, bad.momentum, kPoints, kSeed, 1e-8), "HMS_1_1");
    fault = std::min(fault, r);
    o.require(r >= 0.05, std::string(name) + " fault residual " + fmt(r));
  }
  if (o.pass) o.detail = "max defect " + fmt(worst) + ", injected fault residual >= " + fmt(fault);
  return o;
}

Outcome compat() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"E1_symplectic", "E2_hyperkahler", "E4_torus4"}) {
    const Model m = builtin(name);
    Report r = compatibility_defect(m, kPoints, kSeed, 1e-8);
    r.append(antihom_residual(m, kPoints, kSeed, 1e-8));
    r.append(jacobi_residual(m, kPoints, kSeed, 1e-8));
    for (const char* id : {"COMPAT_DIRECT", "COMPAT_SUM", "COMPAT_AGREE", "ANTIHOM", "JACOBI", "JACOBI_PROOF_IDENTITY"})
      o.require(r.find(id) != nullptr, std::string(name) + " missing " + id);
    for (const auto& e : r.entries()) {
      worst = std::max(worst, e.residual);
      o.require(e.pass(), std::string(name) + " " + e.id + " = " + fmt(e.residual));
    }
  }
  if (o.pass) o.detail = "max residual " + fmt(worst);
  return o;
}

Outcome quaternionic() {
  Outcome o;
  const Model e2 = builtin("E2_hyperkahler");
  const Report q = quaternionic_suite(e2, kPoints, kSeed, 1e-9);
  const double closed = residual(q, "THETA_CLOSED");
  const double defining = residual(q, "GL_DEFINING");
  const double antihom = residual(antihom_residual(e2, kPoints, kSeed, 1e-9), "ANTIHOM");
  o.require(closed <= 1e-12, "theta closedness " + fmt(closed));
  o.require(residual(q, "THETA_WEDGE_CLOSED") <= 1e-12, "theta wedge closedness");
  o.require(defining <= 1e-9, "GL defining condition " + fmt(defining));
  o.require(antihom <= 1e-9, "antihomomorphism " + fmt(antihom));
  if (o.pass) o.detail = "dTheta " + fmt(closed) + ", GL defining " + fmt(defining) + ", antihom " + fmt(antihom);
  return o;
}

Outcome reduction() {
  Outcome o;
  const Model t4 = builtin("E4_torus4");
  const Model e1t = builtin("E1T_translation");
  const Report rt = reduction_suite(t4, kPoints, kSeed, 1e-8);
  const Report re = reduction_suite(e1t, kPoints, kSeed, 1e-8);
  o.require(residual(rt, "REDUCED_FORM") <= 1e-9, "T4 reduced form " + fmt(residual(rt, "REDUCED_FORM")));
  o.require(residual(re, "REDUCED_FORM") <= 1e-8, "E1T reduced form " + fmt(residual(re, "REDUCED_FORM")));

  double orbit = 0.0;
  std::size_t words = 0;
  for (const Model* m : {&t4, &e1t}) {
    Sampler rng(kSeed);
    const auto z = zero_set_point(*m, random_params(*m, rng));
    const OrbitSample s = orbit_sample(*m, z, OrbitMode::kRho0, 100, kSeed);
    words = std::min(words == 0 ? s.words.size() : words, s.words.size());
    orbit = std::max(orbit, s.membership);
  }
  o.require(words == 100, "fewer than 100 flow words");
  o.require(orbit <= 1e-8, "orbit invariance " + fmt(orbit));
  const double cross = std::max(residual(rt, "REDUCED_WELL_DEFINED"), residual(re, "REDUCED_WELL_DEFINED"));
  o.require(cross <= 1e-6, "cross-representative " + fmt(cross));
  for (const Model* m : {&t4, &e1t}) {
    const Transversality t = transversality_check(*m, std::vector<double>{0.3, -0.2, 1.1});
    o.require(!t.satisfied(), m->name + " transversality unexpectedly satisfied");
  }
  if (o.pass)
    o.detail = "reduced forms exact, orbit drift " + fmt(orbit) + ", cross " + fmt(cross) +
               ", transversality violated on T4 and E1T";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const double jets = oracle::worst_jet_error(1000, 20240601);
  o.require(jets <= 1e-12, "jets vs symbolic " + fmt(jets));
  double inv = 0.0;
  for (const auto& name : builtin_names()) {
    const double r = residual(identity_residual(Identity::kCoefficientVsInvariant, builtin(name), kPoints, kSeed, 1e-10),
                              to_string(Identity::kCoefficientVsInvariant));
    inv = std::max(inv, r);
  }
  o.require(inv <= 1e-10, "coefficient vs invariant " + fmt(inv));
  if (o.pass) o.detail = "jets " + fmt(jets) + ", d formulas " + fmt(inv);
  return o;
}

Outcome full_run() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [] {
    Report all;
    for (const auto& name : builtin_names()) all.append(run_suite("all", builtin(name), kPoints, kSeed, 1e-8));
    return all;
  };
  const Report first = run();
  const double t = seconds_since(t0);
  const Report second = run();
  o.require(first.pass(), "suite all reports a failure");
  o.require(t < 60.0, "took " + fmt(t) + " s");
  o.require(first.to_json() == second.to_json(), "reports differ between identical runs");
  if (o.pass)
    o.detail = std::to_string(first.entries().size()) + " checks in " + fmt(t) + " s, byte-identical rerun";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"cartan identities", cartan},
      {"algebroid suite", algebroid},
      {"homotopy momentum sections", hms},
      {"compatibility, antihomomorphism, Jacobi", compat},
      {"quaternionic and Galicki-Lawson", quaternionic},
      {"reduction", reduction},
      {"oracle equivalence", oracle_equivalence},
      {"full run", full_run},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    all = all && o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  return all ? 0 : 1;
}
