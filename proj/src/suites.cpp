#include "plectic/suites.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plectic/algebroid.hpp"
#include "plectic/bundle.hpp"
#include "plectic/plectic.hpp"
#include "plectic/reduction.hpp"

namespace plectic {

namespace {

double vec_diff(const VecJets& a, const VecJets& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i].value() - b[i].value()));
  return r;
}

Report cartan_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  for (Identity id : {Identity::kCartan1, Identity::kCartan2, Identity::kCartan3, Identity::kDSquared,
                      Identity::kBianchi, Identity::kFlatCommute, Identity::kCoefficientVsInvariant, Identity::kTilde}) {
    if (id == Identity::kTilde && !model.metric) continue;
    const double t = id == Identity::kCoefficientVsInvariant ? std::min(tol, 1e-10) : tol;
    rep.append(identity_residual(id, model, samples, seed, t));
  }
  return rep;
}

Report hms_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep = plectic_structure(model, samples, seed, tol);
  rep.append(hms_defect(model, model.momentum, samples, seed, tol));
  rep.append(maurer_cartan(model, samples, seed, tol));
  return rep;
}

Report compat_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep = compatibility_defect(model, samples, seed, tol);
  const SymForm* w = model.omega();
  if (w && w->p == 2 && model.algebroid && !model.momentum.empty())
    rep.append(antihom_residual(model, samples, seed, tol));
  rep.append(jacobi_residual(model, samples, seed, tol));
  return rep;
}

Report quaternionic_all(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep = quaternionic_suite(model, samples, seed, tol);
  if (rep.entries().empty() || !model.algebroid || model.momentum.empty()) return rep;
  const Report antihom = antihom_residual(model, samples, seed, tol);
  for (CheckResult c : antihom.entries()) {
    c.id = "GL_ANTIHOM";
    c.anchor = "mu^[a,b] = -omega(rho a, rho b) for the quaternionic momentum map";
    rep.add(c);
  }
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"cartan", "algebroid", "hms", "compat", "bracket",
                                                 "quaternionic", "reduction", "all"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Report bracket_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w || w->q != 0) return rep;
  const int n = w->p - 1;
  const int d = model.chart.dim;
  if (n < 1) return rep;

  Sampler rng(seed);
  std::vector<SymForm> candidates;
  std::vector<int> frame;  // algebroid frame index of the candidate, or -1
  if (model.algebroid && static_cast<int>(model.momentum.size()) == n) {
    const SymForm& top = model.momentum.back();
    for (int a = 0; a < model.algebroid->m; ++a) {
      candidates.push_back(pair_frame(top, a));
      frame.push_back(a);
    }
  }
  if (n == 1 && w->fiber == 1)
    for (int t = 0; t < 2; ++t) {
      candidates.push_back(random_form(d, 0, w->bundle, 1, 2, rng));
      frame.push_back(-1);
    }
  if (candidates.empty()) return rep;

  double residual = 0.0, unique = 0.0, field = 0.0, antisym = 0.0, welldef = 0.0;
  bool has_field = false;
  int min_rank = d;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const MixedJets omega = w->eval(x);
    const int rank = nondegeneracy_rank(omega);
    min_rank = std::min(min_rank, rank);
    if (rank < d) continue;
    std::vector<PHamSolve> svd, qr, normal;
    for (const auto& c : candidates) {
      svd.push_back(solve_pham(model, c, x, 1e-8, LsqMethod::kSvd));
      qr.push_back(solve_pham(model, c, x, 1e-8, LsqMethod::kQr));
      normal.push_back(solve_pham(model, c, x, 1e-8, LsqMethod::kNormal));
      residual = std::max(residual, svd.back().residual);
      unique = std::max({unique, vec_diff(svd.back().x, qr.back().x), vec_diff(svd.back().x, normal.back().x)});
    }
    if (model.algebroid) {
      const AlgebroidJets alg = model.algebroid->eval(x);
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (frame[i] < 0) continue;
        has_field = true;
        field = std::max(field, vec_diff(svd[i].x, alg.anchor[static_cast<std::size_t>(frame[i])]));
      }
    }
    for (std::size_t i = 0; i < candidates.size(); ++i)
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        const MixedJets b = truncated(pham_bracket(omega, svd[i].x, svd[j].x), 0);
        const MixedJets b_rev = truncated(pham_bracket(omega, svd[j].x, svd[i].x), 0);
        antisym = std::max(antisym, (b + b_rev).max_abs());
        const MixedJets b_qr = truncated(pham_bracket(omega, qr[i].x, qr[j].x), 0);
        const MixedJets b_ne = truncated(pham_bracket(omega, normal[i].x, normal[j].x), 0);
        welldef = std::max({welldef, max_abs_diff(b, b_qr), max_abs_diff(b, b_ne)});
      }
  }
  if (min_rank < d) {
    rep.add("PHAM_SOLVE", model.name, "pseudo-Hamiltonian solve of i_X omega = d phi", 0.0, tol, samples, seed,
            Comparator::kLessEqual, "skipped: omega-flat is not injective");
    return rep;
  }
  rep.add("PHAM_SOLVE", model.name, "pseudo-Hamiltonian solve of i_X omega = d phi", residual, 1e-10, samples, seed);
  rep.add("PHAM_UNIQUE", model.name, "X_phi agrees across SVD, QR and normal equations", unique, 1e-10, samples, seed);
  if (has_field)
    rep.add("PHAM_MOMENTUM_FIELD", model.name, "the pseudo-Hamiltonian field of mu^alpha is rho(alpha)", field, 1e-9,
            samples, seed);
  rep.add("BRACKET_ANTISYMMETRY", model.name, "{phi, psi} = -{psi, phi}", antisym, 1e-12, samples, seed);
  rep.add("BRACKET_WELL_DEFINED", model.name, "the bracket does not depend on the solve path", welldef, 1e-9, samples,
          seed);

  const int lemma_samples = std::max(1, std::min(samples, 50));
  double lemma = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i; j < candidates.size(); ++j) {
      const Report r = hamlemma_residual(model, candidates[i], candidates[j], lemma_samples, seed + i * 17 + j, 1.0);
      lemma = std::max(lemma, r.entries().front().residual);
    }
  rep.add("HAMILTONIAN_LEMMA", model.name,
          "i_[X_psi,X_phi] omega = d{phi,psi} + i_X_psi(R ^ phi) - i_X_phi(R ^ psi)", lemma, std::max(tol, 1e-9),
          lemma_samples, seed);
  return rep;
}

Report maurer_cartan(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const auto it = model.forms.find("lambda_R");
  if (it == model.forms.end() || !model.algebroid) return rep;
  const SymForm& lam = it->second;
  const int d = model.chart.dim;
  const int m = model.algebroid->m;
  if (lam.p != 1 || lam.q != 0 || lam.fiber != m) throw std::invalid_argument("lambda_R must be a 1-form valued in the algebra");
  Sampler rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const MixedJets l = lam.eval(x);
    const MixedJets dl = d_cov(l, ConnJets::trivial(d, m));
    const AlgebroidJets alg = model.algebroid->eval(x);
    for (MultiIndex::Mask mask : MultiIndex::list(d, 2)) {
      const auto ij = MultiIndex::indices(mask);
      const int r = MultiIndex::rank(d, mask);
      for (int c = 0; c < m; ++c) {
        double br = 0.0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            br += alg.c(a, b, c).value() * l.at(ij[0], 0, a).value() * l.at(ij[1], 0, b).value();
        worst = std::max(worst, std::abs(dl.at(r, 0, c).value() - br));
      }
    }
  }
  rep.add("MAURER_CARTAN", model.name, "d lambda_R - [lambda_R, lambda_R] = 0", worst, tol, samples, seed);
  return rep;
}

Model perturb_momentum(const Model& model, double eps) {
  if (model.momentum.empty()) throw std::invalid_argument("model " + model.name + " has no momentum section");
  Model out = model;
  SmoothFunction& f = out.momentum.front().coeffs.front();
  const int d = model.chart.dim;
  f = SmoothFunction::parse("(" + f.print() + ") + " + format_number(eps) + "*x0", d);
  out.name = model.name + "_perturbed";
  return out;
}

Report run_suite(const std::string& suite, const Model& model, int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (suite == "cartan") return cartan_suite(model, samples, seed, tol);
  if (suite == "algebroid") return algebroid_suite(model, samples, seed, tol);
  if (suite == "hms") return hms_suite(model, samples, seed, tol);
  if (suite == "compat") return compat_suite(model, samples, seed, tol);
  if (suite == "bracket") return bracket_suite(model, samples, seed, tol);
  if (suite == "quaternionic") return quaternionic_all(model, samples, seed, tol);
  if (suite == "reduction") return reduction_suite(model, samples, seed, tol);
  if (suite == "all") {
    Report rep;
    for (const auto& s : suite_names())
      if (s != "all") rep.append(run_suite(s, model, samples, seed, tol));
    return rep;
  }
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace plectic
