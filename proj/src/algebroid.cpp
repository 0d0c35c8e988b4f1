#include "plectic/algebroid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plectic/bundle.hpp"

namespace plectic {

namespace {

using Mask = MultiIndex::Mask;

Jet2 zero_jet(int dim, int order) { return Jet2::constant(0.0, dim, order); }

// ρ_a(f) = Σ_k ρ^k_a ∂_k f.
Jet2 anchor_apply(const AlgebroidJets& alg, int a, const Jet2& f) {
  const VecJets& rho = alg.anchor[static_cast<std::size_t>(a)];
  Jet2 acc = zero_jet(f.dim(), std::max(0, f.order() - 1));
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (rho[k].is_exact_zero()) continue;
    acc += rho[k] * f.partial(static_cast<int>(k));
  }
  return acc;
}

int jets_dim(const AlgebroidJets& alg) { return static_cast<int>(alg.anchor.front().size()); }

}  // namespace

double anchor_morphism_defect(const AlgebroidJets& alg) {
  const int m = alg.m;
  const int d = jets_dim(alg);
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const VecJets br = lie_bracket(alg.anchor[static_cast<std::size_t>(a)], alg.anchor[static_cast<std::size_t>(b)]);
      for (int k = 0; k < d; ++k) {
        double v = 0.0;
        for (int c = 0; c < m; ++c) v += alg.c(a, b, c).value() * alg.anchor[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)].value();
        worst = std::max(worst, std::abs(v - br[static_cast<std::size_t>(k)].value()));
      }
    }
  return worst;
}

double jacobi_defect(const AlgebroidJets& alg) {
  const int m = alg.m;
  // [[e_a,e_b],e_c]^f = Σ_d c^d_{ab} c^f_{dc} - ρ_c(c^f_{ab})
  auto double_bracket = [&](int a, int b, int c, int f) {
    double v = -anchor_apply(alg, c, alg.c(a, b, f)).value();
    for (int dd = 0; dd < m; ++dd) v += alg.c(a, b, dd).value() * alg.c(dd, c, f).value();
    return v;
  };
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c)
        for (int f = 0; f < m; ++f) {
          const double s = double_bracket(a, b, c, f) + double_bracket(b, c, a, f) + double_bracket(c, a, b, f);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

Report validate(const AlgebroidModel& alg, const Chart& chart, const std::string& model_name, int samples,
                std::uint64_t seed, double tol) {
  Sampler rng(seed);
  double morph = 0.0, jac = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(chart);
    const AlgebroidJets j = alg.eval(x);
    morph = std::max(morph, anchor_morphism_defect(j));
    jac = std::max(jac, jacobi_defect(j));
  }
  Report rep;
  rep.add("ANCHOR_MORPHISM", model_name, "the anchor maps frame brackets to Lie brackets of vector fields", morph, tol,
          samples, seed);
  rep.add("ALGEBROID_JACOBI", model_name, "the frame bracket extended by Leibniz satisfies the Jacobi identity", jac,
          tol, samples, seed);
  return rep;
}

MixedJets algebroid_diff(const MixedJets& theta, const AlgebroidJets& alg) {
  if (theta.p() != 0) throw std::invalid_argument("algebroid_diff: form has TM slots");
  return mixed_eth(theta, alg, ConnJets::trivial(theta.d(), theta.fiber(), 0));
}

MixedJets algebroid_diff(const Model& model, const SymForm& theta, std::span<const double> x) {
  if (!model.algebroid) throw std::invalid_argument("algebroid_diff: model has no algebroid");
  if (theta.bundle != BundleKind::kScalar && !model.connection.is_trivial())
    throw std::invalid_argument("algebroid_diff: nontrivial bundle connection supplied");
  return algebroid_diff(theta.eval(x), model.algebroid->eval(x));
}

MixedJets a_cov_ext_deriv(const MixedJets& phi, const AlgebroidJets& alg, const ConnJets& conn_e) {
  if (phi.p() != 0) throw std::invalid_argument("a_cov_ext_deriv: form has TM slots");
  return mixed_eth(phi, alg, conn_e);
}

MixedJets a_curvature(const AlgebroidJets& alg, const ConnJets& conn_e) {
  const int m = alg.m;
  const int d = jets_dim(alg);
  const int r = conn_e.rank;
  MixedJets out(d, m, 0, 2, r * r, 1);
  if (conn_e.zero || m < 2) return out;
  // M_a = Σ_k ρ^k_a A_k
  std::vector<Jet2> mat(static_cast<std::size_t>(m * r * r), zero_jet(d, 2));
  auto M = [&](int a, int i, int j) -> Jet2& { return mat[static_cast<std::size_t>((a * r + i) * r + j)]; };
  for (int a = 0; a < m; ++a)
    for (int k = 0; k < d; ++k) {
      const Jet2& rk = alg.anchor[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
      if (rk.is_exact_zero()) continue;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) M(a, i, j) += rk * conn_e.at(k, i, j);
    }
  for (Mask km : MultiIndex::list(m, 2)) {
    const auto ks = MultiIndex::indices(km);
    const int a = ks[0], b = ks[1];
    const int kr = MultiIndex::rank(m, km);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        Jet2 v = anchor_apply(alg, a, M(b, i, j)) - anchor_apply(alg, b, M(a, i, j));
        for (int l = 0; l < r; ++l) v += M(a, i, l) * M(b, l, j) - M(b, i, l) * M(a, l, j);
        for (int c = 0; c < m; ++c) v -= alg.c(a, b, c) * M(c, i, j);
        out.at(0, kr, i * r + j) = v.truncated(1);
      }
  }
  return out;
}

MixedJets mixed_d(const MixedJets& phi, const AlgebroidJets& alg, const ConnJets& conn_e) {
  if (phi.q() == 0) return d_cov(phi, conn_e);
  ConnJets ce = conn_e;
  if (ce.zero) ce = ConnJets::trivial(phi.d(), phi.fiber());
  return d_cov(phi, induced_connection(phi.q(), alg.m, ce, alg.aconn));
}

MixedJets pair_section(const MixedJets& nu, const VecJets& alpha) {
  if (nu.q() != 1) throw std::invalid_argument("pair_section: form must have exactly one A slot");
  return interior_a(alpha, nu);
}

SymForm random_a_form(int d, int m, int q, BundleKind bundle, int fiber, int degree, Sampler& rng) {
  SymForm f = SymForm::zero(d, m, 0, q, bundle, fiber);
  for (auto& c : f.coeffs) c = random_polynomial(d, degree, rng);
  return f;
}

Report algebroid_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  if (!model.algebroid) return rep;
  const AlgebroidModel& am = *model.algebroid;
  const int d = model.chart.dim;
  const int m = am.m;
  const int r = model.rank;
  rep.append(validate(am, model.chart, model.name, samples, seed, tol));

  Sampler rng(seed + 1);
  std::vector<SymForm> scalar_a, e_a, e_tm;
  for (int q = 0; q <= m; ++q) {
    scalar_a.push_back(random_a_form(d, m, q, BundleKind::kScalar, 1, 2, rng));
    e_a.push_back(random_a_form(d, m, q, BundleKind::kE, r, 2, rng));
  }
  for (int p = 0; p <= std::min(d, 2); ++p) e_tm.push_back(random_form(d, p, BundleKind::kE, r, 2, rng));

  double eth2 = 0.0, leibniz = 0.0, ddeg = 0.0, curv = 0.0;
  double lemma[2] = {0.0, 0.0};
  bool lemma_run[2] = {false, false};
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const AlgebroidJets alg = am.eval(x);
    const ConnJets ce = model.connection.eval(x);

    for (int q = 0; q + 2 <= m; ++q) {
      const MixedJets t = scalar_a[static_cast<std::size_t>(q)].eval(x);
      eth2 = std::max(eth2, algebroid_diff(algebroid_diff(t, alg), alg).max_abs());
    }
    for (int k = 0; k <= m; ++k)
      for (int l = 0; k + l + 1 <= m; ++l) {
        const MixedJets th = scalar_a[static_cast<std::size_t>(k)].eval(x);
        const MixedJets tau = e_a[static_cast<std::size_t>(l)].eval(x);
        const MixedJets lhs = a_cov_ext_deriv(wedge(th, tau), alg, ce);
        MixedJets rhs = wedge(algebroid_diff(th, alg), tau);
        MixedJets second = wedge(th, a_cov_ext_deriv(tau, alg, ce));
        second *= (k & 1) ? -1.0 : 1.0;
        rhs += second;
        leibniz = std::max(leibniz, max_abs_diff(lhs, rhs));
      }
    for (int deg = 0; deg <= 1; ++deg) {
      if (deg + 1 > m || deg + 1 > d) continue;
      lemma_run[deg] = true;
      const MixedJets phi = e_tm[static_cast<std::size_t>(deg)].eval(x);
      const MixedJets lhs = a_cov_ext_deriv(iota_rho(deg, phi, alg), alg, ce);
      const MixedJets rhs = iota_rho(deg + 1, d_cov(phi, ce), alg);
      lemma[deg] = std::max(lemma[deg], max_abs_diff(lhs, rhs));
    }
    for (const auto& f : e_tm) {
      const MixedJets phi = f.eval(x);
      if (phi.p() + 1 > d) continue;
      const MixedJets a = mixed_d(phi, alg, ce);
      const MixedJets b = cov_ext_deriv(model, f, x);
      ddeg = std::max(ddeg, max_abs_diff(a, b));
    }
    if (m >= 2) {
      const MixedJets sec = e_a[0].eval(x);
      const MixedJets lhs = a_cov_ext_deriv(a_cov_ext_deriv(sec, alg, ce), alg, ce);
      const MixedJets rc = a_curvature(alg, ce);
      for (int kr = 0; kr < lhs.n_a(); ++kr)
        for (int i = 0; i < r; ++i) {
          double v = 0.0;
          if (!ce.zero)
            for (int j = 0; j < r; ++j) v += rc.at(0, kr, i * r + j).value() * sec.at(0, 0, j).value();
          curv = std::max(curv, std::abs(lhs.at(0, kr, i).value() - v));
        }
    }
  }
  rep.add("ETH_SQUARED", model.name, "the algebroid differential squares to zero on scalar A-forms", eth2, tol,
          samples, seed);
  rep.add("ETH_LEIBNIZ", model.name, "eth(theta ^ tau) = eth(theta) ^ tau + (-1)^k theta ^ eth(tau)", leibniz, tol,
          samples, seed);
  for (int deg = 0; deg <= 1; ++deg)
    rep.add("COMMUTING_LEMMA_M" + std::to_string(deg), model.name,
            "eth composed with iota^m_rho equals iota^(m+1)_rho composed with d^E", lemma[deg], tol, samples, seed,
            Comparator::kLessEqual, lemma_run[deg] ? "" : "both sides vanish identically for this rank");
  rep.add("MIXED_D_DEGENERATE", model.name, "mixed_d on forms without A slots equals d^E", ddeg, 1e-12, samples, seed);
  if (m >= 2)
    rep.add("A_CURVATURE", model.name, "the A-curvature acts on sections as eth composed with the A-connection", curv,
            tol, samples, seed);
  return rep;
}

}  // namespace plectic
