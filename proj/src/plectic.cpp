#include "plectic/plectic.hpp"

#include <algorithm>
#include <cmath>

#include "plectic/algebroid.hpp"
#include "plectic/bundle.hpp"
#include "plectic/geometry.hpp"

namespace plectic {

namespace {

using Mask = MultiIndex::Mask;

VecJets unit(int d, int j, int order = 2) {
  VecJets v;
  for (int i = 0; i < d; ++i) v.push_back(Jet2::constant(i == j ? 1.0 : 0.0, d, order));
  return v;
}

VecJets unit_section(int d, int m, int a) {
  VecJets v;
  for (int i = 0; i < m; ++i) v.push_back(Jet2::constant(i == a ? 1.0 : 0.0, d, 2));
  return v;
}

std::vector<double> values(const VecJets& v) {
  std::vector<double> out;
  for (const auto& j : v) out.push_back(j.value());
  return out;
}

// Entries of ω♭ as jets, row-major (rows, d).
std::vector<Jet2> flat_jets(const MixedJets& omega, int& rows) {
  const int d = omega.d();
  const int n = omega.p() - 1;
  if (n < 0 || omega.q() != 0) throw std::invalid_argument("flat map needs a form of positive degree without A slots");
  const int f = omega.fiber();
  rows = binomial(d, n) * f;
  std::vector<Jet2> out(static_cast<std::size_t>(rows * d));
  for (int j = 0; j < d; ++j) {
    const MixedJets t = interior(unit(d, j), omega);
    for (int ir = 0; ir < t.n_tm(); ++ir)
      for (int c = 0; c < f; ++c) out[static_cast<std::size_t>((ir * f + c) * d + j)] = t.at(ir, 0, c);
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

std::vector<double> omega_on(const MixedJets& w0, const std::vector<double>& u, const std::vector<double>& v) {
  const std::vector<std::vector<double>> args{u, v};
  return evaluate(w0, args, {});
}

// Σ_c coeff_c ρ_c at the value level.
std::vector<double> anchor_combo(const AlgebroidJets& alg, const std::vector<double>& coeff) {
  const std::size_t d = alg.anchor.front().size();
  std::vector<double> out(d, 0.0);
  for (int c = 0; c < alg.m; ++c)
    for (std::size_t k = 0; k < d; ++k) out[k] += coeff[static_cast<std::size_t>(c)] * alg.anchor[static_cast<std::size_t>(c)][k].value();
  return out;
}

std::vector<double> bracket_coeffs(const AlgebroidJets& alg, int a, int b) {
  std::vector<double> out(static_cast<std::size_t>(alg.m));
  for (int c = 0; c < alg.m; ++c) out[static_cast<std::size_t>(c)] = alg.c(a, b, c).value();
  return out;
}

void require_structure(const Model& model, const char* what) {
  if (!model.omega()) throw std::invalid_argument(std::string(what) + ": model " + model.name + " has no omega");
}

}  // namespace

SymForm pair_frame(const SymForm& mu, int a) {
  SymForm out = SymForm::zero(mu.d, 0, mu.p, 0, mu.bundle, mu.fiber);
  for (int ir = 0; ir < binomial(mu.d, mu.p); ++ir)
    for (int f = 0; f < mu.fiber; ++f) out.at(ir, 0, f) = mu.at(ir, a, f);
  return out;
}

Eigen::MatrixXd flat_matrix(const MixedJets& omega) {
  int rows = 0;
  const auto w = flat_jets(omega, rows);
  const int d = omega.d();
  Eigen::MatrixXd m(rows, d);
  for (int r = 0; r < rows; ++r)
    for (int j = 0; j < d; ++j) m(r, j) = w[static_cast<std::size_t>(r * d + j)].value();
  return m;
}

int nondegeneracy_rank(const MixedJets& omega) { return numerical_rank(flat_matrix(omega)).rank; }

PHamSolve solve_pham(const MixedJets& omega, const MixedJets& dphi, double tol, LsqMethod method,
                     bool require_injective) {
  const int d = omega.d();
  if (dphi.p() != omega.p() - 1 || dphi.fiber() != omega.fiber() || dphi.q() != 0)
    throw std::invalid_argument("solve_pham: d^E phi does not match omega");
  int rows = 0;
  const auto w = flat_jets(omega, rows);
  Eigen::MatrixXd w0(rows, d);
  Eigen::VectorXd b0(rows);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < d; ++j) w0(r, j) = w[static_cast<std::size_t>(r * d + j)].value();
    b0(r) = dphi.coeffs()[static_cast<std::size_t>(r)].value();
  }
  PHamSolve out;
  out.rank = numerical_rank(w0).rank;
  if (require_injective && out.rank < d)
    throw Degenerate("omega-flat has rank " + std::to_string(out.rank) + " < " + std::to_string(d));
  const Eigen::VectorXd x0 = least_squares(w0, b0, method);
  out.residual = (w0 * x0 - b0).lpNorm<Eigen::Infinity>();
  if (out.residual > tol)
    throw NotPseudoHamiltonian("d^E phi is not in the image of omega-flat (residual " + format_number(out.residual) + ")");

  bool have_grad = true;
  for (const auto& j : dphi.coeffs()) have_grad = have_grad && j.order() >= 1;
  for (const auto& j : w) have_grad = have_grad && j.order() >= 1;
  for (int j = 0; j < d; ++j) out.x.push_back(Jet2::constant(x0(j), d, have_grad ? 1 : 0));
  if (!have_grad) return out;
  Eigen::MatrixXd rhs(rows, d);
  for (int k = 0; k < d; ++k)
    for (int r = 0; r < rows; ++r) {
      double v = dphi.coeffs()[static_cast<std::size_t>(r)].grad(k);
      for (int j = 0; j < d; ++j) v -= w[static_cast<std::size_t>(r * d + j)].grad(k) * x0(j);
      rhs(r, k) = v;
    }
  const Eigen::MatrixXd dx = least_squares(w0, rhs, method);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out.x[static_cast<std::size_t>(j)].set_grad(k, dx(j, k));
  return out;
}

PHamSolve solve_pham(const Model& model, const SymForm& phi, std::span<const double> x, double tol, LsqMethod method) {
  require_structure(model, "solve_pham");
  const SymForm& w = *model.omega();
  const MixedJets dphi = d_cov(truncated(phi.eval(x), 2), model.fiber_connection(phi.bundle, x));
  MixedJets dp(w.d, 0, dphi.p(), 0, dphi.fiber(), 1);
  dp.coeffs() = dphi.coeffs();
  return solve_pham(w.eval(x), dp, tol, method);
}

MixedJets pham_bracket(const MixedJets& omega, const VecJets& x_phi, const VecJets& x_psi) {
  return interior(x_psi, interior(x_phi, omega));
}

Report hamlemma_residual(const Model& model, const SymForm& phi, const SymForm& psi, int samples, std::uint64_t seed,
                         double tol) {
  require_structure(model, "hamlemma_residual");
  const SymForm& w = *model.omega();
  const int n = w.p - 1;
  if (phi.p != n - 1 || psi.p != n - 1 || phi.q != 0 || psi.q != 0)
    throw std::invalid_argument("hamlemma_residual: forms must have degree n-1");
  Sampler rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const MixedJets omega = w.eval(x);
    const ConnJets conn = model.fiber_connection(w.bundle, x);
    auto strip = [&](const SymForm& f) {
      SymForm g = f;
      g.m = 0;
      return g.eval(x);
    };
    const MixedJets fphi = strip(phi), fpsi = strip(psi);
    const PHamSolve sphi = solve_pham(omega, d_cov(fphi, conn), tol, LsqMethod::kSvd);
    const PHamSolve spsi = solve_pham(omega, d_cov(fpsi, conn), tol, LsqMethod::kSvd);
    const MixedJets lhs = interior(lie_bracket(spsi.x, sphi.x), omega);
    MixedJets rhs = d_cov(pham_bracket(omega, sphi.x, spsi.x), conn);
    if (!conn.zero) {
      const MixedJets r = curvature(conn);
      rhs += interior(spsi.x, end_wedge(r, fphi));
      rhs -= interior(sphi.x, end_wedge(r, fpsi));
    }
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  Report rep;
  rep.add("HAMILTONIAN_LEMMA", model.name,
          "i_[X_psi,X_phi] w = d{phi,psi} + i_X_psi(R ^ phi) - i_X_phi(R ^ psi)", worst, tol, samples, seed);
  return rep;
}

Report plectic_structure(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w) return rep;
  const int d = model.chart.dim;
  Sampler rng(seed);
  double closed = 0.0;
  int min_rank = d;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const MixedJets omega = w->eval(x);
    if (w->p + 1 <= d) closed = std::max(closed, d_cov(omega, model.fiber_connection(w->bundle, x)).max_abs());
    min_rank = std::min(min_rank, nondegeneracy_rank(omega));
  }
  rep.add("PLECTIC_CLOSED", model.name, "omega is closed under the covariant exterior derivative", closed, tol, samples,
          seed);
  rep.add("OMEGA_RANK", model.name, "rank of omega-flat (minimum over samples)", min_rank, 0.0, samples, seed,
          Comparator::kGreaterEqual, min_rank == d ? "injective" : "pre-plectic: omega-flat is not injective");
  return rep;
}

Report hms_defect(const Model& model, const std::vector<SymForm>& momentum, int samples, std::uint64_t seed,
                  double tol, const std::string& label) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w || !model.algebroid || momentum.empty()) return rep;
  const int n = w->p - 1;
  const int d = model.chart.dim;
  const int m = model.algebroid->m;
  if (static_cast<int>(momentum.size()) != n) throw std::invalid_argument("hms_defect: need n momentum components");
  for (int k = 0; k < n; ++k)
    if (momentum[static_cast<std::size_t>(k)].p != k || momentum[static_cast<std::size_t>(k)].q != n - k)
      throw std::invalid_argument("hms_defect: momentum component " + std::to_string(k) + " has the wrong bidegree");

  Sampler rng(seed);
  std::vector<double> worst(static_cast<std::size_t>(n + 1), 0.0);
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const AlgebroidJets alg = model.algebroid->eval(x);
    const ConnJets conn = model.fiber_connection(momentum.front().bundle, x);
    const MixedJets omega = w->eval(x);
    std::vector<MixedJets> mu;
    for (const auto& c : momentum) mu.push_back(c.eval(x));
    for (int k = 0; k <= n; ++k) {
      const int q = n + 1 - k;
      if (q > m || k > d) continue;
      MixedJets lhs(d, m, k, q, w->fiber, 1);
      if (k >= 1) lhs += truncated(mixed_d(mu[static_cast<std::size_t>(k - 1)], alg, conn), 1);
      if (k <= n - 1) lhs += truncated(mixed_eth(mu[static_cast<std::size_t>(k)], alg, conn), 1);
      MixedJets rhs = truncated(iota_rho(q, omega, alg), 1);
      rhs *= ((n - k) & 1) ? -1.0 : 1.0;
      double r = max_abs_diff(lhs, rhs);
      std::vector<std::vector<double>> tv, av;
      for (int i = 0; i < k; ++i) tv.push_back(rng.vector(d));
      for (int i = 0; i < q; ++i) av.push_back(rng.vector(m));
      const auto a = evaluate(lhs, tv, av);
      const auto b = evaluate(rhs, tv, av);
      for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
      worst[static_cast<std::size_t>(k)] = std::max(worst[static_cast<std::size_t>(k)], r);
    }
  }
  for (int k = n; k >= 0; --k) {
    const int q = n + 1 - k;
    const std::string id = "HMS_" + std::to_string(k) + "_" + std::to_string(q) + label;
    const std::string anchor = "bidegree (" + std::to_string(k) + "," + std::to_string(q) +
                               ") of (d + eth) mu = sum_k (-1)^(n-k) iota^(n+1-k)_rho omega";
    rep.add(id, model.name, anchor, worst[static_cast<std::size_t>(k)], tol, samples, seed, Comparator::kLessEqual,
            q > m ? "zero space for this algebroid rank" : "");
  }
  return rep;
}

Report compatibility_defect(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w || !model.algebroid || model.momentum.empty()) return rep;
  const int n = w->p - 1;
  const int d = model.chart.dim;
  const int m = model.algebroid->m;
  const SymForm& top = model.momentum[static_cast<std::size_t>(n - 1)];
  const int r = top.fiber;
  Sampler rng(seed);
  std::vector<VectorField> random_sections;
  for (int t = 0; t < 3; ++t) {
    VectorField v;
    for (int a = 0; a < m; ++a) v.comp.push_back(random_polynomial(d, 1, rng));
    random_sections.push_back(v);
  }

  double direct = 0.0, sum = 0.0, agree = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const AlgebroidJets alg = model.algebroid->eval(x);
    const ConnJets conn = model.fiber_connection(top.bundle, x);
    const MixedJets mu = top.eval(x);
    const MixedJets md = mixed_d(mu, alg, conn);

    auto terms = [&](const VecJets& alpha, double& i_norm, double& ii_norm, double& both) {
      const MixedJets i = truncated(interior_a(alpha, md), 0) - truncated(d_cov(pair_section(mu, alpha), conn), 0);
      MixedJets ii(d, m, n, 0, r, 0);
      for (Mask jm : MultiIndex::list(d, n)) {
        const int jr = MultiIndex::rank(d, jm);
        int slot = 0;
        for (int js : MultiIndex::indices(jm)) {
          const double sign = (slot++ & 1) ? -1.0 : 1.0;
          const Mask rest = jm & ~(Mask{1} << js);
          const int rr = MultiIndex::rank(d, rest);
          for (int c = 0; c < m; ++c) {
            double nab = alpha[static_cast<std::size_t>(c)].grad(js);
            if (!alg.aconn.zero)
              for (int b = 0; b < m; ++b) nab += alg.aconn.at(js, c, b).value() * alpha[static_cast<std::size_t>(b)].value();
            if (nab == 0.0) continue;
            for (int f = 0; f < r; ++f) {
              Jet2& t = ii.at(jr, 0, f);
              t.set_value(t.value() + sign * nab * mu.at(rr, c, f).value());
            }
          }
        }
      }
      i_norm = i.max_abs();
      ii_norm = ii.max_abs();
      both = (i + ii).max_abs();
    };

    for (int a = 0; a < m; ++a) {
      double i = 0, ii = 0, b = 0;
      terms(unit_section(d, m, a), i, ii, b);
      direct = std::max(direct, i);
      sum = std::max(sum, ii);
      agree = std::max(agree, b);
    }
    for (const auto& v : random_sections) {
      double i = 0, ii = 0, b = 0;
      terms(v.eval(x), i, ii, b);
      agree = std::max(agree, b);
    }
  }
  rep.add("COMPAT_DIRECT", model.name, "iota_alpha d mu_{n-1} = d^E iota_alpha mu_{n-1} on frame sections", direct, tol,
          samples, seed);
  rep.add("COMPAT_SUM", model.name, "sum_i (-1)^(i+1) mu_{n-1}^(nabla_X_i alpha) vanishes on frame sections", sum, tol,
          samples, seed);
  rep.add("COMPAT_AGREE", model.name, "the direct defect equals minus the connection sum, for any section", agree, tol,
          samples, seed);
  return rep;
}

Report antihom_residual(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w || !model.algebroid || model.momentum.empty()) return rep;
  if (w->p != 2) throw std::invalid_argument("antihom_residual: needs a 1-plectic structure");
  const int m = model.algebroid->m;
  Sampler rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const AlgebroidJets alg = model.algebroid->eval(x);
    const MixedJets w0 = truncated(w->eval(x, 0), 0);
    const MixedJets mu = model.momentum[0].eval(x, 0);
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        auto v = omega_on(w0, values(alg.anchor[static_cast<std::size_t>(a)]), values(alg.anchor[static_cast<std::size_t>(b)]));
        for (int c = 0; c < m; ++c)
          for (int f = 0; f < mu.fiber(); ++f) v[static_cast<std::size_t>(f)] += alg.c(a, b, c).value() * mu.at(0, c, f).value();
        worst = std::max(worst, max_abs(v));
      }
  }
  rep.add("ANTIHOM", model.name, "mu^[alpha,beta] = -omega(rho alpha, rho beta) on frame sections", worst, tol, samples,
          seed, Comparator::kLessEqual, m < 2 ? "rank 1: both sides vanish" : "");
  return rep;
}

Report jacobi_residual(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w || !model.algebroid || model.momentum.empty()) return rep;
  if (w->p != 2) throw std::invalid_argument("jacobi_residual: needs a 1-plectic structure");
  const int m = model.algebroid->m;
  const int d = model.chart.dim;
  Sampler rng(seed);
  double jac = 0.0, step = 0.0, proof = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const AlgebroidJets alg = model.algebroid->eval(x);
    const ConnJets conn = model.fiber_connection(w->bundle, x);
    const MixedJets omega = w->eval(x);
    const MixedJets w0 = truncated(omega, 0);
    const int r = omega.fiber();
    auto rho = [&](int a) { return values(alg.anchor[static_cast<std::size_t>(a)]); };
    auto rho_br = [&](int a, int b) { return anchor_combo(alg, bracket_coeffs(alg, a, b)); };

    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const MixedJets pair = interior(alg.anchor[static_cast<std::size_t>(b)], interior(alg.anchor[static_cast<std::size_t>(a)], omega));
        for (int c = 0; c < m; ++c) {
          const VecJets& rc = alg.anchor[static_cast<std::size_t>(c)];
          auto v = omega_on(w0, rho_br(a, b), rho(c));
          for (int f = 0; f < r; ++f) {
            double dv = 0.0;
            for (int k = 0; k < d; ++k) {
              double t = pair.at(0, 0, f).grad(k);
              if (!conn.zero)
                for (int g = 0; g < r; ++g) t += conn.at(k, f, g).value() * pair.at(0, 0, g).value();
              dv += rc[static_cast<std::size_t>(k)].value() * t;
            }
            step = std::max(step, std::abs(dv + v[static_cast<std::size_t>(f)]));
          }
        }
      }

    const MixedJets dw = (w->p + 1 <= d) ? truncated(d_cov(omega, conn), 0) : MixedJets();
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        for (int c = b + 1; c < m; ++c) {
          const auto t1 = omega_on(w0, rho_br(a, b), rho(c));
          const auto t2 = omega_on(w0, rho_br(b, c), rho(a));
          const auto t3 = omega_on(w0, rho_br(c, a), rho(b));
          std::vector<double> j(static_cast<std::size_t>(r));
          for (int f = 0; f < r; ++f) {
            const auto fi = static_cast<std::size_t>(f);
            j[fi] = -(t1[fi] + t2[fi] + t3[fi]);
          }
          jac = std::max(jac, max_abs(j));
          std::vector<double> lhs(static_cast<std::size_t>(r), 0.0);
          if (w->p + 1 <= d) {
            const std::vector<std::vector<double>> args{rho(a), rho(b), rho(c)};
            lhs = evaluate(dw, args, {});
          }
          for (int f = 0; f < r; ++f)
            proof = std::max(proof, std::abs(lhs[static_cast<std::size_t>(f)] - 2.0 * j[static_cast<std::size_t>(f)]));
        }
  }
  const std::string note = m < 3 ? "fewer than three frame sections: the cyclic sum is empty" : "";
  rep.add("JACOBI", model.name, "the bracket omega(rho alpha, rho beta) on Gamma_mu(E) satisfies the Jacobi identity",
          jac, tol, samples, seed, Comparator::kLessEqual, note);
  rep.add("JACOBI_STEP", model.name, "nabla_{rho gamma} omega(rho alpha, rho beta) = -omega(rho[alpha,beta], rho gamma)",
          step, tol, samples, seed, Comparator::kLessEqual, m < 2 ? "rank 1: no frame pairs" : "");
  rep.add("JACOBI_PROOF_IDENTITY", model.name, "d^E omega(rho alpha, rho beta, rho gamma) = 2 (Jacobi sum)", proof, tol,
          samples, seed, Comparator::kLessEqual, note);
  return rep;
}

ThetaJets build_theta(const MixedJets& w1, const MixedJets& w2, const MixedJets& w3) {
  const int d = w1.d();
  if (d % 4 != 0) throw std::invalid_argument("build_theta: dimension must be divisible by 4");
  const MixedJets* ws[3] = {&w1, &w2, &w3};
  for (const MixedJets* w : ws)
    if (w->p() != 2 || w->q() != 0 || w->fiber() != 1 || w->d() != d)
      throw std::invalid_argument("build_theta: need three scalar 2-forms");
  ThetaJets t;
  t.theta = MixedJets(d, 0, 2, 0, 3, 2);
  for (int ir = 0; ir < t.theta.n_tm(); ++ir)
    for (int i = 0; i < 3; ++i) t.theta.at(ir, 0, i) = ws[i]->at(ir, 0, 0);
  t.wedge4 = wedge(w1, w1) + wedge(w2, w2) + wedge(w3, w3);
  return t;
}

QConnection q_connection(const Model& model, std::span<const double> x) {
  if (model.theta.size() != 3 || !model.metric) throw std::invalid_argument("q_connection: model has no Theta triple");
  const int d = model.chart.dim;
  const Christoffel gamma = christoffel(*model.metric, x);
  std::vector<MixedJets> w;
  for (const auto& name : model.theta) w.push_back(model.forms.at(name).eval(x));
  const int rows = binomial(d, 2);
  Eigen::MatrixXd basis(rows, 3);
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < rows; ++r) basis(r, i) = w[static_cast<std::size_t>(i)].at(r, 0, 0).value();
  QConnection out;
  out.conn = ConnJets::trivial(d, 3, 0);
  for (int i = 0; i < 3; ++i) {
    const MixedJets nw = metric_derivative(w[static_cast<std::size_t>(i)], gamma);
    for (int l = 0; l < d; ++l) {
      Eigen::VectorXd rhs(rows);
      for (int r = 0; r < rows; ++r) rhs(r) = nw.at(r, 0, l).value();
      const Eigen::VectorXd a = least_squares(basis, rhs);
      out.leak = std::max(out.leak, (basis * a - rhs).lpNorm<Eigen::Infinity>());
      for (int j = 0; j < 3; ++j) out.conn.at(l, j, i) = Jet2::constant(a(j), d, 0);
    }
  }
  out.conn.refresh();
  return out;
}

std::vector<SmoothFunction> solve_gl_momentum(const Model& model, const VectorField& v, std::uint64_t seed) {
  const int d = model.chart.dim;
  std::vector<std::vector<int>> mons;
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) mons.push_back({a, b});
    mons.push_back({a});
  }
  mons.push_back({});
  const int nm = static_cast<int>(mons.size());
  auto mono = [&](const std::vector<int>& mon, std::span<const double> x, int l) {
    if (l < 0) {
      double r = 1.0;
      for (int i : mon) r *= x[static_cast<std::size_t>(i)];
      return r;
    }
    double r = 0.0;
    for (std::size_t k = 0; k < mon.size(); ++k) {
      if (mon[k] != l) continue;
      double t = 1.0;
      for (std::size_t j = 0; j < mon.size(); ++j)
        if (j != k) t *= x[static_cast<std::size_t>(mon[j])];
      r += t;
    }
    return r;
  };

  Sampler rng(seed);
  const int points = 2 * nm;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(points * d * 3, 3 * nm);
  Eigen::VectorXd rhs(points * d * 3);
  for (int s = 0; s < points; ++s) {
    const auto x = rng.point(model.chart);
    const QConnection q = q_connection(model, x);
    const VecJets vj = v.eval(x);
    for (int i = 0; i < 3; ++i) {
      const MixedJets iv = interior(vj, model.forms.at(model.theta[static_cast<std::size_t>(i)]).eval(x));
      for (int l = 0; l < d; ++l) {
        const int row = (s * d + l) * 3 + i;
        rhs(row) = iv.at(l, 0, 0).value();
        for (int t = 0; t < nm; ++t) {
          sys(row, i * nm + t) += mono(mons[static_cast<std::size_t>(t)], x, l);
          for (int j = 0; j < 3; ++j)
            sys(row, j * nm + t) += q.conn.at(l, i, j).value() * mono(mons[static_cast<std::size_t>(t)], x, -1);
        }
      }
    }
  }
  const Eigen::VectorXd c = least_squares(sys, rhs);
  const double res = (sys * c - rhs).lpNorm<Eigen::Infinity>();
  if (res > 1e-9) throw std::runtime_error("no quadratic solution of nabla f_V = Theta_V (residual " + format_number(res) + ")");
  std::vector<SmoothFunction> out;
  for (int i = 0; i < 3; ++i) {
    std::string src;
    for (int t = 0; t < nm; ++t) {
      double coef = c(i * nm + t);
      if (std::abs(coef) < 1e-13) continue;
      const double rounded = std::round(coef * 1e12) / 1e12;
      if (std::abs(coef - rounded) < 1e-13) coef = rounded;
      if (!src.empty()) src += " + ";
      src += "(" + format_number(coef) + ")";
      for (int k : mons[static_cast<std::size_t>(t)]) src += "*x" + std::to_string(k);
    }
    out.push_back(SmoothFunction::parse(src.empty() ? "0" : src, d));
  }
  return out;
}

Report gl_residual(const Model& model, const AlgebroidModel& killing, const SymForm& f, int samples,
                   std::uint64_t seed, double tol, const std::string& label, bool expect_violation) {
  if (model.theta.size() != 3) throw std::invalid_argument("gl_residual: model has no Theta triple");
  if (f.p != 0 || f.q != 1 || f.fiber != 3 || f.m != killing.m) throw std::invalid_argument("gl_residual: f must be a Q-valued A-1-form");
  const int d = model.chart.dim;
  const int m = killing.m;
  Sampler rng(seed);
  double defining = 0.0, bracket = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const QConnection q = q_connection(model, x);
    const AlgebroidJets k = killing.eval(x);
    const MixedJets fj = f.eval(x);
    std::vector<MixedJets> w;
    for (const auto& name : model.theta) w.push_back(model.forms.at(name).eval(x));
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < 3; ++i) {
        const MixedJets iv = interior(k.anchor[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(i)]);
        for (int l = 0; l < d; ++l) {
          double v = fj.at(0, a, i).grad(l);
          for (int j = 0; j < 3; ++j) v += q.conn.at(l, i, j).value() * fj.at(0, a, j).value();
          defining = std::max(defining, std::abs(v - iv.at(l, 0, 0).value()));
        }
      }
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        for (int i = 0; i < 3; ++i) {
          double v = omega_on(truncated(w[static_cast<std::size_t>(i)], 0), values(k.anchor[static_cast<std::size_t>(a)]),
                              values(k.anchor[static_cast<std::size_t>(b)]))[0];
          for (int c = 0; c < m; ++c) v += k.c(a, b, c).value() * fj.at(0, c, i).value();
          bracket = std::max(bracket, std::abs(v));
        }
  }
  Report rep;
  rep.add("GL_DEFINING" + label, model.name, "nabla f_V = Theta_V", defining, tol, samples, seed);
  if (expect_violation)
    rep.add("GL_BRACKET" + label, model.name, "f_[V1,V2] = -sum_i omega_i(V1,V2) omega_i fails for these fields",
            bracket, 0.5, samples, seed, Comparator::kGreaterEqual, "violation expected: [V1,V2] = 0 but omega_i(V1,V2) != 0");
  else
    rep.add("GL_BRACKET" + label, model.name, "f_[V1,V2] = -sum_i omega_i(V1,V2) omega_i", bracket, tol, samples, seed);
  return rep;
}

Report quaternionic_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  if (model.theta.size() != 3 || !model.metric) return rep;
  const int d = model.chart.dim;
  Sampler rng(seed);
  double closed = 0.0, leak = 0.0, wedge_closed = 0.0, killing = 0.0, theta_inv = 0.0;
  int min_rank = d;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    std::vector<MixedJets> w;
    for (const auto& name : model.theta) w.push_back(model.forms.at(name).eval(x));
    const ThetaJets t = build_theta(w[0], w[1], w[2]);
    const QConnection q = q_connection(model, x);
    leak = std::max(leak, q.leak);
    closed = std::max(closed, d_cov(t.theta, q.conn).max_abs());
    if (t.wedge4.p() + 1 <= d) wedge_closed = std::max(wedge_closed, d_cov(t.wedge4, ConnJets::trivial(d, 1)).max_abs());
    min_rank = std::min(min_rank, nondegeneracy_rank(t.theta));
    if (model.algebroid) {
      const std::vector<Jet2> g = model.metric->eval(x);
      const AlgebroidJets alg = model.algebroid->eval(x);
      for (const auto& v : alg.anchor) {
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            double lg = 0.0;
            for (int k = 0; k < d; ++k) {
              lg += v[static_cast<std::size_t>(k)].value() * g[static_cast<std::size_t>(i * d + j)].grad(k);
              lg += g[static_cast<std::size_t>(k * d + j)].value() * v[static_cast<std::size_t>(k)].grad(i);
              lg += g[static_cast<std::size_t>(i * d + k)].value() * v[static_cast<std::size_t>(k)].grad(j);
            }
            killing = std::max(killing, std::abs(lg));
          }
        theta_inv = std::max(theta_inv, lie_derivative(v, t.wedge4, ConnJets::trivial(d, 1)).max_abs());
      }
    }
  }
  rep.add("THETA_Q_PARALLEL", model.name, "nabla^g maps the span of the triple into itself", leak, 1e-12, samples, seed);
  rep.add("THETA_CLOSED", model.name, "Theta = sum omega_i (x) omega_i is closed under d^g_nabla", closed, 1e-12, samples,
          seed);
  rep.add("THETA_WEDGE_CLOSED", model.name, "the fundamental 4-form is closed", wedge_closed, 1e-12, samples, seed);
  rep.add("THETA_RANK", model.name, "Theta is nondegenerate", min_rank, d, samples, seed, Comparator::kGreaterEqual);
  if (!model.algebroid) return rep;
  rep.add("KILLING", model.name, "the anchored fields are Killing", killing, tol, samples, seed);
  rep.add("KILLING_THETA", model.name, "the anchored fields preserve the fundamental 4-form", theta_inv, tol, samples,
          seed);

  const AlgebroidModel& am = *model.algebroid;
  SymForm f = SymForm::zero(d, am.m, 0, 1, BundleKind::kE, 3);
  for (int a = 0; a < am.m; ++a) {
    const auto fa = solve_gl_momentum(model, am.anchor_field(a), seed + 7);
    for (int i = 0; i < 3; ++i) f.at(0, a, i) = fa[static_cast<std::size_t>(i)];
  }
  rep.append(gl_residual(model, am, f, samples, seed, 1e-9, ""));
  if (!model.momentum.empty() && model.momentum[0].p == 0 && model.momentum[0].q == 1 && model.momentum[0].fiber == 3) {
    Sampler probe(seed + 3);
    double diff = 0.0;
    for (int s = 0; s < samples; ++s) {
      const auto x = probe.point(model.chart);
      diff = std::max(diff, max_abs_diff(f.eval(x, 0), model.momentum[0].eval(x, 0)));
    }
    rep.add("GL_MATCHES_MOMENTUM", model.name, "the solved Galicki-Lawson map equals the model momentum section", diff,
            1e-9, samples, seed);
  }

  AlgebroidModel trans;
  trans.m = 2;
  trans.aconn = Connection::trivial(d, 2);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < d; ++i) trans.anchor.push_back(SmoothFunction::constant(i == a ? 1.0 : 0.0, d));
  trans.structure.assign(8, SmoothFunction::constant(0.0, d));
  SymForm ft = SymForm::zero(d, 2, 0, 1, BundleKind::kE, 3);
  for (int a = 0; a < 2; ++a) {
    const auto fa = solve_gl_momentum(model, trans.anchor_field(a), seed + 11);
    for (int i = 0; i < 3; ++i) ft.at(0, a, i) = fa[static_cast<std::size_t>(i)];
  }
  rep.append(gl_residual(model, trans, ft, samples, seed, 1e-9, "_TRANSLATIONS", true));
  return rep;
}

}  // namespace plectic
