#include "plectic/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "plectic/algebroid.hpp"
#include "plectic/linalg.hpp"

namespace plectic {

namespace {

using Mask = MultiIndex::Mask;
using FieldFn = std::function<void(const std::vector<double>&, std::vector<double>&, Eigen::MatrixXd*)>;

FlowResult integrate(const FieldFn& f, const Chart& chart, std::span<const double> x0, double t, bool variational,
                     double h_max) {
  const int d = chart.dim;
  if (static_cast<int>(x0.size()) != d) throw std::invalid_argument("flow: point has wrong dimension");
  if (!(h_max > 0.0)) throw std::invalid_argument("flow: step must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / h_max - 1e-12)));
  const double h = t / steps;

  FlowResult out;
  out.x.assign(x0.begin(), x0.end());
  out.jacobian = Eigen::MatrixXd::Identity(d, d);
  if (t == 0.0) return out;

  std::vector<double> k1(d), k2(d), k3(d), k4(d), y(d);
  Eigen::MatrixXd j1(d, d), j2(d, d), j3(d, d), j4(d, d);
  Eigen::MatrixXd* jp[4] = {nullptr, nullptr, nullptr, nullptr};
  if (variational) jp[0] = &j1, jp[1] = &j2, jp[2] = &j3, jp[3] = &j4;
  Eigen::MatrixXd& phi = out.jacobian;

  for (int s = 0; s < steps; ++s) {
    const std::vector<double>& x = out.x;
    f(x, k1, jp[0]);
    for (int i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k1[i];
    f(y, k2, jp[1]);
    for (int i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k2[i];
    f(y, k3, jp[2]);
    for (int i = 0; i < d; ++i) y[i] = x[i] + h * k3[i];
    f(y, k4, jp[3]);
    if (variational) {
      const Eigen::MatrixXd p1 = j1 * phi;
      const Eigen::MatrixXd p2 = j2 * (phi + 0.5 * h * p1);
      const Eigen::MatrixXd p3 = j3 * (phi + 0.5 * h * p2);
      const Eigen::MatrixXd p4 = j4 * (phi + h * p3);
      phi += (h / 6.0) * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
    }
    for (int i = 0; i < d; ++i) out.x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    chart.wrap(out.x);
    if (!chart.contains(out.x, 1e-9)) throw std::domain_error("flow left the chart box");
  }
  return out;
}

FieldFn field_fn(const std::vector<SmoothFunction>& comps) {
  return [&comps](const std::vector<double>& x, std::vector<double>& v, Eigen::MatrixXd* jac) {
    const int d = static_cast<int>(x.size());
    for (int k = 0; k < d; ++k) {
      if (!jac) {
        v[k] = comps[k].eval(x);
        continue;
      }
      const Jet2 j = comps[k].eval_jet2(x, 1);
      v[k] = j.value();
      for (int i = 0; i < d; ++i) (*jac)(k, i) = j.grad(i);
    }
  };
}

// Σ_a c_a ρ(e_a) as a field.
FieldFn combo_fn(const AlgebroidModel& alg, const std::vector<double>& c) {
  return [&alg, c](const std::vector<double>& x, std::vector<double>& v, Eigen::MatrixXd* jac) {
    const int d = static_cast<int>(x.size());
    std::fill(v.begin(), v.end(), 0.0);
    if (jac) jac->setZero();
    for (int a = 0; a < alg.m; ++a) {
      if (c[a] == 0.0) continue;
      for (int k = 0; k < d; ++k) {
        const SmoothFunction& f = alg.rho(a, k);
        if (f.is_zero()) continue;
        if (!jac) {
          v[k] += c[a] * f.eval(x);
          continue;
        }
        const Jet2 j = f.eval_jet2(x, 1);
        v[k] += c[a] * j.value();
        for (int i = 0; i < d; ++i) (*jac)(k, i) += c[a] * j.grad(i);
      }
    }
  };
}

const AlgebroidModel& need_algebroid(const Model& model) {
  if (!model.algebroid) throw std::invalid_argument("model " + model.name + " has no algebroid");
  return *model.algebroid;
}

const SymForm& need_mu(const Model& model) {
  if (model.momentum.empty()) throw std::invalid_argument("model " + model.name + " has no momentum section");
  const SymForm& mu = model.momentum.front();
  if (mu.p != 0) throw std::invalid_argument("momentum component 0 must have no TM slots");
  return mu;
}

// Rows: all components of μ_0; columns: ∂_i.
Eigen::MatrixXd mu_jacobian(const Model& model, std::span<const double> x) {
  const SymForm& mu = need_mu(model);
  const int d = model.chart.dim;
  Eigen::MatrixXd j(static_cast<Eigen::Index>(mu.coeffs.size()), d);
  for (std::size_t r = 0; r < mu.coeffs.size(); ++r) {
    const Jet2 v = mu.coeffs[r].eval_jet2(x, 1);
    for (int i = 0; i < d; ++i) j(static_cast<Eigen::Index>(r), i) = v.grad(i);
  }
  return j;
}

double mu_value(const Model& model, std::span<const double> x) {
  double r = 0.0;
  for (const auto& f : need_mu(model).coeffs) r = std::max(r, std::abs(f.eval(x)));
  return r;
}

Eigen::MatrixXd anchor_matrix(const AlgebroidModel& alg, std::span<const double> x) {
  const int d = alg.aconn.dim;
  Eigen::MatrixXd r(d, alg.m);
  for (int a = 0; a < alg.m; ++a)
    for (int k = 0; k < d; ++k) r(k, a) = alg.rho(a, k).eval(x);
  return r;
}

bool isolated(const Model& model) { return model.zero_set && model.zero_set->dim == 0; }

// Distance of u from T_z M_μ.
double tangent_defect(const Model& model, std::span<const double> z, std::span<const double> u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i];
  if (isolated(model)) return v.lpNorm<Eigen::Infinity>();
  const Eigen::MatrixXd j = mu_jacobian(model, z);
  return j.rows() == 0 ? 0.0 : (j * v).lpNorm<Eigen::Infinity>();
}

std::vector<double> form_values(const MixedJets& w, std::span<const double> u, std::span<const double> v) {
  const std::vector<std::vector<double>> args{{u.begin(), u.end()}, {v.begin(), v.end()}};
  return evaluate(w, args, {});
}

double diff_max(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, c);
  return v;
}

std::vector<double> random_combo(const Eigen::MatrixXd& basis, Sampler& rng) {
  Eigen::VectorXd c(basis.cols());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) c(i) = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd v = basis * c;
  return {v.data(), v.data() + v.size()};
}

Jet2 jet_det(std::vector<std::vector<Jet2>> a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Jet2 out = Jet2::constant(0.0, a[0][0].dim(), a[0][0].order());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Jet2>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Jet2> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    const Jet2 t = a[0][c] * jet_det(minor);
    out = (c % 2 == 0) ? out + t : out - t;
  }
  return out;
}

}  // namespace

FlowResult flow(const VectorField& field, const Chart& chart, std::span<const double> x0, double t, bool variational,
                double h_max) {
  if (field.dim() != chart.dim) throw std::invalid_argument("flow: field and chart dimensions differ");
  return integrate(field_fn(field.comp), chart, x0, t, variational, h_max);
}

Eigen::MatrixXd omega_orthogonal(const MixedJets& omega, const Eigen::MatrixXd& w) {
  const int d = omega.d();
  if (omega.p() != 2 || omega.q() != 0) throw std::invalid_argument("omega_orthogonal needs a 2-form");
  if (w.rows() != d) throw std::invalid_argument("omega_orthogonal: subspace has wrong dimension");
  const int f = omega.fiber();
  // (u, w_j)^c = Σ_{k,l} u_k w_jl ω_{kl}^c
  Eigen::MatrixXd m(std::max<Eigen::Index>(1, w.cols() * f), d);
  m.setZero();
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (int c = 0; c < f; ++c)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          if (k == l) continue;
          const Mask mask = (Mask{1} << k) | (Mask{1} << l);
          const double s = k < l ? 1.0 : -1.0;
          m(j * f + c, k) += s * omega.at(MultiIndex::rank(d, mask), 0, c).value() * w(l, j);
        }
  return null_space(m);
}

std::vector<double> zero_set_point(const Model& model, std::span<const double> params) {
  if (!model.zero_set) throw std::invalid_argument("model " + model.name + " has no zero-set parametrization");
  return model.zero_set->map(params);
}

std::vector<double> random_params(const Model& model, Sampler& rng) {
  if (!model.zero_set) throw std::invalid_argument("model " + model.name + " has no zero-set parametrization");
  if (model.zero_set->dim == 0) return {};
  return rng.point(model.zero_set->params);
}

Membership zero_set_membership(const Model& model, std::span<const double> x, double tol,
                               const std::vector<double>* params) {
  const int d = model.chart.dim;
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("zero_set_membership: point has wrong dimension");
  Membership out;
  out.residual = mu_value(model, x);
  out.member = out.residual <= tol;
  if (isolated(model)) {
    out.tangent = Eigen::MatrixXd(d, 0);
  } else if (params && model.zero_set) {
    const ZeroSet& zs = *model.zero_set;
    Eigen::MatrixXd j(d, zs.dim);
    for (int k = 0; k < d; ++k) {
      const Jet2 e = zs.embedding[static_cast<std::size_t>(k)].eval_jet2(*params, 1);
      for (int i = 0; i < zs.dim; ++i) j(k, i) = e.grad(i);
    }
    out.tangent = column_space(j);
  } else {
    out.tangent = null_space(mu_jacobian(model, x));
  }
  return out;
}

Transversality transversality_check(const Model& model, std::span<const double> params, double tol) {
  const AlgebroidModel& alg = need_algebroid(model);
  const std::vector<double> p(params.begin(), params.end());
  const auto z = zero_set_point(model, p);
  const Membership mem = zero_set_membership(model, z, tol, &p);
  if (!mem.member) throw std::invalid_argument("transversality_check: point is not in the zero set");
  Transversality t;
  t.dim = model.chart.dim;
  t.tangent_rank = static_cast<int>(mem.tangent.cols());
  const Eigen::MatrixXd rho = anchor_matrix(alg, z);
  Eigen::MatrixXd both(t.dim, mem.tangent.cols() + rho.cols());
  both << mem.tangent, rho;
  t.sum_rank = both.cols() == 0 ? 0 : numerical_rank(both).rank;
  return t;
}

OrbitSample orbit_sample(const Model& model, std::span<const double> z, OrbitMode mode, int words,
                         std::uint64_t seed, int max_length, double max_time) {
  const AlgebroidModel& alg = need_algebroid(model);
  const int m = alg.m;
  OrbitSample out;
  out.z.assign(z.begin(), z.end());
  Eigen::MatrixXd sections = Eigen::MatrixXd::Identity(m, m);
  if (mode == OrbitMode::kMu) {
    const Eigen::MatrixXd rho = anchor_matrix(alg, z);
    Eigen::MatrixXd normal_part;
    if (isolated(model)) {
      normal_part = rho;
    } else {
      const Eigen::MatrixXd t = null_space(mu_jacobian(model, z));
      normal_part = rho - t * (t.transpose() * rho);
    }
    sections = null_space(normal_part);
  }
  if (sections.cols() == 0) return out;
  Sampler rng(seed);
  for (int w = 0; w < words; ++w) {
    FlowWord word;
    const int len = rng.integer(1, max_length);
    for (int s = 0; s < len; ++s) word.steps.emplace_back(random_combo(sections, rng), rng.uniform(-max_time, max_time));
    const FlowResult r = apply_word(model, word, z, false);
    out.membership = std::max(out.membership, mu_value(model, r.x));
    out.words.push_back(std::move(word));
    out.endpoints.push_back(r.x);
  }
  return out;
}

FlowResult apply_word(const Model& model, const FlowWord& word, std::span<const double> z, bool variational) {
  const AlgebroidModel& alg = need_algebroid(model);
  FlowResult out;
  out.x.assign(z.begin(), z.end());
  out.jacobian = Eigen::MatrixXd::Identity(model.chart.dim, model.chart.dim);
  for (const auto& [c, t] : word.steps) {
    if (static_cast<int>(c.size()) != alg.m) throw std::invalid_argument("flow word has wrong section size");
    FlowResult r = integrate(combo_fn(alg, c), model.chart, out.x, t, variational, kFlowStep);
    out.x = std::move(r.x);
    if (variational) out.jacobian = r.jacobian * out.jacobian;
  }
  return out;
}

double form_invariance(const SymForm& omega, const Chart& chart, const FlowResult& f, std::span<const double> z) {
  if (omega.q != 0) throw std::invalid_argument("form_invariance needs a form without A slots");
  const int d = chart.dim;
  const MixedJets at_z = omega.eval(z, 0);
  const MixedJets at_fz = omega.eval(f.x, 0);
  double r = 0.0;
  for (Mask mask : MultiIndex::list(d, omega.p)) {
    std::vector<std::vector<double>> units, pushed;
    for (int i : MultiIndex::indices(mask)) {
      std::vector<double> e(static_cast<std::size_t>(d), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      units.push_back(e);
      pushed.push_back(column(f.jacobian, i));
    }
    r = std::max(r, diff_max(evaluate(at_fz, pushed, {}), evaluate(at_z, units, {})));
  }
  return r;
}

double function_invariance(const std::vector<SmoothFunction>& s, const FlowResult& f, std::span<const double> z) {
  double r = 0.0;
  for (const auto& c : s) r = std::max(r, std::abs(c.eval(f.x) - c.eval(z)));
  return r;
}

ReducedValue reduced_form(const Model& model, std::span<const double> z, std::span<const double> u,
                          std::span<const double> v, std::span<const double> z2, std::span<const double> u2,
                          std::span<const double> v2, double tol) {
  const SymForm* w = model.omega();
  if (!w || w->p != 2) throw std::invalid_argument("reduced_form needs a 2-form omega");
  auto check = [&](std::span<const double> p, std::span<const double> a, std::span<const double> b) {
    if (mu_value(model, p) > tol) throw std::invalid_argument("reduced_form: point is not in the zero set");
    if (tangent_defect(model, p, a) > tol || tangent_defect(model, p, b) > tol)
      throw std::invalid_argument("reduced_form: vector is not tangent to the zero set");
  };
  check(z, u, v);
  ReducedValue out;
  out.value = form_values(w->eval(z, 0), u, v);
  if (!z2.empty()) {
    check(z2, u2, v2);
    out.cross_residual = diff_max(out.value, form_values(w->eval(z2, 0), u2, v2));
  }
  return out;
}

ReducedValue reduced_connection_eval(const Model& model, const std::vector<SmoothFunction>& s,
                                     std::span<const double> z, std::span<const double> u, const OrbitSample& orbit,
                                     std::span<const double> z2, std::span<const double> u2, double tol) {
  if (static_cast<int>(s.size()) != model.rank) throw std::invalid_argument("section has wrong rank");
  double inv = 0.0;
  for (const auto& e : orbit.endpoints) {
    FlowResult f;
    f.x = e;
    inv = std::max(inv, function_invariance(s, f, orbit.z));
  }
  if (inv > tol) throw std::invalid_argument("reduced_connection_eval: section is not invariant along the orbit");

  auto nabla = [&](std::span<const double> p, std::span<const double> a) {
    if (mu_value(model, p) > tol) throw std::invalid_argument("reduced_connection_eval: point is not in the zero set");
    if (tangent_defect(model, p, a) > tol)
      throw std::invalid_argument("reduced_connection_eval: vector is not tangent to the zero set");
    const ConnJets conn = model.fiber_connection(BundleKind::kE, p);
    const VecJets sj = eval_all(s, p, 1);
    std::vector<double> out(s.size(), 0.0);
    for (std::size_t f = 0; f < s.size(); ++f)
      for (std::size_t i = 0; i < a.size(); ++i) {
        double t = sj[f].grad(static_cast<int>(i));
        if (!conn.zero)
          for (std::size_t b = 0; b < s.size(); ++b)
            t += conn.at(static_cast<int>(i), static_cast<int>(f), static_cast<int>(b)).value() * sj[b].value();
        out[f] += a[i] * t;
      }
    return out;
  };
  ReducedValue out;
  out.value = nabla(z, u);
  if (!z2.empty()) out.cross_residual = diff_max(out.value, nabla(z2, u2));
  return out;
}

std::pair<double, double> subspace_lemma_residuals(const Model& model, std::span<const double> z,
                                                   const Eigen::MatrixXd& tangent) {
  const AlgebroidModel& algm = need_algebroid(model);
  const SymForm& mu = need_mu(model);
  const SymForm* w = model.omega();
  if (!w || w->p != 2) throw std::invalid_argument("subspace lemma needs a 2-form omega");
  const int d = model.chart.dim;
  const AlgebroidJets alg = algm.eval(z);
  const MixedJets md = mixed_d(mu.eval(z), alg, model.fiber_connection(mu.bundle, z));
  const MixedJets w0 = w->eval(z, 0);
  const Eigen::MatrixXd rho = anchor_matrix(algm, z);
  double ker = 0.0, orth = 0.0;
  for (Eigen::Index c = 0; c < tangent.cols(); ++c) {
    const auto u = column(tangent, c);
    ker = std::max(ker, truncated(interior(constant_vec(u, d), md), 0).max_abs());
    for (Eigen::Index a = 0; a < rho.cols(); ++a) {
      for (double x : form_values(w0, u, column(rho, a))) orth = std::max(orth, std::abs(x));
    }
  }
  return {ker, orth};
}

MixedJets pullback(const SymForm& form, const std::vector<SmoothFunction>& map, std::span<const double> q) {
  if (form.q != 0) throw std::invalid_argument("pullback needs a form without A slots");
  if (static_cast<int>(map.size()) != form.d) throw std::invalid_argument("pullback: map has wrong target dimension");
  const int k = static_cast<int>(q.size());
  const int p = form.p;
  const VecJets s = eval_all(map, q, 2);
  std::vector<std::vector<Jet2>> ds(map.size());
  for (std::size_t a = 0; a < map.size(); ++a)
    for (int i = 0; i < k; ++i) ds[a].push_back(s[a].partial(i));
  MixedJets out(k, 0, p, 0, form.fiber, 1);
  for (Mask tm : MultiIndex::list(k, p)) {
    const auto js = MultiIndex::indices(tm);
    const int jr = MultiIndex::rank(k, tm);
    for (Mask sm : MultiIndex::list(form.d, p)) {
      const auto is = MultiIndex::indices(sm);
      const int ir = MultiIndex::rank(form.d, sm);
      Jet2 det = Jet2::constant(1.0, k, 1);
      if (p > 0) {
        std::vector<std::vector<Jet2>> a(static_cast<std::size_t>(p));
        for (int r = 0; r < p; ++r)
          for (int c = 0; c < p; ++c) a[static_cast<std::size_t>(r)].push_back(ds[static_cast<std::size_t>(is[static_cast<std::size_t>(r)])][static_cast<std::size_t>(js[static_cast<std::size_t>(c)])]);
        det = jet_det(a);
      }
      if (det.is_exact_zero()) continue;
      for (int f = 0; f < form.fiber; ++f) {
        const SmoothFunction& cf = form.at(ir, 0, f);
        if (cf.is_zero()) continue;
        const Jet2 wv = cf.eval(std::span<const Jet2>(s));
        out.at(jr, 0, f) += (wv * det).truncated(1);
      }
    }
  }
  return out;
}

Report reduction_suite(const Model& model, int samples, std::uint64_t seed, double tol) {
  Report rep;
  const SymForm* w = model.omega();
  if (!w || w->p != 2 || !model.algebroid || model.momentum.size() != 1 || !model.zero_set) return rep;
  const std::string& name = model.name;
  const AlgebroidModel& algm = *model.algebroid;
  const int d = model.chart.dim;
  const int points = std::max(1, std::min(samples, 20));
  const int words_per_point = std::max(1, 100 / points);
  Sampler rng(seed);

  double membership = 0.0, annihilated = 0.0, orbit_mem = 0.0, omega_inv = 0.0, ker = 0.0, orth = 0.0;
  int deficit = 0, tangent_rank = 0;
  int flows = 0;
  for (int s = 0; s < points; ++s) {
    const auto params = random_params(model, rng);
    const auto z = zero_set_point(model, params);
    const Membership mem = zero_set_membership(model, z, tol, &params);
    membership = std::max(membership, mem.residual);
    if (mem.tangent.cols() > 0) {
      const Eigen::MatrixXd j = mu_jacobian(model, z);
      annihilated = std::max(annihilated, (j * mem.tangent).lpNorm<Eigen::Infinity>());
    }
    const Transversality t = transversality_check(model, params, std::max(tol, 1e-10));
    deficit = std::max(deficit, t.dim - t.sum_rank);
    tangent_rank = t.tangent_rank;

    const OrbitSample orbit = orbit_sample(model, z, OrbitMode::kRho0, words_per_point, seed + 101 * s);
    orbit_mem = std::max(orbit_mem, orbit.membership);
    flows += static_cast<int>(orbit.words.size());

    const OrbitSample mu_orbit = orbit_sample(model, z, OrbitMode::kMu, 2, seed + 103 * s);
    for (const auto& word : mu_orbit.words)
      omega_inv = std::max(omega_inv, form_invariance(*w, model.chart, apply_word(model, word, z, true), z));

    const auto [k, o] = subspace_lemma_residuals(model, z, mem.tangent);
    ker = std::max(ker, k);
    orth = std::max(orth, o);
  }
  rep.add("ZERO_SET_MEMBERSHIP", name, "the catalog parametrization lies in mu = 0", membership, tol, points, seed);
  rep.add("ZERO_SET_TANGENT", name, "the Jacobian of mu annihilates the parametrization tangent", annihilated, 1e-10,
          points, seed);
  rep.add("TRANSVERSALITY", name, "T_zM_mu + Im rho_z = T_zM at sampled zero-set points", deficit, 0.0, points, seed,
          Comparator::kGreaterEqual,
          deficit == 0 ? "satisfied"
                       : "violated: rank deficit " + std::to_string(deficit) + " (tangent rank " +
                             std::to_string(tangent_rank) + ", dim " + std::to_string(d) + ")");
  rep.add("ORBIT_INVARIANCE", name, "flows of anchored sections preserve mu = 0", orbit_mem, tol, flows, seed);
  rep.add("OMEGA_INVARIANCE", name, "omega is invariant under flows of sections in A_mu", omega_inv, 1e-6, points, seed);
  rep.add("SUBSPACE_LEMMA_KER", name, "nabla_u mu = 0 for u tangent to the zero set", ker, 1e-10, points, seed);
  rep.add("SUBSPACE_LEMMA_ORTH", name, "omega(u, rho(alpha)) = 0 for u tangent to the zero set", orth, 1e-10, points,
          seed);

  if (!model.quotient) return rep;
  const Quotient& qt = *model.quotient;
  double red = 0.0, closed = 0.0, pull = 0.0, cross = 0.0, conn_cross = 0.0, conn_val = 0.0;
  const bool flat = model.connection.is_trivial();
  std::vector<SmoothFunction> sec(static_cast<std::size_t>(model.rank), SmoothFunction::constant(0.0, d));
  sec[0] = SmoothFunction::parse("sin(" + qt.projection[0].print() + ")", d);

  for (int s = 0; s < points; ++s) {
    const auto q = rng.point(qt.chart);
    const MixedJets pb = pullback(*w, qt.section, q);
    red = std::max(red, max_abs_diff(truncated(pb, 0), qt.reduced.eval(q, 0)));
    closed = std::max(closed, d_cov(pb, ConnJets::trivial(qt.dim, pb.fiber(), 1)).max_abs());

    const auto params = random_params(model, rng);
    const auto z = zero_set_point(model, params);
    const Membership mem = zero_set_membership(model, z, tol, &params);
    const auto u = random_combo(mem.tangent, rng);
    const auto v = random_combo(mem.tangent, rng);
    const VecJets pj = eval_all(qt.projection, z, 1);
    std::vector<double> pu(static_cast<std::size_t>(qt.dim), 0.0), pv = pu, pz = pu;
    for (int a = 0; a < qt.dim; ++a) {
      pz[a] = pj[a].value();
      for (int i = 0; i < d; ++i) {
        pu[a] += pj[a].grad(i) * u[i];
        pv[a] += pj[a].grad(i) * v[i];
      }
    }
    const auto base = reduced_form(model, z, u, v, {}, {}, {}, tol);
    pull = std::max(pull, diff_max(form_values(qt.reduced.eval(pz, 0), pu, pv), base.value));

    const OrbitSample orbit = orbit_sample(model, z, OrbitMode::kRho0, 1, seed + 107 * s);
    if (orbit.words.empty()) continue;
    const FlowResult f = apply_word(model, orbit.words.front(), z, true);
    const Eigen::MatrixXd rho2 = anchor_matrix(algm, f.x);
    auto shifted = [&](const std::vector<double>& a) {
      Eigen::VectorXd x = f.jacobian * Eigen::Map<const Eigen::VectorXd>(a.data(), d);
      for (Eigen::Index c = 0; c < rho2.cols(); ++c) x += rng.uniform(-1.0, 1.0) * rho2.col(c);
      return std::vector<double>(x.data(), x.data() + d);
    };
    const auto u2 = shifted(u);
    const auto v2 = shifted(v);
    cross = std::max(cross, reduced_form(model, z, u, v, f.x, u2, v2, tol).cross_residual);
    if (flat) {
      const auto cv = reduced_connection_eval(model, sec, z, u, orbit, f.x, u2, tol);
      conn_cross = std::max(conn_cross, cv.cross_residual);
      conn_val = std::max(conn_val, std::abs(cv.value[0] - std::cos(pz[0]) * pu[0]));
    }
  }
  rep.add("REDUCED_FORM", name, "the section pullback of omega equals the reduced form", red, 1e-9, points, seed);
  rep.add("REDUCED_CLOSED", name, "the reduced form is closed", closed, 1e-8, points, seed);
  rep.add("REDUCED_PULLBACK", name, "pi^* of the reduced form equals omega on the zero set", pull, 1e-8, points, seed);
  rep.add("REDUCED_WELL_DEFINED", name, "the reduced form does not depend on the representatives", cross, 1e-6, points,
          seed);
  if (flat) {
    rep.add("REDUCED_CONNECTION", name, "the reduced connection matches the quotient derivative of sin(q0) e_0",
            conn_val, 1e-8, points, seed);
    rep.add("REDUCED_CONNECTION_WELL_DEFINED", name, "the reduced connection does not depend on the representatives",
            conn_cross, 1e-7, points, seed);
  }
  return rep;
}

}  // namespace plectic
