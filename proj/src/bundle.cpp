#include "plectic/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace plectic {

namespace {

using Mask = MultiIndex::Mask;

void monomials(int dim, int degree, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int e : cur) used += e;
  for (int e = 0; e + used <= degree; ++e) {
    cur.push_back(e);
    monomials(dim, degree, cur, out);
    cur.pop_back();
  }
}

MixedJets zero_like(const MixedJets& f) { return MixedJets(f.d(), f.m(), f.p(), f.q(), f.fiber(), 0); }

double fiber_max(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

SmoothFunction random_polynomial(int dim, int degree, Sampler& rng) {
  std::vector<std::vector<int>> mons;
  std::vector<int> cur;
  monomials(dim, degree, cur, mons);
  std::string src;
  for (const auto& mon : mons) {
    const double c = rng.uniform(-1.0, 1.0);
    if (!src.empty()) src += " + ";
    src += "(" + format_number(c) + ")";
    for (int i = 0; i < dim; ++i) {
      const int e = mon[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      src += "*x" + std::to_string(i);
      if (e > 1) src += "^" + std::to_string(e);
    }
  }
  return SmoothFunction::parse(src, dim);
}

VectorField random_field(int dim, int degree, Sampler& rng) {
  VectorField v;
  for (int i = 0; i < dim; ++i) v.comp.push_back(random_polynomial(dim, degree, rng));
  return v;
}

SymForm random_form(int d, int p, BundleKind bundle, int fiber, int degree, Sampler& rng) {
  SymForm f = SymForm::zero(d, 0, p, 0, bundle, fiber);
  for (auto& c : f.coeffs) c = random_polynomial(d, degree, rng);
  return f;
}

std::vector<double> eval_form(const SymForm& phi, std::span<const double> x,
                              std::span<const std::vector<double>> vectors) {
  if (static_cast<int>(vectors.size()) != phi.p) throw std::invalid_argument("eval_form: arity mismatch");
  return evaluate(phi.eval(x, 0), vectors, {});
}

MixedJets cov_ext_deriv(const Model& model, const SymForm& phi, std::span<const double> x) {
  return d_cov(phi.eval(x), model.wide_connection(phi, x));
}

std::vector<double> cov_ext_deriv_invariant(const MixedJets& phi, const ConnJets& conn,
                                            std::span<const VecJets> fields) {
  const int k = phi.p();
  if (static_cast<int>(fields.size()) != k + 1) throw std::invalid_argument("invariant d: need k+1 fields");
  const int d = phi.d();
  const int wf = phi.wide_fiber();
  std::vector<double> out(static_cast<std::size_t>(wf), 0.0);

  auto contract = [&](const std::vector<const VecJets*>& vs) {
    MixedJets t = phi;
    for (const VecJets* v : vs) t = interior(*v, t);
    return t;
  };

  for (int i = 0; i <= k; ++i) {
    std::vector<const VecJets*> rest;
    for (int j = 0; j <= k; ++j)
      if (j != i) rest.push_back(&fields[static_cast<std::size_t>(j)]);
    const MixedJets s = contract(rest);
    const VecJets& xi = fields[static_cast<std::size_t>(i)];
    const double sign = (i & 1) ? -1.0 : 1.0;
    for (int f = 0; f < wf; ++f) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j) {
        double t = s.wide(0, f).grad(j);
        if (!conn.zero)
          for (int g = 0; g < wf; ++g) t += conn.at(j, f, g).value() * s.wide(0, g).value();
        acc += xi[static_cast<std::size_t>(j)].value() * t;
      }
      out[static_cast<std::size_t>(f)] += sign * acc;
    }
  }
  for (int i = 0; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      const VecJets br = lie_bracket(fields[static_cast<std::size_t>(i)], fields[static_cast<std::size_t>(j)]);
      std::vector<const VecJets*> args{&br};
      for (int l = 0; l <= k; ++l)
        if (l != i && l != j) args.push_back(&fields[static_cast<std::size_t>(l)]);
      const MixedJets t = contract(args);
      const double sign = ((i + j) & 1) ? -1.0 : 1.0;
      for (int f = 0; f < wf; ++f) out[static_cast<std::size_t>(f)] += sign * t.wide(0, f).value();
    }
  return out;
}

MixedJets curvature(const Model& model, std::span<const double> x) { return curvature(model.connection.eval(x)); }

MixedJets cov_lie_derivative(const Model& model, const VectorField& x_field, const SymForm& phi,
                             std::span<const double> x) {
  return lie_derivative(x_field.eval(x), phi.eval(x), model.wide_connection(phi, x));
}

MixedJets tilde_form(const MixedJets& omega) {
  if (omega.fiber() != 1 || omega.q() != 0) throw std::invalid_argument("tilde_form: needs a scalar TM form");
  if (omega.p() < 1) throw std::invalid_argument("tilde_form: degree must be positive");
  const int d = omega.d();
  const int n = omega.p() - 1;
  int order = 2;
  for (const auto& j : omega.coeffs()) order = std::min(order, j.order());
  MixedJets out(d, 0, n, 0, d, order);
  for (Mask im : MultiIndex::list(d, n)) {
    const int ir = MultiIndex::rank(d, im);
    for (int l = 0; l < d; ++l) {
      if (im & (Mask{1} << l)) continue;
      // ω(∂_I, ∂_l): move l from the last slot to the front, then sort.
      const double sign = ((n & 1) ? -1.0 : 1.0) * MultiIndex::insert_sign(im, l);
      out.at(ir, 0, l) = sign * omega.at(MultiIndex::rank(d, im | (Mask{1} << l)), 0, 0);
    }
  }
  return out;
}

MixedJets metric_derivative(const MixedJets& omega, const Christoffel& gamma) {
  if (omega.fiber() != 1 || omega.q() != 0) throw std::invalid_argument("metric_derivative: needs a scalar TM form");
  const int d = omega.d();
  MixedJets out(d, 0, omega.p(), 0, d, 1);
  for (Mask jm : MultiIndex::list(d, omega.p())) {
    const int jr = MultiIndex::rank(d, jm);
    for (int l = 0; l < d; ++l) {
      Jet2 acc = omega.at(jr, 0, 0).partial(l);
      int s = 0;
      for (int js : MultiIndex::indices(jm)) {
        const Mask rest = jm & ~(Mask{1} << js);
        const double slot_sign = (s++ & 1) ? -1.0 : 1.0;
        for (int k = 0; k < d; ++k) {
          if (rest & (Mask{1} << k)) continue;
          const double sign = slot_sign * MultiIndex::insert_sign(rest, k);
          acc -= sign * (gamma.at(k, l, js) * omega.at(MultiIndex::rank(d, rest | (Mask{1} << k)), 0, 0));
        }
      }
      out.at(jr, 0, l) = acc;
    }
  }
  return out;
}

std::string to_string(Identity id) {
  switch (id) {
    case Identity::kCartan1:
      return "CARTAN1";
    case Identity::kCartan2:
      return "CARTAN2";
    case Identity::kCartan3:
      return "CARTAN3";
    case Identity::kDSquared:
      return "DSQUARED";
    case Identity::kBianchi:
      return "BIANCHI";
    case Identity::kTilde:
      return "TILDE";
    case Identity::kFlatCommute:
      return "FLAT_COMMUTE";
    case Identity::kCoefficientVsInvariant:
      return "D_COEFF_VS_INVARIANT";
  }
  return "?";
}

namespace {

const char* anchor_text(Identity id) {
  switch (id) {
    case Identity::kCartan1:
      return "L_X = i_X d + d i_X on E-valued forms";
    case Identity::kCartan2:
      return "i_[X,Y] = L_X i_Y - i_Y L_X";
    case Identity::kCartan3:
      return "L_X d = (i_X R) ^ . + d L_X";
    case Identity::kDSquared:
      return "d d = R ^ .";
    case Identity::kBianchi:
      return "d^End R = 0";
    case Identity::kTilde:
      return "d^g tilde(w) = tilde(dw) + (-1)^n nabla^g w";
    case Identity::kFlatCommute:
      return "flat connection: L_X d = d L_X";
    case Identity::kCoefficientVsInvariant:
      return "coefficient formula for d^E equals the invariant formula";
  }
  return "";
}

bool scalar_form(const Model& model, const SymForm& f) {
  if (f.q != 0 || f.fiber != 1) return false;
  return f.bundle == BundleKind::kScalar || (f.bundle == BundleKind::kE && model.connection.is_trivial());
}

}  // namespace

Report identity_residual(Identity id, const Model& model, int samples, std::uint64_t seed, double tol) {
  if (id == Identity::kTilde && !model.metric) throw std::invalid_argument("TILDE needs a metric on model " + model.name);
  const int d = model.chart.dim;
  Sampler rng(seed);

  std::vector<SymForm> tests;
  for (const auto& [name, f] : model.forms)
    if (f.q == 0) tests.push_back(f);
  if (id == Identity::kTilde) {
    std::erase_if(tests, [&](const SymForm& f) { return !scalar_form(model, f) || f.p < 2; });
    for (int p = 2; p <= d; ++p) tests.push_back(random_form(d, p, BundleKind::kScalar, 1, 2, rng));
  } else {
    for (int p = 0; p <= d; ++p) tests.push_back(random_form(d, p, BundleKind::kE, model.rank, 2, rng));
  }
  const VectorField fx = random_field(d, 2, rng);
  const VectorField fy = random_field(d, 2, rng);
  std::vector<VectorField> linear;
  for (int i = 0; i <= d; ++i) linear.push_back(random_field(d, 1, rng));

  double worst = 0.0;
  bool flat = true;
  for (int s = 0; s < samples; ++s) {
    const auto x = rng.point(model.chart);
    const VecJets X = fx.eval(x);
    const VecJets Y = fy.eval(x);
    const ConnJets conn_e = model.connection.eval(x);
    const MixedJets r_e = curvature(conn_e);
    if (r_e.max_abs() > 0.0) flat = false;

    if (id == Identity::kBianchi) {
      worst = std::max(worst, d_cov(r_e, end_connection(conn_e)).max_abs());
      continue;
    }
    std::optional<Christoffel> gamma;
    if (id == Identity::kTilde) gamma = christoffel(*model.metric, x);

    for (const auto& t : tests) {
      const MixedJets phi = t.eval(x);
      const ConnJets conn = model.fiber_connection(t.bundle, x);
      const int p = t.p;
      switch (id) {
        case Identity::kCartan1: {
          const MixedJets lhs = lie_derivative(X, phi, conn);
          MixedJets rhs = (p < d) ? interior(X, d_cov(phi, conn)) : zero_like(lhs);
          if (p >= 1) rhs += d_cov(interior(X, phi), conn);
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          break;
        }
        case Identity::kCartan2: {
          if (p < 1) break;
          const VecJets br = lie_bracket(X, Y);
          const MixedJets lhs = interior(br, phi);
          const MixedJets rhs = lie_derivative(X, interior(Y, phi), conn) - interior(Y, lie_derivative(X, phi, conn));
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          break;
        }
        case Identity::kCartan3: {
          if (p + 1 > d) break;
          const MixedJets r = curvature(conn);
          const MixedJets lhs = lie_derivative(X, d_cov(phi, conn), conn);
          const MixedJets rhs = end_wedge(interior(X, r), phi) + d_cov(lie_derivative(X, phi, conn), conn);
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          break;
        }
        case Identity::kDSquared: {
          if (p + 2 > d) break;
          const MixedJets lhs = d_cov(d_cov(phi, conn), conn);
          const MixedJets rhs = end_wedge(curvature(conn), phi);
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          break;
        }
        case Identity::kFlatCommute: {
          if (p + 1 > d) break;
          const MixedJets lhs = lie_derivative(X, d_cov(phi, conn), conn);
          const MixedJets rhs = d_cov(lie_derivative(X, phi, conn), conn);
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          break;
        }
        case Identity::kCoefficientVsInvariant: {
          if (p + 1 > d) break;
          std::vector<VecJets> fields;
          std::vector<std::vector<double>> values;
          for (int i = 0; i <= p; ++i) {
            fields.push_back(linear[static_cast<std::size_t>(i)].eval(x));
            std::vector<double> v;
            for (const auto& c : fields.back()) v.push_back(c.value());
            values.push_back(v);
          }
          const auto inv = cov_ext_deriv_invariant(phi, conn, fields);
          const auto coef = evaluate(d_cov(phi, conn), values, {});
          worst = std::max(worst, fiber_max(inv, coef));
          break;
        }
        case Identity::kTilde: {
          const int n = p - 1;
          const MixedJets lhs = d_cov(tilde_form(phi), cotangent_connection(*gamma));
          MixedJets rhs = metric_derivative(phi, *gamma);
          rhs *= (n & 1) ? -1.0 : 1.0;
          if (p + 1 <= d) rhs += tilde_form(d_cov(phi, ConnJets::trivial(d, 1)));
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          break;
        }
        case Identity::kBianchi:
          break;
      }
    }
  }
  Report rep;
  if (id == Identity::kFlatCommute && !flat) return rep;
  rep.add(to_string(id), model.name, anchor_text(id), worst, tol, samples, seed);
  return rep;
}

}  // namespace plectic
