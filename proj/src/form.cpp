#include "plectic/form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plectic {

namespace {

using Mask = MultiIndex::Mask;

Jet2 zero_jet(int dim, int order) { return Jet2::constant(0.0, dim, order); }

int min_order(const std::vector<Jet2>& v) {
  int o = 2;
  for (const auto& j : v) o = std::min(o, j.order());
  return o;
}

}  // namespace

ConnJets ConnJets::trivial(int dim, int rank, int order) {
  ConnJets c;
  c.dim = dim;
  c.rank = rank;
  c.zero = true;
  c.a.assign(static_cast<std::size_t>(dim * rank * rank), zero_jet(dim, order));
  return c;
}

void ConnJets::refresh() {
  zero = std::all_of(a.begin(), a.end(), [](const Jet2& j) { return j.is_exact_zero(); });
}

MixedJets::MixedJets(int d, int m, int p, int q, int fiber, int order)
    : d_(d), m_(m), p_(p), q_(q), fiber_(fiber), n_tm_(binomial(d, p)), n_a_(binomial(m, q)) {
  if (p < 0 || q < 0 || fiber < 1) throw std::invalid_argument("invalid form shape");
  c_.assign(static_cast<std::size_t>(n_tm_ * n_a_ * fiber_), zero_jet(d, order));
}

MixedJets& MixedJets::operator+=(const MixedJets& o) {
  if (!same_shape(o)) throw std::invalid_argument("adding forms of different shape");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

MixedJets& MixedJets::operator-=(const MixedJets& o) {
  if (!same_shape(o)) throw std::invalid_argument("subtracting forms of different shape");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

MixedJets& MixedJets::operator*=(double s) {
  for (auto& j : c_) j *= s;
  return *this;
}

double MixedJets::max_abs() const {
  double r = 0.0;
  for (const auto& j : c_) r = std::max(r, std::abs(j.value()));
  return r;
}

double max_abs_diff(const MixedJets& a, const MixedJets& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("comparing forms of different shape");
  double r = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    r = std::max(r, std::abs(a.coeffs()[i].value() - b.coeffs()[i].value()));
  return r;
}

VecJets lie_bracket(const VecJets& x, const VecJets& y) {
  if (x.size() != y.size()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  const int d = static_cast<int>(x.size());
  VecJets r(x.size());
  for (int k = 0; k < d; ++k) {
    Jet2 acc = zero_jet(x[0].dim(), 2);
    for (int i = 0; i < d; ++i) {
      acc += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(k)].partial(i);
      acc -= y[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(k)].partial(i);
    }
    r[static_cast<std::size_t>(k)] = acc;
  }
  return r;
}

MixedJets d_cov(const MixedJets& phi, const ConnJets& conn) {
  const int d = phi.d();
  const int wf = phi.wide_fiber();
  if (!conn.zero && conn.rank != wf) throw std::invalid_argument("d_cov: connection rank does not match fiber");
  const int order = std::max(0, min_order(phi.coeffs()) - 1);
  MixedJets out(d, phi.m(), phi.p() + 1, phi.q(), phi.fiber(), order);
  if (phi.p() + 1 > d) return out;
  for (Mask jm : MultiIndex::list(d, phi.p() + 1)) {
    const int jr = MultiIndex::rank(d, jm);
    int s = 0;
    for (int i : MultiIndex::indices(jm)) {
      const double sign = (s++ & 1) ? -1.0 : 1.0;
      const Mask im = jm & ~(Mask{1} << i);
      const int ir = MultiIndex::rank(d, im);
      for (int f = 0; f < wf; ++f) {
        Jet2 term = phi.wide(ir, f).partial(i);
        if (!conn.zero) {
          for (int g = 0; g < wf; ++g) {
            const Jet2& a = conn.at(i, f, g);
            if (a.is_exact_zero()) continue;
            term += a * phi.wide(ir, g);
          }
        }
        out.wide(jr, f) += sign * term;
      }
    }
  }
  return out;
}

MixedJets interior(const VecJets& x, const MixedJets& phi) {
  const int d = phi.d();
  if (phi.p() < 1) throw std::invalid_argument("interior: form has no TM slot");
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("interior: vector dimension mismatch");
  const int wf = phi.wide_fiber();
  MixedJets out(d, phi.m(), phi.p() - 1, phi.q(), phi.fiber(), std::min(min_order(phi.coeffs()), min_order(x)));
  for (Mask im : MultiIndex::list(d, phi.p() - 1)) {
    const int ir = MultiIndex::rank(d, im);
    for (int j = 0; j < d; ++j) {
      if (im & (Mask{1} << j)) continue;
      const Jet2& xj = x[static_cast<std::size_t>(j)];
      if (xj.is_exact_zero()) continue;
      const double sign = MultiIndex::insert_sign(im, j);
      const int src = MultiIndex::rank(d, im | (Mask{1} << j));
      for (int f = 0; f < wf; ++f) out.wide(ir, f) += sign * (xj * phi.wide(src, f));
    }
  }
  return out;
}

MixedJets interior_a(const VecJets& alpha, const MixedJets& phi) {
  const int m = phi.m();
  if (phi.q() < 1) throw std::invalid_argument("interior_a: form has no algebroid slot");
  if (static_cast<int>(alpha.size()) != m) throw std::invalid_argument("interior_a: section rank mismatch");
  MixedJets out(phi.d(), m, phi.p(), phi.q() - 1, phi.fiber(), std::min(min_order(phi.coeffs()), min_order(alpha)));
  for (int ir = 0; ir < phi.n_tm(); ++ir) {
    for (Mask km : MultiIndex::list(m, phi.q() - 1)) {
      const int kr = MultiIndex::rank(m, km);
      for (int c = 0; c < m; ++c) {
        if (km & (Mask{1} << c)) continue;
        const Jet2& ac = alpha[static_cast<std::size_t>(c)];
        if (ac.is_exact_zero()) continue;
        const double sign = MultiIndex::insert_sign(km, c);
        const int src = MultiIndex::rank(m, km | (Mask{1} << c));
        for (int f = 0; f < phi.fiber(); ++f) out.at(ir, kr, f) += sign * (ac * phi.at(ir, src, f));
      }
    }
  }
  return out;
}

MixedJets wedge(const MixedJets& eta, const MixedJets& phi) {
  if (eta.fiber() != 1) throw std::invalid_argument("wedge: left factor must be scalar");
  const int order = std::min(min_order(eta.coeffs()), min_order(phi.coeffs()));
  if (eta.q() == 0) {
    const int d = phi.d();
    const int p = eta.p() + phi.p();
    MixedJets out(d, phi.m(), p, phi.q(), phi.fiber(), order);
    if (p > d) return out;
    const int wf = phi.wide_fiber();
    for (Mask jm : MultiIndex::list(d, p)) {
      const int jr = MultiIndex::rank(d, jm);
      for (Mask sm : MultiIndex::list(d, eta.p())) {
        if ((sm & jm) != sm) continue;
        const Mask tm = jm & ~sm;
        const double sign = MultiIndex::shuffle_sign(sm, tm);
        const Jet2& e = eta.at(MultiIndex::rank(d, sm), 0, 0);
        if (e.is_exact_zero()) continue;
        const int tr = MultiIndex::rank(d, tm);
        for (int f = 0; f < wf; ++f) out.wide(jr, f) += sign * (e * phi.wide(tr, f));
      }
    }
    return out;
  }
  if (eta.p() != 0 || phi.p() != 0) throw std::invalid_argument("wedge: mixed slot groups are not supported");
  const int m = phi.m();
  const int q = eta.q() + phi.q();
  MixedJets out(phi.d(), m, 0, q, phi.fiber(), order);
  if (q > m) return out;
  for (Mask jm : MultiIndex::list(m, q)) {
    const int jr = MultiIndex::rank(m, jm);
    for (Mask sm : MultiIndex::list(m, eta.q())) {
      if ((sm & jm) != sm) continue;
      const Mask tm = jm & ~sm;
      const double sign = MultiIndex::shuffle_sign(sm, tm);
      const Jet2& e = eta.at(0, MultiIndex::rank(m, sm), 0);
      if (e.is_exact_zero()) continue;
      const int tr = MultiIndex::rank(m, tm);
      for (int f = 0; f < phi.fiber(); ++f) out.at(0, jr, f) += sign * (e * phi.at(0, tr, f));
    }
  }
  return out;
}

MixedJets end_wedge(const MixedJets& r, const MixedJets& phi) {
  const int d = phi.d();
  const int g = phi.wide_fiber();
  if (r.fiber() != g * g || r.q() != 0) throw std::invalid_argument("end_wedge: End fiber does not match");
  const int order = std::min(min_order(r.coeffs()), min_order(phi.coeffs()));
  const int p = r.p() + phi.p();
  MixedJets out(d, phi.m(), p, phi.q(), phi.fiber(), order);
  if (p > d) return out;
  for (Mask jm : MultiIndex::list(d, p)) {
    const int jr = MultiIndex::rank(d, jm);
    for (Mask sm : MultiIndex::list(d, r.p())) {
      if ((sm & jm) != sm) continue;
      const Mask tm = jm & ~sm;
      const double sign = MultiIndex::shuffle_sign(sm, tm);
      const int sr = MultiIndex::rank(d, sm);
      const int tr = MultiIndex::rank(d, tm);
      for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
          const Jet2& e = r.at(sr, 0, a * g + b);
          if (e.is_exact_zero()) continue;
          out.wide(jr, a) += sign * (e * phi.wide(tr, b));
        }
      }
    }
  }
  return out;
}

MixedJets lie_derivative(const VecJets& x, const MixedJets& phi, const ConnJets& conn) {
  const int d = phi.d();
  const int wf = phi.wide_fiber();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("lie_derivative: vector dimension mismatch");
  if (!conn.zero && conn.rank != wf) throw std::invalid_argument("lie_derivative: connection rank does not match fiber");
  const int order = std::max(0, std::min(min_order(phi.coeffs()), min_order(x)) - 1);
  MixedJets out(d, phi.m(), phi.p(), phi.q(), phi.fiber(), order);
  for (Mask im : MultiIndex::list(d, phi.p())) {
    const int ir = MultiIndex::rank(d, im);
    for (int f = 0; f < wf; ++f) {
      Jet2 acc = zero_jet(d, order);
      for (int j = 0; j < d; ++j) {
        const Jet2& xj = x[static_cast<std::size_t>(j)];
        if (xj.is_exact_zero()) continue;
        Jet2 t = phi.wide(ir, f).partial(j);
        if (!conn.zero)
          for (int g = 0; g < wf; ++g) {
            const Jet2& a = conn.at(j, f, g);
            if (!a.is_exact_zero()) t += a * phi.wide(ir, g);
          }
        acc += xj * t;
      }
      int s = 0;
      for (int i : MultiIndex::indices(im)) {
        const Mask rest = im & ~(Mask{1} << i);
        const double slot_sign = (s++ & 1) ? -1.0 : 1.0;
        for (int j = 0; j < d; ++j) {
          if (rest & (Mask{1} << j)) continue;
          const Jet2 dx = x[static_cast<std::size_t>(j)].partial(i);
          if (dx.is_exact_zero()) continue;
          const double sign = slot_sign * MultiIndex::insert_sign(rest, j);
          acc += sign * (dx * phi.wide(MultiIndex::rank(d, rest | (Mask{1} << j)), f));
        }
      }
      out.wide(ir, f) = acc;
    }
  }
  return out;
}

MixedJets curvature(const ConnJets& conn) {
  const int d = conn.dim;
  const int r = conn.rank;
  int order = std::max(0, min_order(conn.a) - 1);
  MixedJets out(d, 0, 2, 0, r * r, order);
  if (conn.zero) return out;
  for (Mask jm : MultiIndex::list(d, 2)) {
    const auto ij = MultiIndex::indices(jm);
    const int i = ij[0], j = ij[1];
    const int jr = MultiIndex::rank(d, jm);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Jet2 acc = conn.at(j, a, b).partial(i) - conn.at(i, a, b).partial(j);
        for (int k = 0; k < r; ++k) {
          acc += conn.at(i, a, k) * conn.at(j, k, b);
          acc -= conn.at(j, a, k) * conn.at(i, k, b);
        }
        out.at(jr, 0, a * r + b) = acc;
      }
  }
  return out;
}

ConnJets end_connection(const ConnJets& conn) {
  const int r = conn.rank;
  const int order = min_order(conn.a);
  ConnJets out = ConnJets::trivial(conn.dim, r * r, order);
  if (conn.zero) return out;
  for (int i = 0; i < conn.dim; ++i)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) {
          // (a,b) <- (c,b): A[a][c];  (a,b) <- (a,c): -A[c][b]
          out.at(i, a * r + b, c * r + b) += conn.at(i, a, c);
          out.at(i, a * r + b, a * r + c) -= conn.at(i, c, b);
        }
  out.refresh();
  return out;
}

ConnJets induced_connection(int q, int m, const ConnJets& conn_e, const ConnJets& conn_a) {
  const int r = conn_e.rank;
  const int nk = binomial(m, q);
  const int dim = conn_e.dim;
  ConnJets out = ConnJets::trivial(dim, nk * r, 2);
  if (!conn_e.zero) {
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < nk; ++k)
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b) out.at(i, k * r + a, k * r + b) = conn_e.at(i, a, b);
  }
  if (!conn_a.zero) {
    for (Mask km : MultiIndex::list(m, q)) {
      const int kr = MultiIndex::rank(m, km);
      int s = 0;
      for (int ks : MultiIndex::indices(km)) {
        const Mask rest = km & ~(Mask{1} << ks);
        const double slot_sign = (s++ & 1) ? -1.0 : 1.0;
        for (int c = 0; c < m; ++c) {
          if (rest & (Mask{1} << c)) continue;
          const double sign = slot_sign * MultiIndex::insert_sign(rest, c);
          const int kr2 = MultiIndex::rank(m, rest | (Mask{1} << c));
          for (int i = 0; i < dim; ++i) {
            const Jet2& bc = conn_a.at(i, c, ks);
            if (bc.is_exact_zero()) continue;
            for (int a = 0; a < r; ++a) out.at(i, kr * r + a, kr2 * r + a) -= sign * bc;
          }
        }
      }
    }
  }
  out.refresh();
  return out;
}

MixedJets iota_rho(int k, const MixedJets& phi, const AlgebroidJets& alg) {
  if (phi.q() != 0) throw std::invalid_argument("iota_rho: form must have only TM slots");
  if (k < 0 || k > phi.p() || k > alg.m) throw std::invalid_argument("iota_rho: k out of range");
  const int d = phi.d();
  const int m = alg.m;
  MixedJets out(d, m, phi.p() - k, k, phi.fiber(), min_order(phi.coeffs()));
  for (Mask km : MultiIndex::list(m, k)) {
    const int kr = MultiIndex::rank(m, km);
    MixedJets t = phi;
    for (int a : MultiIndex::indices(km)) t = interior(alg.anchor[static_cast<std::size_t>(a)], t);
    for (int ir = 0; ir < t.n_tm(); ++ir)
      for (int f = 0; f < phi.fiber(); ++f) out.at(ir, kr, f) = t.at(ir, 0, f);
  }
  return out;
}

MixedJets mixed_eth(const MixedJets& phi, const AlgebroidJets& alg, const ConnJets& conn_e) {
  const int d = phi.d();
  const int m = alg.m;
  const int r = phi.fiber();
  const int p = phi.p();
  if (phi.m() != m) throw std::invalid_argument("mixed_eth: algebroid rank mismatch");
  if (!conn_e.zero && conn_e.rank != r) throw std::invalid_argument("mixed_eth: connection rank does not match fiber");
  const int order = std::max(0, min_order(phi.coeffs()) - 1);
  MixedJets out(d, m, p, phi.q() + 1, r, order);
  if (phi.q() + 1 > m) return out;

  // T^k_{a,j} = sum_c B^c_{a,j} rho^k_c - d_j rho^k_a, only needed with TM slots.
  std::vector<Jet2> torsion;
  if (p > 0) {
    torsion.assign(static_cast<std::size_t>(m * d * d), zero_jet(d, 1));
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          Jet2 t = -alg.anchor[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)].partial(j);
          if (!alg.aconn.zero)
            for (int c = 0; c < m; ++c) t += alg.aconn.at(j, c, a) * alg.anchor[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
          torsion[static_cast<std::size_t>((a * d + j) * d + k)] = t;
        }
  }

  // (ʊ_a eta)_J for eta = phi(.; K) with K of size q.
  auto a_derivative = [&](int a, int kr, int jr, Mask jm, int f) {
    Jet2 acc = zero_jet(d, order);
    const VecJets& rho = alg.anchor[static_cast<std::size_t>(a)];
    for (int k = 0; k < d; ++k) {
      const Jet2& rk = rho[static_cast<std::size_t>(k)];
      if (rk.is_exact_zero()) continue;
      Jet2 t = phi.at(jr, kr, f).partial(k);
      if (!conn_e.zero)
        for (int b = 0; b < r; ++b) {
          const Jet2& ab = conn_e.at(k, f, b);
          if (!ab.is_exact_zero()) t += ab * phi.at(jr, kr, b);
        }
      acc += rk * t;
    }
    int s = 0;
    for (int js : MultiIndex::indices(jm)) {
      const Mask rest = jm & ~(Mask{1} << js);
      const double slot_sign = (s++ & 1) ? -1.0 : 1.0;
      for (int k = 0; k < d; ++k) {
        if (rest & (Mask{1} << k)) continue;
        const Jet2& t = torsion[static_cast<std::size_t>((a * d + js) * d + k)];
        if (t.is_exact_zero()) continue;
        const double sign = slot_sign * MultiIndex::insert_sign(rest, k);
        acc -= sign * (t * phi.at(MultiIndex::rank(d, rest | (Mask{1} << k)), kr, f));
      }
    }
    return acc;
  };

  for (Mask jm : MultiIndex::list(d, p)) {
    const int jr = MultiIndex::rank(d, jm);
    for (Mask km : MultiIndex::list(m, phi.q() + 1)) {
      const int kr = MultiIndex::rank(m, km);
      const auto ks = MultiIndex::indices(km);
      for (int f = 0; f < r; ++f) {
        Jet2 acc = zero_jet(d, order);
        for (std::size_t i = 0; i < ks.size(); ++i) {
          const double sign = (i & 1) ? -1.0 : 1.0;
          const Mask rest = km & ~(Mask{1} << ks[i]);
          acc += sign * a_derivative(ks[i], MultiIndex::rank(m, rest), jr, jm, f);
        }
        for (std::size_t i = 0; i < ks.size(); ++i)
          for (std::size_t j = i + 1; j < ks.size(); ++j) {
            const double sign = ((i + j) & 1) ? -1.0 : 1.0;
            const Mask rest = km & ~(Mask{1} << ks[i]) & ~(Mask{1} << ks[j]);
            for (int c = 0; c < m; ++c) {
              if (rest & (Mask{1} << c)) continue;
              const Jet2& cc = alg.c(ks[i], ks[j], c);
              if (cc.is_exact_zero()) continue;
              const double s2 = sign * MultiIndex::insert_sign(rest, c);
              acc += s2 * (cc * phi.at(jr, MultiIndex::rank(m, rest | (Mask{1} << c)), f));
            }
          }
        out.at(jr, kr, f) = acc;
      }
    }
  }
  return out;
}

VecJets constant_vec(std::span<const double> v, int dim, int order) {
  VecJets out;
  out.reserve(v.size());
  for (double x : v) out.push_back(Jet2::constant(x, dim, order));
  return out;
}

std::vector<double> evaluate(const MixedJets& phi, std::span<const std::vector<double>> tm,
                             std::span<const std::vector<double>> alg) {
  if (static_cast<int>(tm.size()) != phi.p() || static_cast<int>(alg.size()) != phi.q())
    throw std::invalid_argument("evaluate: arity mismatch");
  MixedJets t = truncated(phi, 0);
  for (const auto& v : tm) {
    if (static_cast<int>(v.size()) != phi.d()) throw std::invalid_argument("evaluate: vector dimension mismatch");
    t = interior(constant_vec(v, phi.d(), 0), t);
  }
  for (const auto& a : alg) {
    if (static_cast<int>(a.size()) != phi.m()) throw std::invalid_argument("evaluate: section rank mismatch");
    t = interior_a(constant_vec(a, phi.d(), 0), t);
  }
  std::vector<double> out(static_cast<std::size_t>(phi.fiber()));
  for (int f = 0; f < phi.fiber(); ++f) out[static_cast<std::size_t>(f)] = t.at(0, 0, f).value();
  return out;
}

MixedJets truncated(const MixedJets& phi, int order) {
  MixedJets out = phi;
  for (auto& j : out.coeffs()) j = j.truncated(order);
  return out;
}

}  // namespace plectic
