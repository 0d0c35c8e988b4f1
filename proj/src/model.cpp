#include "plectic/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plectic {

std::string to_string(BundleKind k) {
  switch (k) {
    case BundleKind::kE:
      return "E";
    case BundleKind::kEnd:
      return "End";
    case BundleKind::kScalar:
      return "scalar";
  }
  return "E";
}

BundleKind bundle_kind_from(const std::string& s) {
  if (s == "E") return BundleKind::kE;
  if (s == "End") return BundleKind::kEnd;
  if (s == "scalar") return BundleKind::kScalar;
  throw std::invalid_argument("unknown bundle kind '" + s + "'");
}

SymForm SymForm::zero(int d, int m, int p, int q, BundleKind bundle, int fiber) {
  SymForm f;
  f.d = d;
  f.m = m;
  f.p = p;
  f.q = q;
  f.bundle = bundle;
  f.fiber = fiber;
  f.coeffs.assign(static_cast<std::size_t>(binomial(d, p) * binomial(m, q) * fiber), SmoothFunction::constant(0.0, d));
  return f;
}

void SymForm::set(const std::vector<int>& tm, const std::vector<int>& alg, int comp, const std::string& expr) {
  MultiIndex::Mask tmask = 0, amask = 0;
  for (int i : tm) tmask |= MultiIndex::Mask{1} << i;
  for (int a : alg) amask |= MultiIndex::Mask{1} << a;
  if (static_cast<int>(tm.size()) != p || static_cast<int>(alg.size()) != q || std::popcount(tmask) != p ||
      std::popcount(amask) != q)
    throw std::invalid_argument("form index does not match the bidegree");
  at(MultiIndex::rank(d, tmask), MultiIndex::rank(m, amask), comp) = SmoothFunction::parse(expr, d);
}

MixedJets SymForm::eval(std::span<const double> x, int order) const {
  MixedJets out(d, m, p, q, fiber, order);
  const VecJets v = eval_all(coeffs, x, order);
  for (std::size_t i = 0; i < v.size(); ++i) out.coeffs()[i] = v[i];
  return out;
}

void AlgebroidModel::set_bracket(int a, int b, int c, const std::string& expr) {
  const int d = aconn.dim;
  structure[static_cast<std::size_t>((a * m + b) * m + c)] = SmoothFunction::parse(expr, d);
  structure[static_cast<std::size_t>((b * m + a) * m + c)] = SmoothFunction::parse("-(" + expr + ")", d);
}

VectorField AlgebroidModel::anchor_field(int a) const {
  VectorField v;
  for (int i = 0; i < aconn.dim; ++i) v.comp.push_back(rho(a, i));
  return v;
}

AlgebroidJets AlgebroidModel::eval(std::span<const double> x) const {
  AlgebroidJets j;
  j.m = m;
  const int d = aconn.dim;
  const VecJets rho = eval_all(anchor, x);
  for (int a = 0; a < m; ++a)
    j.anchor.emplace_back(rho.begin() + a * d, rho.begin() + (a + 1) * d);
  j.structure = eval_all(structure, x);
  j.aconn = aconn.eval(x);
  return j;
}

std::vector<double> ZeroSet::map(std::span<const double> s) const {
  if (dim == 0) return point;
  std::vector<double> x;
  for (const auto& f : embedding) x.push_back(f.eval(s));
  return x;
}

const SymForm* Model::omega() const {
  const auto it = forms.find("omega");
  return it == forms.end() ? nullptr : &it->second;
}

int Model::plectic_n() const {
  const SymForm* w = omega();
  return w ? w->p - 1 : 0;
}

int Model::fiber_rank(BundleKind k) const {
  switch (k) {
    case BundleKind::kE:
      return rank;
    case BundleKind::kEnd:
      return rank * rank;
    case BundleKind::kScalar:
      return 1;
  }
  return rank;
}

ConnJets Model::fiber_connection(BundleKind k, std::span<const double> x) const {
  switch (k) {
    case BundleKind::kE:
      return connection.eval(x);
    case BundleKind::kEnd:
      return end_connection(connection.eval(x));
    case BundleKind::kScalar:
      break;
  }
  return ConnJets::trivial(chart.dim, 1);
}

ConnJets Model::wide_connection(const SymForm& shape, std::span<const double> x) const {
  ConnJets fc = fiber_connection(shape.bundle, x);
  if (shape.q == 0) return fc;
  if (!algebroid) throw std::invalid_argument("mixed form on a model without algebroid");
  return induced_connection(shape.q, algebroid->m, fc, algebroid->aconn.eval(x));
}

void Model::validate() const {
  chart.validate();
  const int d = chart.dim;
  if (rank < 1) throw std::invalid_argument("bundle.rank must be positive");
  if (connection.dim != d || connection.rank != rank ||
      static_cast<int>(connection.a.size()) != d * rank * rank)
    throw std::invalid_argument("bundle.connection has the wrong shape");
  if (metric && (metric->dim != d || static_cast<int>(metric->g.size()) != d * d))
    throw std::invalid_argument("metric has the wrong shape");
  int m = 0;
  if (algebroid) {
    m = algebroid->m;
    if (m < 1 || m > kMaxDim) throw std::invalid_argument("algebroid.rank out of range");
    if (static_cast<int>(algebroid->anchor.size()) != m * d) throw std::invalid_argument("algebroid.anchor has the wrong shape");
    if (static_cast<int>(algebroid->structure.size()) != m * m * m)
      throw std::invalid_argument("algebroid.structure has the wrong shape");
    Sampler probe(0);
    for (int s = 0; s < 5; ++s) {
      const auto x = probe.point(chart);
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
          for (int c = 0; c < m; ++c) {
            const double sum = algebroid->c(a, b, c).eval(x) + algebroid->c(b, a, c).eval(x);
            if (std::abs(sum) > 1e-12)
              throw std::invalid_argument("algebroid.structure is not antisymmetric at [" + std::to_string(a) + "][" +
                                          std::to_string(b) + "][" + std::to_string(c) + "]");
          }
    }
    if (algebroid->aconn.dim != d || algebroid->aconn.rank != m ||
        static_cast<int>(algebroid->aconn.a.size()) != d * m * m)
      throw std::invalid_argument("algebroid.aconn has the wrong shape");
  }
  auto check_form = [&](const std::string& name, const SymForm& f) {
    if (f.d != d) throw std::invalid_argument("forms." + name + " lives on a different chart");
    if (f.q > 0 && !algebroid) throw std::invalid_argument("forms." + name + " has algebroid slots but no algebroid");
    if (f.q > 0 && f.m != m) throw std::invalid_argument("forms." + name + " has the wrong algebroid rank");
    if (f.p > d || f.q > std::max(m, f.m)) throw std::invalid_argument("forms." + name + " degree exceeds dimension");
    if (f.fiber != fiber_rank(f.bundle)) throw std::invalid_argument("forms." + name + " fiber does not match its bundle");
    if (static_cast<int>(f.coeffs.size()) != binomial(d, f.p) * binomial(f.m, f.q) * f.fiber)
      throw std::invalid_argument("forms." + name + " has the wrong number of coefficients");
  };
  for (const auto& [name, f] : forms) check_form(name, f);
  for (std::size_t k = 0; k < momentum.size(); ++k) {
    check_form("momentum[" + std::to_string(k) + "]", momentum[k]);
    const int n = plectic_n();
    if (momentum[k].p != static_cast<int>(k) || momentum[k].q != n - static_cast<int>(k))
      throw std::invalid_argument("momentum[" + std::to_string(k) + "] has the wrong bidegree");
  }
  if (!momentum.empty() && !algebroid) throw std::invalid_argument("momentum section requires an algebroid");
  if (!momentum.empty() && static_cast<int>(momentum.size()) != plectic_n())
    throw std::invalid_argument("momentum must list mu_0..mu_{n-1}");
  if (zero_set) {
    if (zero_set->dim == 0 && static_cast<int>(zero_set->point.size()) != d)
      throw std::invalid_argument("zero_set.point has the wrong length");
    if (zero_set->dim > 0 && static_cast<int>(zero_set->embedding.size()) != d)
      throw std::invalid_argument("zero_set.embedding needs d functions");
  }
  if (quotient) {
    if (static_cast<int>(quotient->projection.size()) != quotient->dim)
      throw std::invalid_argument("quotient.projection needs one function per quotient coordinate");
    if (static_cast<int>(quotient->section.size()) != d) throw std::invalid_argument("quotient.section needs d functions");
  }
  for (const auto& t : theta)
    if (!forms.count(t)) throw std::invalid_argument("theta names unknown form '" + t + "'");
}

}  // namespace plectic
