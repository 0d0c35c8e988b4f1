#include "plectic/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "plectic/linalg.hpp"

namespace plectic {

Chart Chart::box(int dim, double lo, double hi) {
  Chart c;
  c.dim = dim;
  c.lo.assign(static_cast<std::size_t>(dim), lo);
  c.hi.assign(static_cast<std::size_t>(dim), hi);
  c.periodic.assign(static_cast<std::size_t>(dim), false);
  return c;
}

void Chart::validate() const {
  if (dim <= 0 || dim > kMaxDim) throw std::invalid_argument("chart dimension out of range");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim ||
      static_cast<int>(periodic.size()) != dim)
    throw std::invalid_argument("chart box or periodic flags have the wrong length");
  for (int i = 0; i < dim; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (!(lo[u] < hi[u])) throw std::invalid_argument("empty box in coordinate " + std::to_string(i));
    if (periodic[u] && std::abs(hi[u] - lo[u] - 2 * std::numbers::pi) > 1e-12)
      throw std::invalid_argument("periodic coordinate " + std::to_string(i) + " must span 2*pi");
  }
}

bool Chart::contains(std::span<const double> x, double slack) const {
  for (int i = 0; i < dim; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (periodic[u]) continue;
    if (x[u] < lo[u] - slack || x[u] > hi[u] + slack) return false;
  }
  return true;
}

void Chart::wrap(std::vector<double>& x) const {
  for (int i = 0; i < dim; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (!periodic[u]) continue;
    const double len = hi[u] - lo[u];
    double t = std::fmod(x[u] - lo[u], len);
    if (t < 0) t += len;
    x[u] = lo[u] + t;
  }
}

VecJets eval_all(const std::vector<SmoothFunction>& fs, std::span<const double> x, int order) {
  VecJets out;
  out.reserve(fs.size());
  const int d = static_cast<int>(x.size());
  std::array<Jet2, kMaxDim> vars;
  for (int i = 0; i < d; ++i) vars[static_cast<std::size_t>(i)] = Jet2::variable(x[static_cast<std::size_t>(i)], i, d, order);
  const std::span<const Jet2> in(vars.data(), static_cast<std::size_t>(d));
  for (const auto& f : fs) out.push_back(f.is_zero() ? Jet2::constant(0.0, d, order) : f.eval(in));
  return out;
}

VectorField VectorField::parse(const std::vector<std::string>& src, int dim) {
  if (static_cast<int>(src.size()) != dim) throw std::invalid_argument("vector field needs one component per coordinate");
  VectorField v;
  for (const auto& s : src) v.comp.push_back(SmoothFunction::parse(s, dim));
  return v;
}

VecJets lie_bracket(const VectorField& x, const VectorField& y, std::span<const double> at) {
  if (x.dim() != y.dim()) throw std::invalid_argument("lie_bracket: fields live on different charts");
  return lie_bracket(x.eval(at), y.eval(at));
}

Metric Metric::parse(const std::vector<std::vector<std::string>>& rows, int dim) {
  if (static_cast<int>(rows.size()) != dim) throw std::invalid_argument("metric needs d rows");
  Metric m;
  m.dim = dim;
  m.g.resize(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim)
      throw std::invalid_argument("metric row " + std::to_string(i) + " needs d entries");
    for (int j = 0; j < dim; ++j)
      m.g[static_cast<std::size_t>(i * dim + j)] =
          SmoothFunction::parse(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], dim);
  }
  return m;
}

Metric Metric::euclidean(int dim) {
  Metric m;
  m.dim = dim;
  m.g.resize(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m.g[static_cast<std::size_t>(i * dim + j)] = SmoothFunction::constant(i == j ? 1.0 : 0.0, dim);
  return m;
}

std::vector<Jet2> Metric::eval(std::span<const double> x) const {
  std::vector<SmoothFunction> full;
  full.reserve(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) full.push_back(entry(i, j));
  VecJets gj = eval_all(full, x);
  Eigen::MatrixXd v(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) v(i, j) = gj[static_cast<std::size_t>(i * dim + j)].value();
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() != Eigen::Success) throw std::domain_error("metric is not positive definite at sample point");
  return gj;
}

Connection Connection::trivial(int dim, int rank) {
  Connection c;
  c.dim = dim;
  c.rank = rank;
  c.a.assign(static_cast<std::size_t>(dim * rank * rank), SmoothFunction::constant(0.0, dim));
  return c;
}

bool Connection::is_trivial() const {
  for (const auto& f : a)
    if (!f.is_zero()) return false;
  return true;
}

ConnJets Connection::eval(std::span<const double> x) const {
  ConnJets c;
  c.dim = dim;
  c.rank = rank;
  c.a = eval_all(a, x);
  c.refresh();
  return c;
}

Christoffel christoffel(const Metric& g, std::span<const double> x) {
  const int d = g.dim;
  const auto gj = g.eval(x);
  std::vector<Jet2> ginv;
  try {
    ginv = jet_inverse(gj, d);
  } catch (const std::domain_error&) {
    throw std::domain_error("singular metric at sample point");
  }
  auto G = [&](int i, int j) -> const Jet2& { return gj[static_cast<std::size_t>(i * d + j)]; };
  Christoffel c;
  c.dim = d;
  c.gamma.assign(static_cast<std::size_t>(d * d * d), Jet2::constant(0.0, d, 1));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Jet2 acc = Jet2::constant(0.0, d, 1);
        for (int l = 0; l < d; ++l) {
          const Jet2& gi = ginv[static_cast<std::size_t>(k * d + l)];
          acc += gi * (G(j, l).partial(i) + G(i, l).partial(j) - G(i, j).partial(l));
        }
        acc *= 0.5;
        c.gamma[static_cast<std::size_t>((k * d + i) * d + j)] = acc;
        c.gamma[static_cast<std::size_t>((k * d + j) * d + i)] = acc;
      }
  return c;
}

ConnJets tangent_connection(const Christoffel& c) {
  const int d = c.dim;
  ConnJets out = ConnJets::trivial(d, d, 1);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.at(i, a, b) = c.at(a, i, b);
  out.refresh();
  return out;
}

ConnJets cotangent_connection(const Christoffel& c) {
  const int d = c.dim;
  ConnJets out = ConnJets::trivial(d, d, 1);
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out.at(k, a, b) = -c.at(b, k, a);
  out.refresh();
  return out;
}

std::vector<double> Sampler::point(const Chart& chart, double margin) {
  std::vector<double> x(static_cast<std::size_t>(chart.dim));
  for (int i = 0; i < chart.dim; ++i) {
    const auto u = static_cast<std::size_t>(i);
    x[u] = uniform(chart.lo[u] + margin, chart.hi[u] - margin);
  }
  return x;
}

std::vector<double> Sampler::vector(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& e : v) e = uniform(-1.0, 1.0);
  return v;
}

}  // namespace plectic
