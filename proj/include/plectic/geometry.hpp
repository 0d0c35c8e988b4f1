#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "plectic/expr.hpp"
#include "plectic/form.hpp"

namespace plectic {

/// The single chart of a model: a box in R^d, some coordinates periodic.
struct Chart {
  int dim = 0;
  std::vector<double> lo, hi;
  std::vector<bool> periodic;

  static Chart box(int dim, double lo, double hi);

  /// Throws std::invalid_argument unless the box is nonempty and periodic
  /// coordinates span exactly 2π.
  void validate() const;

  bool contains(std::span<const double> x, double slack = 0.0) const;

  /// Wraps periodic coordinates into the box; other coordinates untouched.
  void wrap(std::vector<double>& x) const;
};

/// Evaluates a list of functions sharing a chart to jets.
VecJets eval_all(const std::vector<SmoothFunction>& fs, std::span<const double> x, int order = 2);

struct VectorField {
  std::vector<SmoothFunction> comp;

  static VectorField parse(const std::vector<std::string>& src, int dim);
  int dim() const { return static_cast<int>(comp.size()); }
  VecJets eval(std::span<const double> x, int order = 2) const { return eval_all(comp, x, order); }
};

/// Pointwise [X, Y] with components evaluated through jets.
VecJets lie_bracket(const VectorField& x, const VectorField& y, std::span<const double> at);

/// Riemannian metric, d x d; only the upper triangle is read, so g is
/// symmetric by construction.
struct Metric {
  int dim = 0;
  std::vector<SmoothFunction> g;

  static Metric parse(const std::vector<std::vector<std::string>>& rows, int dim);
  static Metric euclidean(int dim);

  const SmoothFunction& entry(int i, int j) const {
    return i <= j ? g[static_cast<std::size_t>(i * dim + j)] : g[static_cast<std::size_t>(j * dim + i)];
  }

  /// Jets of g_ij (row-major). Throws std::domain_error when g is not
  /// positive definite at x.
  std::vector<Jet2> eval(std::span<const double> x) const;
};

/// Connection coefficients A^a_{b,i} as functions: nabla_{d/dx_i} e_b = sum_a A^a_{b,i} e_a.
struct Connection {
  int dim = 0;
  int rank = 0;
  std::vector<SmoothFunction> a;  // index (i*rank + a)*rank + b

  static Connection trivial(int dim, int rank);
  bool is_trivial() const;
  const SmoothFunction& coeff(int i, int row, int col) const {
    return a[static_cast<std::size_t>((i * rank + row) * rank + col)];
  }
  SmoothFunction& coeff(int i, int row, int col) { return a[static_cast<std::size_t>((i * rank + row) * rank + col)]; }

  ConnJets eval(std::span<const double> x) const;
};

/// Christoffel symbols Γ^k_{ij} at a point (jets one order below the metric).
struct Christoffel {
  int dim = 0;
  std::vector<Jet2> gamma;  // index (k*dim + i)*dim + j

  const Jet2& at(int k, int i, int j) const { return gamma[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
};

Christoffel christoffel(const Metric& g, std::span<const double> x);

/// Levi-Civita connection on TM in the ConnJets convention.
ConnJets tangent_connection(const Christoffel& c);

/// Its dual on T*M (frame dx^b): A^a_{b,k} = -Γ^b_{ka}.
ConnJets cotangent_connection(const Christoffel& c);

/// Deterministic source of sample points and vectors.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform point in the chart box shrunk by `margin` on each side.
  std::vector<double> point(const Chart& chart, double margin = 0.0);
  std::vector<double> vector(int n);
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace plectic
