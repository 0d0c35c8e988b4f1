#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plectic/expr.hpp"
#include "plectic/form.hpp"
#include "plectic/geometry.hpp"

namespace plectic {

/// Which bundle a form takes values in.
enum class BundleKind {
  kE,       // the model bundle E, rank r
  kEnd,     // End E, fiber r*r row-major
  kScalar,  // trivial line bundle
};

std::string to_string(BundleKind k);
BundleKind bundle_kind_from(const std::string& s);

/**
 * A bundle-valued form of bidegree (p, q) given by coefficient functions,
 * indexed like MixedJets: (TM multi-index rank, A multi-index rank, fiber).
 */
struct SymForm {
  int d = 0, m = 0, p = 0, q = 0;
  BundleKind bundle = BundleKind::kE;
  int fiber = 1;
  std::vector<SmoothFunction> coeffs;

  static SymForm zero(int d, int m, int p, int q, BundleKind bundle, int fiber);

  SmoothFunction& at(int tm_rank, int a_rank, int comp) {
    return coeffs[static_cast<std::size_t>((tm_rank * binomial(m, q) + a_rank) * fiber + comp)];
  }
  const SmoothFunction& at(int tm_rank, int a_rank, int comp) const {
    return coeffs[static_cast<std::size_t>((tm_rank * binomial(m, q) + a_rank) * fiber + comp)];
  }
  /// Sets the component on increasing index lists (TM indices, A indices).
  void set(const std::vector<int>& tm, const std::vector<int>& alg, int comp, const std::string& expr);

  MixedJets eval(std::span<const double> x, int order = 2) const;
};

struct AlgebroidModel {
  int m = 0;
  std::vector<SmoothFunction> anchor;     // index a*d + i: rho(e_a)^i
  std::vector<SmoothFunction> structure;  // index (a*m + b)*m + c: c^c_{ab}
  Connection aconn;                       // rank m

  const SmoothFunction& rho(int a, int i) const { return anchor[static_cast<std::size_t>(a * aconn.dim + i)]; }
  const SmoothFunction& c(int a, int b, int cc) const { return structure[static_cast<std::size_t>((a * m + b) * m + cc)]; }
  /// Sets c^c_{ab} and mirrors it into c^c_{ba}.
  void set_bracket(int a, int b, int c, const std::string& expr);
  VectorField anchor_field(int a) const;
  AlgebroidJets eval(std::span<const double> x) const;
};

/// Explicit parametrization of the zero set of a momentum section.
struct ZeroSet {
  int dim = 0;
  Chart params;                             // parameter box (unused when dim == 0)
  std::vector<SmoothFunction> embedding;    // d functions of the parameters
  std::vector<double> point;                // the single point when dim == 0

  std::vector<double> map(std::span<const double> s) const;
};

/// Explicit quotient chart of the zero set with projection, section and the
/// expected reduced form.
struct Quotient {
  int dim = 0;
  Chart chart;
  std::vector<SmoothFunction> projection;  // dim functions on the model chart
  std::vector<SmoothFunction> section;     // d functions on the quotient chart
  SymForm reduced;                         // on the quotient chart
};

struct Model {
  std::string name;
  Chart chart;
  int rank = 1;
  Connection connection;
  std::optional<Metric> metric;
  std::optional<AlgebroidModel> algebroid;
  std::map<std::string, SymForm> forms;
  std::vector<SymForm> momentum;  // mu_0..mu_{n-1}, mu_k of bidegree (k, n-k)
  std::optional<ZeroSet> zero_set;
  std::optional<Quotient> quotient;
  std::vector<std::string> theta;  // names of three scalar 2-forms forming a quaternionic triple

  const SymForm* omega() const;
  /// Degree of omega minus one.
  int plectic_n() const;
  int fiber_rank(BundleKind k) const;

  /// Connection on the fiber of a form of the given kind.
  ConnJets fiber_connection(BundleKind k, std::span<const double> x) const;
  /// Connection on the wide fiber of a (p, q) form (A slots folded in).
  ConnJets wide_connection(const SymForm& shape, std::span<const double> x) const;

  /// Throws std::invalid_argument naming the first inconsistent field.
  void validate() const;
};

}  // namespace plectic
