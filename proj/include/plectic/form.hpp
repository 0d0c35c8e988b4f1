#pragma once

#include <span>
#include <vector>

#include "plectic/jet.hpp"
#include "plectic/multi_index.hpp"

namespace plectic {

/// Components of a vector field (or of a section) at a point, as jets.
using VecJets = std::vector<Jet2>;

/**
 * Jets of a connection on a trivialized bundle of rank F at one point:
 * for every chart direction i an F x F matrix with
 * nabla_{d/dx_i} e_b = sum_a at(i, a, b) e_a.
 */
struct ConnJets {
  int dim = 0;
  int rank = 0;
  bool zero = true;
  std::vector<Jet2> a;

  static ConnJets trivial(int dim, int rank, int order = 2);

  const Jet2& at(int i, int row, int col) const {
    return a[static_cast<std::size_t>((i * rank + row) * rank + col)];
  }
  Jet2& at(int i, int row, int col) { return a[static_cast<std::size_t>((i * rank + row) * rank + col)]; }

  /// Recomputes the `zero` flag from the entries.
  void refresh();
};

/**
 * Pointwise jets of a bundle-valued form of bidegree (p, q): p alternating
 * slots on TM (over d coordinates) and q alternating slots on an algebroid
 * of rank m, with `fiber` components. q = 0 gives an ordinary E-valued
 * form, p = 0 an A-form.
 *
 * Coefficients are stored for increasing multi-indices only, ordered by
 * (TM index rank, A index rank, fiber component).
 */
class MixedJets {
 public:
  MixedJets() = default;
  MixedJets(int d, int m, int p, int q, int fiber, int order = 2);

  int d() const { return d_; }
  int m() const { return m_; }
  int p() const { return p_; }
  int q() const { return q_; }
  int fiber() const { return fiber_; }
  int n_tm() const { return n_tm_; }
  int n_a() const { return n_a_; }
  /// Fiber size when the A slots are folded into the fiber.
  int wide_fiber() const { return n_a_ * fiber_; }

  Jet2& at(int tm_rank, int a_rank, int comp) { return c_[index(tm_rank, a_rank, comp)]; }
  const Jet2& at(int tm_rank, int a_rank, int comp) const { return c_[index(tm_rank, a_rank, comp)]; }

  /// Access with the A slots folded into the fiber.
  Jet2& wide(int tm_rank, int f) { return c_[static_cast<std::size_t>(tm_rank * wide_fiber() + f)]; }
  const Jet2& wide(int tm_rank, int f) const { return c_[static_cast<std::size_t>(tm_rank * wide_fiber() + f)]; }

  std::vector<Jet2>& coeffs() { return c_; }
  const std::vector<Jet2>& coeffs() const { return c_; }

  bool same_shape(const MixedJets& o) const {
    return d_ == o.d_ && m_ == o.m_ && p_ == o.p_ && q_ == o.q_ && fiber_ == o.fiber_;
  }

  MixedJets& operator+=(const MixedJets& o);
  MixedJets& operator-=(const MixedJets& o);
  MixedJets& operator*=(double s);
  friend MixedJets operator+(MixedJets a, const MixedJets& b) { return a += b; }
  friend MixedJets operator-(MixedJets a, const MixedJets& b) { return a -= b; }
  friend MixedJets operator*(double s, MixedJets a) { return a *= s; }

  /// Largest absolute coefficient value.
  double max_abs() const;

 private:
  std::size_t index(int tm_rank, int a_rank, int comp) const {
    return static_cast<std::size_t>((tm_rank * n_a_ + a_rank) * fiber_ + comp);
  }

  int d_ = 0, m_ = 0, p_ = 0, q_ = 0, fiber_ = 1;
  int n_tm_ = 1, n_a_ = 1;
  std::vector<Jet2> c_;
};

double max_abs_diff(const MixedJets& a, const MixedJets& b);

/// Pointwise jets of a Lie algebroid: anchor rows, structure functions
/// c^c_{ab} (index (a*m+b)*m+c) and the connection on A.
struct AlgebroidJets {
  int m = 0;
  std::vector<VecJets> anchor;
  std::vector<Jet2> structure;
  ConnJets aconn;

  const Jet2& c(int a, int b, int cc) const { return structure[static_cast<std::size_t>((a * m + b) * m + cc)]; }
};

/// [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k.
VecJets lie_bracket(const VecJets& x, const VecJets& y);

/// Covariant exterior derivative on the TM slots; A slots are folded into
/// the fiber, so `conn` has rank wide_fiber().
MixedJets d_cov(const MixedJets& phi, const ConnJets& conn);

/// Contraction of a vector into the first TM slot.
MixedJets interior(const VecJets& x, const MixedJets& phi);

/// Contraction of an algebroid section (frame coefficients) into the first A slot.
MixedJets interior_a(const VecJets& alpha, const MixedJets& phi);

/// Wedge of a scalar form (on the left) with phi. Both must have only TM
/// slots, in which case A slots of phi ride along in the fiber, or both
/// only A slots.
MixedJets wedge(const MixedJets& eta, const MixedJets& phi);

/// R ∧ phi for an End-valued form R (fiber G*G, row-major) acting on the
/// wide fiber G of phi.
MixedJets end_wedge(const MixedJets& r, const MixedJets& phi);

/// Covariant Lie derivative along x on the TM slots.
MixedJets lie_derivative(const VecJets& x, const MixedJets& phi, const ConnJets& conn);

/// R_{ij} = d_i A_j - d_j A_i + [A_i, A_j] as an End-valued 2-form.
MixedJets curvature(const ConnJets& conn);

/// The connection induced on End of a bundle.
ConnJets end_connection(const ConnJets& conn);

/// The connection on Λ^q A* ⊗ E induced by nabla^A and nabla^E, on the wide fiber.
ConnJets induced_connection(int q, int m, const ConnJets& conn_e, const ConnJets& conn_a);

/// (ι^k_ρ phi)(a1..ak) = phi(ρ a1, .., ρ ak, ...) for a form with only TM slots.
MixedJets iota_rho(int k, const MixedJets& phi, const AlgebroidJets& alg);

/// A-covariant exterior derivative raising q by one; the A-connection on the
/// TM slots is the one induced by nabla^A and the bracket with anchored fields.
MixedJets mixed_eth(const MixedJets& phi, const AlgebroidJets& alg, const ConnJets& conn_e);

/// Values of phi on the given vectors (TM vectors fill the TM slots first).
std::vector<double> evaluate(const MixedJets& phi, std::span<const std::vector<double>> tm,
                             std::span<const std::vector<double>> alg);

/// Constant jets from plain numbers.
VecJets constant_vec(std::span<const double> v, int dim, int order = 2);

/// All coefficients truncated to the given order.
MixedJets truncated(const MixedJets& phi, int order);

}  // namespace plectic
