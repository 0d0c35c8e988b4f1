#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "plectic/geometry.hpp"
#include "plectic/model.hpp"
#include "plectic/report.hpp"

namespace plectic {

inline constexpr double kFlowStep = 1e-3;

struct FlowResult {
  std::vector<double> x;
  Eigen::MatrixXd jacobian;  // DF, identity when not requested
};

/// Classical RK4 with fixed step ≤ h_max, optionally with the variational
/// equation for DF. Periodic coordinates are wrapped after every step.
/// Throws std::domain_error if the trajectory leaves the chart box in a
/// non-periodic direction.
FlowResult flow(const VectorField& field, const Chart& chart, std::span<const double> x0, double t,
                bool variational = false, double h_max = kFlowStep);

/// Basis (columns) of {u : ω(u, w_j) = 0 for all j and fiber components}.
Eigen::MatrixXd omega_orthogonal(const MixedJets& omega, const Eigen::MatrixXd& w);

struct Membership {
  bool member = false;
  double residual = 0.0;    // max |μ^a_f(x)|
  Eigen::MatrixXd tangent;  // orthonormal columns
};

/// μ = 0 test for the degree-0 momentum component. The tangent basis comes
/// from the catalog parametrization when params is given, otherwise from
/// the null space of the stacked Jacobian of the components.
Membership zero_set_membership(const Model& model, std::span<const double> x, double tol,
                               const std::vector<double>* params = nullptr);

/// Zero-set point for catalog parameters (or the isolated point).
std::vector<double> zero_set_point(const Model& model, std::span<const double> params);
/// Random parameters in the zero-set parameter box (empty for an isolated point).
std::vector<double> random_params(const Model& model, Sampler& rng);

struct Transversality {
  int tangent_rank = 0;
  int sum_rank = 0;
  int dim = 0;
  bool satisfied() const { return sum_rank == dim; }
};

/// Rank of [T_z M_μ | Im ρ_z]. Throws std::invalid_argument if z ∉ M_μ.
Transversality transversality_check(const Model& model, std::span<const double> params, double tol = 1e-10);

enum class OrbitMode { kMu, kRho0 };

struct FlowWord {
  std::vector<std::pair<std::vector<double>, double>> steps;  // (frame coefficients, time)
};

struct OrbitSample {
  std::vector<double> z;
  std::vector<FlowWord> words;
  std::vector<std::vector<double>> endpoints;
  double membership = 0.0;  // max |μ| over endpoints
};

/// Random flow words of anchored constant sections. In kMu mode the
/// sections are drawn from A_μ = {a : ρ(a) ∈ T_z M_μ}.
OrbitSample orbit_sample(const Model& model, std::span<const double> z, OrbitMode mode, int words,
                         std::uint64_t seed, int max_length = 3, double max_time = 0.5);

/// Applies a flow word, composing the differentials.
FlowResult apply_word(const Model& model, const FlowWord& word, std::span<const double> z, bool variational);

/// max |(F*ω)_z - ω_z| over coordinate pairs.
double form_invariance(const SymForm& omega, const Chart& chart, const FlowResult& f, std::span<const double> z);
/// max |s(F(z)) - s(z)|.
double function_invariance(const std::vector<SmoothFunction>& s, const FlowResult& f, std::span<const double> z);

struct ReducedValue {
  std::vector<double> value;
  double cross_residual = 0.0;
};

/// ω_z(u, v), and |ω_z(u,v) - ω_z'(u',v')| when a second representative is given.
ReducedValue reduced_form(const Model& model, std::span<const double> z, std::span<const double> u,
                          std::span<const double> v, std::span<const double> z2 = {}, std::span<const double> u2 = {},
                          std::span<const double> v2 = {}, double tol = 1e-8);

/// X_z s through jets, with the cross-representative residual. Throws
/// std::invalid_argument if s is not invariant under `orbit`.
ReducedValue reduced_connection_eval(const Model& model, const std::vector<SmoothFunction>& s,
                                     std::span<const double> z, std::span<const double> u, const OrbitSample& orbit,
                                     std::span<const double> z2 = {}, std::span<const double> u2 = {},
                                     double tol = 1e-8);

/// (i) max |∇_u μ| and (ii) max |ω_z(u, ρ(e_a))| over the given tangent vectors.
std::pair<double, double> subspace_lemma_residuals(const Model& model, std::span<const double> z,
                                                   const Eigen::MatrixXd& tangent);

/// Pullback of a TM form along a map given by functions on another chart, as jets.
MixedJets pullback(const SymForm& form, const std::vector<SmoothFunction>& map, std::span<const double> q);

/// Zero set, transversality, orbit invariance, subspace lemma and the reduced
/// form and connection on the explicit quotient chart.
Report reduction_suite(const Model& model, int samples, std::uint64_t seed, double tol);

}  // namespace plectic
