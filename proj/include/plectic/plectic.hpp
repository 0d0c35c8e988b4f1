#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "plectic/form.hpp"
#include "plectic/linalg.hpp"
#include "plectic/model.hpp"
#include "plectic/report.hpp"

namespace plectic {

class NotPseudoHamiltonian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Degenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix of ω♭ at a point: rows (n-index rank, fiber component), column j
/// holds the coefficients of ι_{∂j} ω.
Eigen::MatrixXd flat_matrix(const MixedJets& omega);

/// Rank of ω♭ (singular values below kRankTol * σ_max are zero).
int nondegeneracy_rank(const MixedJets& omega);

struct PHamSolve {
  VecJets x;  // order-1 jets: value and Jacobian of X_φ
  double residual = 0.0;
  int rank = 0;
};

/// Solves ω♭ X = dphi in least squares, with the Jacobian of X from
/// ω♭ ∂_k X = ∂_k dphi - (∂_k ω♭) X. dphi is d^E φ with jets of order ≥ 1.
/// Throws Degenerate if ω♭ is not injective (when required) and
/// NotPseudoHamiltonian if the residual exceeds tol.
PHamSolve solve_pham(const MixedJets& omega, const MixedJets& dphi, double tol, LsqMethod method = LsqMethod::kSvd,
                     bool require_injective = true);
PHamSolve solve_pham(const Model& model, const SymForm& phi, std::span<const double> x, double tol,
                     LsqMethod method = LsqMethod::kSvd);

/// μ^{e_a} for a form with one A slot, as a form without A slots.
SymForm pair_frame(const SymForm& mu, int a);

/// {φ, ψ} = ι_{X_ψ} ι_{X_φ} ω.
MixedJets pham_bracket(const MixedJets& omega, const VecJets& x_phi, const VecJets& x_psi);

/// ι_{[X_ψ,X_φ]} ω - d^E{φ,ψ} - ι_{X_ψ}(R ∧ φ) + ι_{X_φ}(R ∧ ψ) over random points.
Report hamlemma_residual(const Model& model, const SymForm& phi, const SymForm& psi, int samples, std::uint64_t seed,
                         double tol);

/// Closedness of ω under d^E and the rank of ω♭ over random points.
Report plectic_structure(const Model& model, int samples, std::uint64_t seed, double tol);

/// Per-bidegree residuals of (d∇ + ð)μ = Σ_k (-1)^(n-k) ι^(n+1-k)_ρ ω, on frames
/// and on random vectors.
Report hms_defect(const Model& model, const std::vector<SymForm>& momentum, int samples, std::uint64_t seed,
                  double tol, const std::string& label = {});

/// Compatibility of μ_{n-1} with A on frame sections: (i) ι_α d∇ μ - d^E μ^α,
/// (ii) Σ_i (-1)^(i+1) μ^{∇_{X_i} α}(..), and (i) + (ii) on random sections.
Report compatibility_defect(const Model& model, int samples, std::uint64_t seed, double tol);

/// |μ^{[α,β]} + ω(ρα, ρβ)| on frame pairs. Needs n = 1.
Report antihom_residual(const Model& model, int samples, std::uint64_t seed, double tol);

/// Jacobi sum of the bracket on Γ_μ(E) for frame triples, the step
/// ∇_{ργ} ω(ρα,ρβ) = -ω(ρ[α,β], ργ) and d^E ω(ρα,ρβ,ργ) = 2 (Jacobi sum).
Report jacobi_residual(const Model& model, int samples, std::uint64_t seed, double tol);

/// Θ = Σ ω_i ⊗ ω_i as a rank-3 bundle-valued 2-form and Θ^∧ = Σ ω_i ∧ ω_i.
struct ThetaJets {
  MixedJets theta;
  MixedJets wedge4;
};
ThetaJets build_theta(const MixedJets& w1, const MixedJets& w2, const MixedJets& w3);

/// The Levi-Civita connection restricted to Q = span(ω_1, ω_2, ω_3) in the
/// frame ω_i (value level), and the size of the part of ∇ω_i leaving Q.
struct QConnection {
  ConnJets conn;
  double leak = 0.0;
};
QConnection q_connection(const Model& model, std::span<const double> x);

/// f_V ∈ Γ(Q) with ∇f_V = Θ_V for a Killing field V, as quadratic
/// polynomials fitted by collocation. Throws std::runtime_error if no
/// quadratic solution exists.
std::vector<SmoothFunction> solve_gl_momentum(const Model& model, const VectorField& v, std::uint64_t seed = 1);

/// Galicki-Lawson residuals for the frame fields V_a of `killing` with
/// f_a = f(e_a): (i) ∇f_V - Θ_V, (ii) f_{[V_a,V_b]} + Σ ω_i(V_a,V_b) ω_i.
/// With expect_violation the bracket condition is reported with a ≥ comparator.
Report gl_residual(const Model& model, const AlgebroidModel& killing, const SymForm& f, int samples,
                   std::uint64_t seed, double tol, const std::string& label, bool expect_violation = false);

/// Θ closedness, dΘ^∧, rank of Θ, the Killing property of the model's
/// anchors and the Galicki-Lawson checks for them and for two translations.
Report quaternionic_suite(const Model& model, int samples, std::uint64_t seed, double tol);

}  // namespace plectic
