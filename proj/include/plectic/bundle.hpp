#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plectic/geometry.hpp"
#include "plectic/model.hpp"
#include "plectic/report.hpp"

namespace plectic {

// Random test objects (polynomial coefficients uniform in [-1, 1]).
SmoothFunction random_polynomial(int dim, int degree, Sampler& rng);
VectorField random_field(int dim, int degree, Sampler& rng);
SymForm random_form(int d, int p, BundleKind bundle, int fiber, int degree, Sampler& rng);

/// Value of phi at x on the given tangent vectors.
std::vector<double> eval_form(const SymForm& phi, std::span<const double> x,
                              std::span<const std::vector<double>> vectors);

MixedJets cov_ext_deriv(const Model& model, const SymForm& phi, std::span<const double> x);

/// The invariant formula for d^E on arbitrary vector fields:
/// sum_i (-1)^i ∇_{X_i}(phi(..X̂_i..)) + sum_{i<j} (-1)^{i+j} phi([X_i,X_j], ..).
std::vector<double> cov_ext_deriv_invariant(const MixedJets& phi, const ConnJets& conn,
                                            std::span<const VecJets> fields);

/// Curvature of the model bundle as an End E-valued 2-form.
MixedJets curvature(const Model& model, std::span<const double> x);

MixedJets cov_lie_derivative(const Model& model, const VectorField& x_field, const SymForm& phi,
                             std::span<const double> x);

/// ω̃(v_1..v_n) = ω(v_1, .., v_n, ·) as a T*M-valued n-form (fiber index = covector slot).
MixedJets tilde_form(const MixedJets& omega);

/// (∇^g ω)(X_0..X_n)(Y) = (∇^g_Y ω)(X_0..X_n) as a T*M-valued form.
MixedJets metric_derivative(const MixedJets& omega, const Christoffel& gamma);

enum class Identity {
  kCartan1,
  kCartan2,
  kCartan3,
  kDSquared,
  kBianchi,
  kTilde,
  kFlatCommute,
  kCoefficientVsInvariant,
};

std::string to_string(Identity id);

/// Max-norm residual of one identity over random points, fields and test
/// forms (every form of the model plus random E-valued forms of each degree).
Report identity_residual(Identity id, const Model& model, int samples, std::uint64_t seed, double tol);

}  // namespace plectic
