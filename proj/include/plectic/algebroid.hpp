#pragma once

#include <cstdint>
#include <span>

#include "plectic/form.hpp"
#include "plectic/geometry.hpp"
#include "plectic/model.hpp"
#include "plectic/report.hpp"

namespace plectic {

/// max_k |ρ([e_a,e_b])^k - [ρ e_a, ρ e_b]^k| over all frame pairs.
double anchor_morphism_defect(const AlgebroidJets& alg);

/// Cyclic sum of [[e_a,e_b],e_c] with the bracket extended by Leibniz,
/// max over frame triples and components.
double jacobi_defect(const AlgebroidJets& alg);

/// Anchor morphism and Jacobi residuals over random chart points.
Report validate(const AlgebroidModel& alg, const Chart& chart, const std::string& model_name, int samples,
                std::uint64_t seed, double tol);

/// The algebroid differential on A-forms (p = 0), componentwise in the fiber.
MixedJets algebroid_diff(const MixedJets& theta, const AlgebroidJets& alg);

/// The same on a model form. Throws std::invalid_argument for an E-valued
/// form when the model connection is not trivial.
MixedJets algebroid_diff(const Model& model, const SymForm& theta, std::span<const double> x);

/// A-covariant exterior derivative of the A-connection ʊ_α = ∇^E_{ρ(α)} on
/// E-valued A-forms (p = 0).
MixedJets a_cov_ext_deriv(const MixedJets& phi, const AlgebroidJets& alg, const ConnJets& conn_e);

/// ℜ(e_a,e_b) = ʊ_a ʊ_b - ʊ_b ʊ_a - ʊ_[e_a,e_b] as an End-valued A-2-form
/// (fiber r*r, row-major).
MixedJets a_curvature(const AlgebroidJets& alg, const ConnJets& conn_e);

/// Covariant exterior derivative on the TM slots of a (p, q) form, with the
/// connection induced on Λ^q A* ⊗ E by ∇^A and ∇^E.
MixedJets mixed_d(const MixedJets& phi, const AlgebroidJets& alg, const ConnJets& conn_e);

/// ν^α for a form with one A slot; alpha holds frame coefficients.
MixedJets pair_section(const MixedJets& nu, const VecJets& alpha);

/// Random A-form (p = 0) with polynomial coefficients of the given degree.
SymForm random_a_form(int d, int m, int q, BundleKind bundle, int fiber, int degree, Sampler& rng);

/// Algebroid checks on a model: validate, ð^A ∘ ð^A, Leibniz, the commuting
/// lemma for m = 0 and 1, ℜ against ð ∘ ʊ, and mixed_d on q = 0 forms.
Report algebroid_suite(const Model& model, int samples, std::uint64_t seed, double tol);

}  // namespace plectic
