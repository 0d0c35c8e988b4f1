#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plectic/model.hpp"
#include "plectic/report.hpp"

namespace plectic {

/// cartan, algebroid, hms, compat, bracket, quaternionic, reduction, all.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite on one model. Checks that do not apply to the model are
/// skipped. Throws std::invalid_argument for an unknown suite.
Report run_suite(const std::string& suite, const Model& model, int samples, std::uint64_t seed, double tol);

/// Solves, uniqueness across factorizations, bracket antisymmetry and
/// well-definedness, and the Hamiltonian lemma on pseudo-Hamiltonian forms
/// of the model.
Report bracket_suite(const Model& model, int samples, std::uint64_t seed, double tol);

/// d λ_R = [λ_R, λ_R] for a model carrying a "lambda_R" form, with the
/// algebroid structure constants as the Lie bracket.
Report maurer_cartan(const Model& model, int samples, std::uint64_t seed, double tol);

/// Copy of the model with eps * x0 added to the first coefficient of μ_0.
Model perturb_momentum(const Model& model, double eps = 0.1);

}  // namespace plectic
