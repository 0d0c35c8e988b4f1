#pragma once

#include <Eigen/Dense>
#include <vector>

#include "plectic/jet.hpp"

namespace plectic {

/// Singular values below rel_tol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-10;

enum class LsqMethod { kSvd, kQr, kNormal };

struct RankInfo {
  int rank = 0;
  Eigen::VectorXd singular_values;
};

RankInfo numerical_rank(const Eigen::MatrixXd& a, double rel_tol = kRankTol);

/// Orthonormal basis of the null space, one column per vector. Columns are
/// right singular vectors in order of descending singular value, with the
/// sign fixed so that the entry of largest magnitude is positive.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol = kRankTol);

/// Orthonormal basis of the column space, normalized the same way.
Eigen::MatrixXd column_space(const Eigen::MatrixXd& a, double rel_tol = kRankTol);

/// Minimum-norm least-squares solution.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, LsqMethod method = LsqMethod::kSvd);
Eigen::MatrixXd least_squares(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, LsqMethod method = LsqMethod::kSvd);

/// Inverse of an n x n matrix of jets (row-major), by Gauss-Jordan
/// elimination pivoting on values. Throws std::domain_error if singular.
std::vector<Jet2> jet_inverse(const std::vector<Jet2>& a, int n);

}  // namespace plectic
