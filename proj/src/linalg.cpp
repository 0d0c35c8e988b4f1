#include "plectic/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace plectic {

namespace {

void normalize_signs(Eigen::MatrixXd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index arg = 0;
    basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, c) < 0) basis.col(c) *= -1.0;
  }
}

int rank_from(const Eigen::VectorXd& s, double rel_tol) {
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

}  // namespace

RankInfo numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  RankInfo info;
  if (a.size() == 0) return info;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  info.singular_values = svd.singularValues();
  info.rank = rank_from(info.singular_values, rel_tol);
  return info;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const int r = rank_from(svd.singularValues(), rel_tol);
  Eigen::MatrixXd basis = svd.matrixV().rightCols(n - r);
  normalize_signs(basis);
  return basis;
}

Eigen::MatrixXd column_space(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
  const int r = rank_from(svd.singularValues(), rel_tol);
  Eigen::MatrixXd basis = svd.matrixU().leftCols(r);
  normalize_signs(basis);
  return basis;
}

Eigen::MatrixXd least_squares(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, LsqMethod method) {
  switch (method) {
    case LsqMethod::kQr:
      return a.colPivHouseholderQr().solve(b);
    case LsqMethod::kNormal:
      return (a.transpose() * a).ldlt().solve(a.transpose() * b);
    case LsqMethod::kSvd:
      break;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTol);
  return svd.solve(b);
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, LsqMethod method) {
  return least_squares(a, Eigen::MatrixXd(b), method).col(0);
}

std::vector<Jet2> jet_inverse(const std::vector<Jet2>& a, int n) {
  std::vector<Jet2> m = a;
  const int dim = a.empty() ? 0 : a[0].dim();
  int order = 2;
  for (const auto& j : a) order = std::min(order, j.order());
  std::vector<Jet2> inv(static_cast<std::size_t>(n * n), Jet2::constant(0.0, dim, order));
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = Jet2::constant(1.0, dim, order);
  auto at = [n](std::vector<Jet2>& v, int r, int c) -> Jet2& { return v[static_cast<std::size_t>(r * n + c)]; };

  double scale = 0.0;
  for (const auto& j : a) scale = std::max(scale, std::abs(j.value()));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(m, r, col).value()) > std::abs(at(m, piv, col).value())) piv = r;
    if (std::abs(at(m, piv, col).value()) <= 1e-14 * scale || scale == 0.0)
      throw std::domain_error("singular matrix in jet_inverse");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(at(m, piv, c), at(m, col, c));
        std::swap(at(inv, piv, c), at(inv, col, c));
      }
    const Jet2 rp = reciprocal(at(m, col, col));
    for (int c = 0; c < n; ++c) {
      at(m, col, c) = at(m, col, c) * rp;
      at(inv, col, c) = at(inv, col, c) * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet2 f = at(m, r, col);
      if (f.is_exact_zero()) continue;
      for (int c = 0; c < n; ++c) {
        at(m, r, c) -= f * at(m, col, c);
        at(inv, r, c) -= f * at(inv, col, c);
      }
    }
  }
  return inv;
}

}  // namespace plectic
