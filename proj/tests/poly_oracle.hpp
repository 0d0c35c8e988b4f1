#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "plectic/expr.hpp"

namespace oracle {

// Sparse polynomial: exponent vector -> coefficient.
using Poly = std::map<std::vector<int>, double>;

inline Poly random_poly(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 5), deg(0, 3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  Poly p;
  const int n = terms(rng);
  for (int t = 0; t < n; ++t) {
    std::vector<int> e(static_cast<std::size_t>(dim));
    for (auto& v : e) v = deg(rng);
    p[e] += coef(rng);
  }
  return p;
}

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return out;
}

inline std::string text(const Poly& p) {
  std::string s;
  for (const auto& [e, c] : p) {
    if (!s.empty()) s += " + ";
    s += "(" + plectic::format_number(c) + ")";
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) s += "*x" + std::to_string(i) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  }
  return s.empty() ? "0" : s;
}

inline Poly derive(const Poly& p, int i) {
  Poly out;
  for (const auto& [e, c] : p) {
    if (e[static_cast<std::size_t>(i)] == 0) continue;
    auto f = e;
    f[static_cast<std::size_t>(i)] -= 1;
    out[f] += c * e[static_cast<std::size_t>(i)];
  }
  return out;
}

inline double value(const Poly& p, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [e, c] : p) {
    double t = c;
    for (std::size_t i = 0; i < e.size(); ++i) t *= std::pow(x[i], e[i]);
    s += t;
  }
  return s;
}


/// Largest difference between automatic and symbolic value, gradient and
/// Hessian over products of random sparse polynomials.
inline double worst_jet_error(int count, std::uint64_t seed) {
  using plectic::SmoothFunction;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dims(1, 4);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < count; ++t) {
    const int dim = dims(rng);
    const Poly a = random_poly(dim, rng), b = random_poly(dim, rng);
    const Poly p = multiply(a, b);
    const SmoothFunction f = SmoothFunction::parse("(" + text(a) + ")*(" + text(b) + ")", dim);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (auto& v : x) v = coord(rng);
    const plectic::Jet2 j = f.eval_jet2(x);
    worst = std::max(worst, std::abs(j.value() - value(p, x)));
    for (int i = 0; i < dim; ++i) {
      const Poly di = derive(p, i);
      worst = std::max(worst, std::abs(j.grad(i) - value(di, x)));
      for (int k = 0; k < dim; ++k) worst = std::max(worst, std::abs(j.hess(i, k) - value(derive(di, k), x)));
    }
  }
  return worst;
}

}  // namespace oracle
