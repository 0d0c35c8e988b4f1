#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace plectic {

/// Largest chart dimension supported by the jet substrate.
inline constexpr int kMaxDim = 8;

/**
 * Second-order jet of a scalar at a point: value, gradient and Hessian with
 * respect to the d chart coordinates.
 *
 * A jet carries an `order` (0, 1 or 2) saying which levels are meaningful.
 * Taking a partial derivative lowers the order by one and arithmetic keeps
 * the minimum order of its operands, so a chain of differential operators
 * can never silently read derivatives it does not have.
 *
 * The Hessian is stored packed (upper triangle), hence symmetric by
 * construction.
 */
class Jet2 {
 public:
  Jet2() = default;

  static Jet2 constant(double value, int dim, int order = 2) {
    Jet2 j;
    j.dim_ = static_cast<std::int8_t>(dim);
    j.order_ = static_cast<std::int8_t>(order);
    j.v_ = value;
    return j;
  }

  /// The coordinate function x_index at a point where it equals `value`.
  static Jet2 variable(double value, int index, int dim, int order = 2) {
    assert(index >= 0 && index < dim);
    Jet2 j = constant(value, dim, order);
    j.g_[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  double value() const { return v_; }
  double grad(int i) const { return g_[static_cast<std::size_t>(i)]; }
  double hess(int i, int j) const { return h_[packed(i, j)]; }

  void set_value(double v) { v_ = v; }
  void set_grad(int i, double v) { g_[static_cast<std::size_t>(i)] = v; }
  void set_hess(int i, int j, double v) { h_[packed(i, j)] = v; }

  /// d/dx_i of this jet, one order lower.
  Jet2 partial(int i) const {
    if (order_ < 1) throw std::logic_error("Jet2::partial on an order-0 jet");
    Jet2 r = constant(g_[static_cast<std::size_t>(i)], dim_, order_ - 1);
    if (order_ >= 2) {
      for (int k = 0; k < dim_; ++k) r.g_[static_cast<std::size_t>(k)] = hess(i, k);
    }
    return r;
  }

  /// Copy with the order lowered to `order` (never raised).
  Jet2 truncated(int order) const {
    Jet2 r = *this;
    if (order < r.order_) {
      r.order_ = static_cast<std::int8_t>(order);
      if (order < 2) r.h_.fill(0.0);
      if (order < 1) r.g_.fill(0.0);
    }
    return r;
  }

  bool is_exact_zero() const {
    if (v_ != 0.0) return false;
    for (int i = 0; i < dim_; ++i)
      if (g_[static_cast<std::size_t>(i)] != 0.0) return false;
    for (double h : h_)
      if (h != 0.0) return false;
    return true;
  }

  Jet2 operator-() const {
    Jet2 r = *this;
    r.v_ = -v_;
    for (int i = 0; i < dim_; ++i) r.g_[static_cast<std::size_t>(i)] = -g_[static_cast<std::size_t>(i)];
    for (auto& h : r.h_) h = -h;
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    merge_shape(o);
    v_ += o.v_;
    if (order_ >= 1)
      for (int i = 0; i < dim_; ++i) g_[static_cast<std::size_t>(i)] += o.g_[static_cast<std::size_t>(i)];
    if (order_ >= 2) {
      for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += o.h_[i];
    }
    return *this;
  }

  Jet2& operator-=(const Jet2& o) {
    merge_shape(o);
    v_ -= o.v_;
    if (order_ >= 1)
      for (int i = 0; i < dim_; ++i) g_[static_cast<std::size_t>(i)] -= o.g_[static_cast<std::size_t>(i)];
    if (order_ >= 2) {
      for (std::size_t i = 0; i < h_.size(); ++i) h_[i] -= o.h_[i];
    }
    return *this;
  }

  Jet2& operator*=(double s) {
    v_ *= s;
    for (int i = 0; i < dim_; ++i) g_[static_cast<std::size_t>(i)] *= s;
    for (auto& h : h_) h *= s;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    r.order_ = a.order_ < b.order_ ? a.order_ : b.order_;
    r.v_ = a.v_ * b.v_;
    if (r.order_ >= 1) {
      for (int i = 0; i < r.dim_; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        r.g_[ui] = a.g_[ui] * b.v_ + a.v_ * b.g_[ui];
      }
    }
    if (r.order_ >= 2) {
      for (int i = 0; i < r.dim_; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (int j = i; j < r.dim_; ++j) {
          const auto uj = static_cast<std::size_t>(j);
          const std::size_t k = packed(i, j);
          r.h_[k] = a.h_[k] * b.v_ + a.g_[ui] * b.g_[uj] + a.g_[uj] * b.g_[ui] + a.v_ * b.h_[k];
        }
      }
    }
    return r;
  }

  /// Applies a scalar function with derivatives f0, f1, f2 at value().
  Jet2 compose(double f0, double f1, double f2) const {
    Jet2 r = constant(f0, dim_, order_);
    if (order_ >= 1)
      for (int i = 0; i < dim_; ++i) r.g_[static_cast<std::size_t>(i)] = f1 * g_[static_cast<std::size_t>(i)];
    if (order_ >= 2) {
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
          const std::size_t k = packed(i, j);
          r.h_[k] = f1 * h_[k] + f2 * g_[static_cast<std::size_t>(i)] * g_[static_cast<std::size_t>(j)];
        }
    }
    return r;
  }

 private:
  static std::size_t packed(int i, int j) {
    if (i > j) {
      const int t = i;
      i = j;
      j = t;
    }
    return static_cast<std::size_t>(i * kMaxDim - i * (i - 1) / 2 + (j - i));
  }

  void merge_shape(const Jet2& o) {
    if (o.dim_ > dim_) dim_ = o.dim_;
    if (o.order_ < order_) *this = truncated(o.order_);
  }

  double v_ = 0.0;
  std::array<double, kMaxDim> g_{};
  std::array<double, kMaxDim*(kMaxDim + 1) / 2> h_{};
  std::int8_t dim_ = 0;
  std::int8_t order_ = 2;
};

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c);
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e);
}

/// Reciprocal; the caller guarantees a.value() != 0.
inline Jet2 reciprocal(const Jet2& a) {
  const double v = a.value();
  return a.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

/// Integer power; the caller guarantees a.value() != 0 when n < 0.
inline Jet2 pow(const Jet2& a, int n) {
  if (n == 0) return Jet2::constant(1.0, a.dim(), a.order());
  if (n == 1) return a;
  const double v = a.value();
  const double f1 = n * std::pow(v, n - 1);
  const double f2 = n * (n - 1) * std::pow(v, n - 2);
  return a.compose(std::pow(v, n), f1, f2);
}

}  // namespace plectic
