#pragma once

#include <array>
#include <cmath>

#include "sforge/linalg.hpp"

namespace sforge {

class EvalError : public Error {
public:
  using Error::Error;
};

/// Second-order truncated Taylor element: value, gradient and Hessian of a
/// scalar at a point. The Hessian is stored as a packed lower triangle, so
/// symmetry is exact by construction. Arithmetic follows the truncated
/// Taylor rules, which makes derivatives exact to rounding.
template <std::size_t N> struct Jet2 {
  static constexpr int hess_size = N * (N + 1) / 2;

  double value = 0.0;
  std::array<double, N> grad{};
  std::array<double, hess_size> hess{};

  static constexpr int hidx(int i, int j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }
  double h(int i, int j) const { return hess[hidx(i, j)]; }
  double& h(int i, int j) { return hess[hidx(i, j)]; }

  static Jet2 constant(double c) {
    Jet2 j;
    j.value = c;
    return j;
  }
  static Jet2 coordinate(double x, int i) {
    Jet2 j;
    j.value = x;
    j.grad[i] = 1.0;
    return j;
  }

  Mat<N> hess_matrix() const {
    Mat<N> m{};
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m[i][j] = h(i, j);
    return m;
  }

  bool finite() const {
    if (!std::isfinite(value)) return false;
    for (double g : grad)
      if (!std::isfinite(g)) return false;
    for (double x : hess)
      if (!std::isfinite(x)) return false;
    return true;
  }

  Jet2 operator-() const {
    Jet2 r;
    r.value = -value;
    for (int i = 0; i < N; ++i) r.grad[i] = -grad[i];
    for (int k = 0; k < hess_size; ++k) r.hess[k] = -hess[k];
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    for (int i = 0; i < N; ++i) grad[i] += o.grad[i];
    for (int k = 0; k < hess_size; ++k) hess[k] += o.hess[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    for (int i = 0; i < N; ++i) grad[i] -= o.grad[i];
    for (int k = 0; k < hess_size; ++k) hess[k] -= o.hess[k];
    return *this;
  }
  Jet2& operator*=(double c) {
    value *= c;
    for (int i = 0; i < N; ++i) grad[i] *= c;
    for (int k = 0; k < hess_size; ++k) hess[k] *= c;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator+(Jet2 a, double c) {
    a.value += c;
    return a;
  }
  friend Jet2 operator+(double c, Jet2 a) {
    a.value += c;
    return a;
  }
  friend Jet2 operator-(Jet2 a, double c) {
    a.value -= c;
    return a;
  }
  friend Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }
  friend Jet2 operator*(Jet2 a, double c) { return a *= c; }
  friend Jet2 operator*(double c, Jet2 a) { return a *= c; }
  friend Jet2 operator/(Jet2 a, double c) { return a *= (1.0 / c); }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.value = a.value * b.value;
    for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
    for (int i = 0; i < N; ++i)
      for (int j = 0; j <= i; ++j)
        r.h(i, j) = a.h(i, j) * b.value + a.grad[i] * b.grad[j] +
                    a.grad[j] * b.grad[i] + a.value * b.h(i, j);
    return r;
  }

  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.value == 0.0) throw EvalError("division by zero");
    Jet2 q;
    q.value = a.value / b.value;
    for (int i = 0; i < N; ++i) q.grad[i] = (a.grad[i] - q.value * b.grad[i]) / b.value;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j <= i; ++j)
        q.h(i, j) = (a.h(i, j) - q.value * b.h(i, j) - q.grad[i] * b.grad[j] -
                     q.grad[j] * b.grad[i]) /
                    b.value;
    return q;
  }

  friend Jet2 operator/(double c, const Jet2& b) { return Jet2::constant(c) / b; }
};

/// Chain rule for a unary function with values (f, f', f'') at u.value.
template <std::size_t N> inline Jet2<N> compose(const Jet2<N>& u, double f0, double f1, double f2) {
  Jet2<N> r;
  r.value = f0;
  for (int i = 0; i < N; ++i) r.grad[i] = f1 * u.grad[i];
  for (int i = 0; i < N; ++i)
    for (int j = 0; j <= i; ++j)
      r.h(i, j) = f2 * u.grad[i] * u.grad[j] + f1 * u.h(i, j);
  return r;
}

template <std::size_t N> inline Jet2<N> sin(const Jet2<N>& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, s, c, -s);
}
template <std::size_t N> inline Jet2<N> cos(const Jet2<N>& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, c, -s, -c);
}
template <std::size_t N> inline Jet2<N> tan(const Jet2<N>& u) {
  const double t = std::tan(u.value);
  const double d = 1.0 + t * t;
  return compose(u, t, d, 2.0 * t * d);
}
template <std::size_t N> inline Jet2<N> sinh(const Jet2<N>& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return compose(u, s, c, s);
}
template <std::size_t N> inline Jet2<N> cosh(const Jet2<N>& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return compose(u, c, s, c);
}
template <std::size_t N> inline Jet2<N> tanh(const Jet2<N>& u) {
  const double t = std::tanh(u.value);
  const double d = 1.0 - t * t;
  return compose(u, t, d, -2.0 * t * d);
}
template <std::size_t N> inline Jet2<N> exp(const Jet2<N>& u) {
  const double e = std::exp(u.value);
  return compose(u, e, e, e);
}
template <std::size_t N> inline Jet2<N> log(const Jet2<N>& u) {
  if (!(u.value > 0.0)) throw EvalError("log of non-positive argument");
  const double inv = 1.0 / u.value;
  return compose(u, std::log(u.value), inv, -inv * inv);
}
template <std::size_t N> inline Jet2<N> sqrt(const Jet2<N>& u) {
  if (!(u.value > 0.0)) throw EvalError("sqrt of non-positive argument");
  const double r = std::sqrt(u.value);
  return compose(u, r, 0.5 / r, -0.25 / (r * u.value));
}
template <std::size_t N> inline Jet2<N> atan(const Jet2<N>& u) {
  const double d = 1.0 / (1.0 + u.value * u.value);
  return compose(u, std::atan(u.value), d, -2.0 * u.value * d * d);
}

/// Integer power by repeated multiplication. Valid for any base; negative
/// exponents require a nonzero base.
template <std::size_t N> inline Jet2<N> pow_int(const Jet2<N>& u, long long k) {
  if (k == 0) return Jet2<N>::constant(1.0);
  const bool neg = k < 0;
  unsigned long long e = neg ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Jet2<N> acc = Jet2<N>::constant(1.0);
  Jet2<N> base = u;
  while (e > 0) {
    if (e & 1ull) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  if (neg) return Jet2<N>::constant(1.0) / acc;
  return acc;
}

/// General power u^w = exp(w log u); requires u > 0.
template <std::size_t N> inline Jet2<N> pow(const Jet2<N>& u, const Jet2<N>& w) {
  if (!(u.value > 0.0)) throw EvalError("non-integer power of non-positive base");
  return exp(w * log(u));
}

} // namespace sforge
