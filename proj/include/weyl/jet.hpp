#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace weyl {

// Truncated Taylor series f(x0 + h) = c0 + c1 h + c2 h^2 + c3 h^3.
// Coefficients are f^(k)(x0)/k!, so arithmetic is plain Cauchy-product algebra.
template <class T>
struct Jet {
  static constexpr int kOrder = 3;
  std::array<T, 4> c{};

  Jet() = default;
  Jet(T value) : c{value, T(0), T(0), T(0)} {}  // NOLINT: implicit on purpose
  Jet(T c0, T c1, T c2, T c3) : c{c0, c1, c2, c3} {}

  static Jet variable(T x0) { return Jet(x0, T(1), T(0), T(0)); }

  T value() const { return c[0]; }
  // k-th derivative at x0.
  T derivative(int k) const {
    static constexpr double fact[4] = {1.0, 1.0, 2.0, 6.0};
    return c[k] * fact[k];
  }
  // Taylor series of f'. The top coefficient is unknown and left at zero,
  // so the result is only valid to order 2.
  Jet deriv() const { return Jet(c[1], T(2) * c[2], T(3) * c[3], T(0)); }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < 4; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < 4; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
  Jet& operator*=(const T& s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a) { return Jet(-a.c[0], -a.c[1], -a.c[2], -a.c[3]); }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k < 4; ++k) {
      T s = a.c[k];
      for (int j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
      q.c[k] = s / b.c[0];
    }
    return q;
  }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const T& s) {
    for (auto& v : a.c) v /= s;
    return a;
  }
  friend Jet operator+(Jet a, const T& s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator-(Jet a, const T& s) {
    a.c[0] -= s;
    return a;
  }
};

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  Jet<T> e;
  e.c[0] = exp(a.c[0]);
  for (int k = 1; k < 4; ++k) {
    T s(0);
    for (int j = 1; j <= k; ++j) s += T(double(j)) * a.c[j] * e.c[k - j];
    e.c[k] = s / T(double(k));
  }
  return e;
}

template <class T>
Jet<T> pow(Jet<T> a, int m) {
  Jet<T> r(T(1));
  while (m > 0) {
    if (m & 1) r = r * a;
    a = a * a;
    m >>= 1;
  }
  return r;
}

// Taylor series of (ln f)' about x0; valid to order 2.
template <class T>
Jet<T> log_derivative(const Jet<T>& f) {
  return f.deriv() / f;
}

using CJet = Jet<std::complex<double>>;
using RJet = Jet<double>;

}  // namespace weyl
