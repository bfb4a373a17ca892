#pragma once

#include <array>
#include <cmath>

namespace lcpol {

// Truncated Taylor jet: c[k] = f^(k)(t0) / k!.
template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  // From plain derivatives d[k] = f^(k).
  template <class D>
  static Jet from_derivs(const D& d) {
    Jet j;
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
      if (k > 0) fact *= k;
      j.c[k] = d[k] / fact;
    }
    return j;
  }
  double deriv(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[k] * fact;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int k = 0; k <= N; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int k = 0; k <= N; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& v : a.c) v *= s;
    return a;
  }
  friend Jet operator+(double s, Jet a) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k)
      for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
  }
};

// f^p via g' f = p f' g.
template <int N>
Jet<N> pow(const Jet<N>& f, double p) {
  Jet<N> g;
  g.c[0] = std::pow(f.c[0], p);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * f.c[j] * g.c[k - j];
    g.c[k] = s / (k * f.c[0]);
  }
  return g;
}

// Derivative jet, one order lower.
template <int N>
Jet<N - 1> derivative(const Jet<N>& f) {
  Jet<N - 1> d;
  for (int k = 0; k < N; ++k) d.c[k] = (k + 1) * f.c[k + 1];
  return d;
}

template <int M, int N>
Jet<M> truncate(const Jet<N>& f) {
  static_assert(M <= N);
  Jet<M> r;
  for (int k = 0; k <= M; ++k) r.c[k] = f.c[k];
  return r;
}

}  // namespace lcpol
