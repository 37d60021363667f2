#pragma once

// Test-only reference computations, deliberately independent of the library
// code paths they check: extended-precision direct sums and a fixed-order
// composite Gauss-Legendre rule.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// sum_{k = first, first+stride, ...}^{k_max} f(k) in long double, summed
/// from the smallest terms up, plus (if given) an explicit tail estimate.
inline long double direct_sum(const std::function<long double(long long)>& f, long long first, long long stride,
                              long long k_max) {
  long double acc = 0.0L;
  long long last = first;
  while (last + stride <= k_max) last += stride;
  for (long long k = last; k >= first; k -= stride) acc += f(k);
  return acc;
}

/// Tail of sum_{k>K} k^w/(k^2-z^2)^p over a stride, as the continuum
/// integral from K + stride/2 (midpoint rule, accurate to O(K^-(2p-w+1))).
inline long double tail_midpoint(int p, long double z, int w, long long stride, long long K) {
  const long double x0 = static_cast<long double>(K) + 0.5L * stride;
  const int e = 2 * p - w - 1;
  // leading term of the asymptotic expansion of the integral
  long double v = std::pow(x0, -e) / (e * stride);
  // first correction from the z^2 in the denominator
  v += p * z * z * std::pow(x0, -(e + 2)) / ((e + 2) * stride);
  return v;
}

// 20-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 10> kGLx{
    0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
    0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
    0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
    0.9931285991850949247861224};
inline constexpr std::array<double, 10> kGLw{
    0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
    0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
    0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
    0.0176140071391521183118620};

/// Composite 20-point Gauss-Legendre with `panels` equal panels on [a, b].
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  long double acc = 0.0L;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double c = a + (i + 0.5) * h;
    for (std::size_t j = 0; j < kGLx.size(); ++j) {
      const double dx = 0.5 * h * kGLx[j];
      acc += 0.5L * h * kGLw[j] * (static_cast<long double>(f(c - dx)) + f(c + dx));
    }
  }
  return static_cast<double>(acc);
}

/// Integral over [0, inf) through k = tan(theta), fixed composite rule.
inline double gauss_legendre_semi_inf(const std::function<double(double)>& f, int panels = 400) {
  return gauss_legendre(
      [&](double t) {
        if (t <= 0.0) return 0.0;
        const double c = std::cos(t);
        return f(std::tan(t)) / (c * c);
      },
      0.0, 0.5 * std::numbers::pi, panels);
}

}  // namespace oracle
