#pragma once

// Infinite square well on [0, 1], hbar = m = 1.

#include <cmath>
#include <numbers>

#include "sumrules/core.hpp"

namespace sumrules::isw {

struct IswState {
  int n = 1;

  explicit IswState(int level) : n(level) {
    if (level < 1) throw DomainError("square-well level must be >= 1");
  }
};

namespace detail {
inline void check_level(int n) {
  if (n < 1) throw DomainError("square-well level must be >= 1");
}
}  // namespace detail

inline double energy(int n) {
  detail::check_level(n);
  const double pi = std::numbers::pi;
  return 0.5 * pi * pi * n * n;
}

inline double energy(const IswState& s) { return energy(s.n); }

/// E_k - E_n = (pi^2/2)(k^2 - n^2), formed without cancellation.
inline double energy_gap(int n, int k) {
  detail::check_level(n);
  detail::check_level(k);
  const double pi = std::numbers::pi;
  return 0.5 * pi * pi * static_cast<double>(k - n) * static_cast<double>(k + n);
}

inline double psi(int n, double x) {
  detail::check_level(n);
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x outside the well [0, 1]");
  return std::numbers::sqrt2 * std::sin(n * std::numbers::pi * x);
}

/// <n|x|k>
inline double x_me(int n, int k) {
  detail::check_level(n);
  detail::check_level(k);
  if (k == n) return 0.5;
  if ((k + n) % 2 == 0) return 0.0;
  const double pi = std::numbers::pi;
  const double d = static_cast<double>(k - n) * static_cast<double>(k + n);
  // Symmetric in n <-> k: -(8/pi^2) n k / (k^2 - n^2)^2.
  return -8.0 / (pi * pi) * static_cast<double>(n) * k / (d * d);
}

/// <n|x^2|n> = 1/3 - 1/(2 n^2 pi^2)
inline double x2_diag(int n) {
  detail::check_level(n);
  const double pi = std::numbers::pi;
  return 1.0 / 3.0 - 1.0 / (2.0 * n * n * pi * pi);
}

/// <n|x^2|k>; nonzero for every k.
inline double x2_me(int n, int k) {
  detail::check_level(n);
  detail::check_level(k);
  if (k == n) return x2_diag(n);
  const double pi = std::numbers::pi;
  const double d = static_cast<double>(k - n) * static_cast<double>(k + n);
  const double sign = ((k - n) % 2 == 0) ? 1.0 : -1.0;
  return sign * 8.0 / (pi * pi) * static_cast<double>(n) * k / (d * d);
}

/// E^(1) = <n|F x|n> = F/2.
inline double first_order_stark(double field) { return 0.5 * field; }

/// Second-order shift in a field F x: -F^2 (15 - n^2 pi^2) / (24 pi^4 n^4).
inline double stark_shift2(int n, double field) {
  detail::check_level(n);
  const double pi = std::numbers::pi;
  const double nn = static_cast<double>(n) * n;
  return -field * field * (15.0 - nn * pi * pi) / (24.0 * pi * pi * pi * pi * nn * nn);
}

}  // namespace sumrules::isw
