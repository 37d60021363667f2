#pragma once

// Attractive delta well V = -delta(x) in units hbar = m = K0 = 1. One bound
// state; continuum states labelled by k > 0 and parity, normalised so that
// <k|k'> = delta(k - k') on the half line k > 0.

#include <cmath>
#include <numbers>

#include "sumrules/core.hpp"

namespace sumrules::delta {

struct DeltaContinuumState {
  double k;
  Parity parity;

  DeltaContinuumState(double wavenumber, Parity p) : k(wavenumber), parity(p) {
    if (!(std::isfinite(k) && k > 0.0)) throw DomainError("continuum wavenumber must be positive");
    if (p == Parity::all) throw DomainError("continuum state needs a definite parity");
  }
};

namespace detail {
inline void check_k(double k) {
  if (!(std::isfinite(k) && k > 0.0)) throw DomainError("wavenumber must be positive");
}
inline double inv_sqrt_pi() { return std::numbers::inv_sqrtpi; }
}  // namespace detail

inline double bound_energy() { return -0.5; }

inline double psi_bound(double x) { return std::exp(-std::abs(x)); }

inline double continuum_energy(double k) {
  detail::check_k(k);
  return 0.5 * k * k;
}

/// E_k - E_0 = (k^2 + 1)/2
inline double energy_gap(double k) {
  detail::check_k(k);
  return 0.5 * (k * k + 1.0);
}

inline double psi_continuum(Parity parity, double k, double x) {
  detail::check_k(k);
  if (parity == Parity::odd) return std::sin(k * x) * detail::inv_sqrt_pi();
  if (parity == Parity::even)
    return (std::sin(k * std::abs(x)) - k * std::cos(k * x)) * detail::inv_sqrt_pi() / std::sqrt(k * k + 1.0);
  throw DomainError("continuum state needs a definite parity");
}

inline double psi_continuum(const DeltaContinuumState& s, double x) { return psi_continuum(s.parity, s.k, x); }

/// <0|x|k, odd>; the even channel vanishes.
inline double x_me_bound(double k) {
  detail::check_k(k);
  const double d = k * k + 1.0;
  return 4.0 * detail::inv_sqrt_pi() * k / (d * d);
}

/// <0|x^2|k, even>; the odd channel vanishes.
inline double x2_me_bound(double k) {
  detail::check_k(k);
  const double d = k * k + 1.0;
  return 8.0 * detail::inv_sqrt_pi() / std::sqrt(d) * k / (d * d);
}

/// <0|sin(qx)|k, odd> for the odd channel, <0|cos(qx)|k, even> for the even one.
inline double bethe_me(Parity parity, double q, double k) {
  detail::check_k(k);
  if (!(std::isfinite(q) && q > 0.0)) throw DomainError("momentum transfer q must be positive");
  const double den = ((k + q) * (k + q) + 1.0) * ((k - q) * (k - q) + 1.0);
  if (parity == Parity::odd) return 2.0 * detail::inv_sqrt_pi() * 2.0 * k * q / den;
  if (parity == Parity::even)
    return 2.0 * detail::inv_sqrt_pi() / std::sqrt(1.0 + k * k) * (-2.0 * k * q * q) / den;
  throw DomainError("Bethe matrix element needs a definite parity");
}

/// Closed-form channel weights, B_o + B_e = q^2/2.
inline double bethe_odd_closed(double q) {
  const double qq = q * q;
  return 0.5 * qq * (1.0 + 0.5 * qq) / (1.0 + qq);
}

inline double bethe_even_closed(double q) {
  const double qq = q * q;
  return 0.5 * qq * (0.5 * qq) / (1.0 + qq);
}

inline double stark_shift2_delta(double field) { return -0.625 * field * field; }

}  // namespace sumrules::delta
