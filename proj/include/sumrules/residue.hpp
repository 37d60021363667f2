#pragma once

// Real-line integrals of rational functions by closing the contour in the
// upper half plane. Poles are always supplied in factored form, so no root
// finding is involved; residues of higher-order poles come from exact
// polynomial quotient-rule arithmetic with a single evaluation at the end.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <vector>

#include "sumrules/core.hpp"

namespace sumrules::residue {

using cplx = std::complex<double>;

/// Polynomial with complex coefficients, ascending powers.
template <class Real>
class BasicComplexPoly {
 public:
  using cplx = std::complex<Real>;
  using ComplexPoly = BasicComplexPoly;

  BasicComplexPoly() = default;
  BasicComplexPoly(std::initializer_list<cplx> c) : c_(c) { trim(); }
  explicit BasicComplexPoly(std::vector<cplx> c) : c_(std::move(c)) { trim(); }

  template <class Other>
  explicit BasicComplexPoly(const BasicComplexPoly<Other>& o) {
    for (const auto& v : o.coefficients()) c_.emplace_back(static_cast<Real>(v.real()), static_cast<Real>(v.imag()));
  }

  static ComplexPoly constant(cplx a) { return ComplexPoly({a}); }
  /// (z - z0)^m
  static ComplexPoly linear_power(cplx z0, int m) {
    ComplexPoly r = constant(cplx(1));
    const ComplexPoly f({-z0, cplx(1)});
    for (int i = 0; i < m; ++i) r = r * f;
    return r;
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cplx>& coefficients() const { return c_; }
  cplx operator[](std::size_t i) const { return i < c_.size() ? c_[i] : cplx{}; }

  cplx operator()(cplx z) const {
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Coefficients of p(z0 + t) in t (Taylor shift by repeated synthetic division).
  ComplexPoly shifted(cplx z0) const {
    std::vector<cplx> c = c_;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) c[j - 1] += z0 * c[j];
    return ComplexPoly(std::move(c));
  }

  ComplexPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<Real>(i);
    return ComplexPoly(std::move(d));
  }

  friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return ComplexPoly(std::move(r));
  }
  friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return ComplexPoly(std::move(r));
  }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return ComplexPoly(std::move(r));
  }
  friend ComplexPoly operator*(cplx s, const ComplexPoly& a) { return constant(s) * a; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
  }
  std::vector<cplx> c_;
};

using ComplexPoly = BasicComplexPoly<double>;

struct Pole {
  cplx location;
  int order = 1;
};

/// numerator(z) / prod (z - p_i)^{m_i}
struct FactoredRational {
  ComplexPoly numerator;
  std::vector<Pole> poles;

  int denominator_degree() const {
    int d = 0;
    for (const auto& p : poles) d += p.order;
    return d;
  }

  cplx operator()(cplx z) const {
    cplx den = 1.0;
    for (const auto& p : poles) den *= std::pow(z - p.location, p.order);
    return numerator(z) / den;
  }

  /// Structural checks shared by every residue operation.
  void validate() const {
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const auto& p = poles[i];
      if (p.order < 1) throw InvalidSpec("pole order must be at least 1");
      if (!(std::isfinite(p.location.real()) && std::isfinite(p.location.imag())))
        throw InvalidSpec("pole location must be finite");
      if (p.location.imag() == 0.0) throw DomainError("pole on the real axis");
      for (std::size_t j = 0; j < i; ++j)
        if (poles[j].location == p.location) throw InvalidSpec("repeated pole location");
    }
  }
};

namespace detail {

using ext = long double;
using ext_cplx = std::complex<ext>;

inline ext_cplx widen(cplx z) { return {z.real(), z.imag()}; }

// Residue in extended precision. The arithmetic runs in t = z - z0, so the
// final evaluation at t = 0 reads off constant coefficients instead of
// cancelling large terms.
inline ext_cplx residue_ext(const FactoredRational& f, std::size_t index) {
  using Poly = BasicComplexPoly<ext>;
  const auto& pole = f.poles[index];
  const ext_cplx z0 = widen(pole.location);
  Poly q = Poly::constant(ext_cplx(1));
  for (std::size_t j = 0; j < f.poles.size(); ++j)
    if (j != index) q = q * Poly::linear_power(widen(f.poles[j].location) - z0, f.poles[j].order);

  // j-th derivative of P/Q written as P_j / Q^{j+1}.
  const Poly dq = q.derivative();
  Poly pj = Poly(f.numerator).shifted(z0);
  for (int j = 0; j + 1 < pole.order; ++j) pj = pj.derivative() * q - ext_cplx(ext(j + 1)) * (pj * dq);

  ext factorial = 1;
  for (int j = 2; j < pole.order; ++j) factorial *= j;
  return pj[0] / (std::pow(q[0], pole.order) * factorial);
}

}  // namespace detail

/// Residue at poles[index] via d^{m-1}/dz^{m-1} [(z - z0)^m f] / (m-1)!.
inline cplx residue_at(const FactoredRational& f, std::size_t index) {
  f.validate();
  if (index >= f.poles.size()) throw InvalidSpec("pole index out of range");
  const auto r = detail::residue_ext(f, index);
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

/// Integral of f over the real line, 2 pi i times the upper-half-plane residues.
inline double contour_integral_uhp(const FactoredRational& f, double imag_tol = 1e-12) {
  f.validate();
  if (f.numerator.degree() > f.denominator_degree() - 2)
    throw ArcDivergence("numerator degree too high for the arc contribution to vanish");
  detail::ext_cplx sum{};
  double scale = 0.0;
  for (std::size_t i = 0; i < f.poles.size(); ++i) {
    if (f.poles[i].location.imag() <= 0.0) continue;
    const auto r = detail::residue_ext(f, i);
    sum += r;
    scale += static_cast<double>(std::abs(r));
  }
  const auto t = detail::ext(2) * std::numbers::pi_v<detail::ext> * detail::ext_cplx(0, 1) * sum;
  const cplx total(static_cast<double>(t.real()), static_cast<double>(t.imag()));
  // Allow for rounding in the residues themselves when they largely cancel.
  const double rounding =
      64.0 * static_cast<double>(std::numeric_limits<detail::ext>::epsilon()) * 2.0 * std::numbers::pi * scale;
  if (std::abs(total.imag()) > imag_tol * std::max(std::abs(total.real()), kRelErrFloor) + rounding)
    throw Inconsistency("contour integral has a non-negligible imaginary part");
  return total.real();
}

/// Odd channel: k^2 (k^2 + K0^2); even channel: k^2; poles at +-q +- i K0, each double.
inline FactoredRational build_bethe_integrand(Parity parity, double q, double k0) {
  if (!(std::isfinite(q) && q > 0.0)) throw InvalidSpec("q must be positive");
  if (!(std::isfinite(k0) && k0 > 0.0)) throw InvalidSpec("K0 must be positive");
  if (parity == Parity::all) throw InvalidSpec("Bethe integrand needs an even or odd channel");
  FactoredRational f;
  f.numerator = parity == Parity::odd ? ComplexPoly({0.0, 0.0, k0 * k0, 0.0, 1.0})
                                      : ComplexPoly({0.0, 0.0, 1.0});
  for (double re : {q, -q})
    for (double im : {k0, -k0}) f.poles.push_back({cplx(re, im), 2});
  return f;
}

/// numerator(k) / (k^2 + kappa^2)^m
inline FactoredRational build_lorentzian_power(ComplexPoly numerator, double kappa, int m) {
  if (!(std::isfinite(kappa) && kappa > 0.0)) throw InvalidSpec("kappa must be positive");
  if (m < 1) throw InvalidSpec("power must be at least 1");
  return {std::move(numerator), {{cplx(0.0, kappa), m}, {cplx(0.0, -kappa), m}}};
}

}  // namespace sumrules::residue
