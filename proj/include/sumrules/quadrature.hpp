#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with worst-panel-first bisection,
// plus tan-substitution wrappers for [0, inf) and (-inf, inf).
//
// The substitution k = scale * tan(theta) sends the characteristic width of
// the integrand (K0 or q for the delta-well integrands) to theta ~ pi/4, so
// the starting panels already resolve the features.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include "sumrules/core.hpp"

namespace sumrules::quad {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  std::size_t max_panels = 10'000;
  std::size_t initial_panels = 16;
};

namespace detail {

// Kronrod nodes on [0, 1] (symmetric half), xgk[1], xgk[3], xgk[5] are the Gauss nodes.
inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod(F& f, double a, double b, std::size_t& evaluations) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  auto eval = [&](double x) {
    const double y = f(x);
    ++evaluations;
    if (std::isnan(y)) throw DomainError("integrand returned NaN");
    return y;
  };
  const double fc = eval(c);
  double kronrod = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double pair = eval(c - dx) + eval(c + dx);
    kronrod += wgk[j] * pair;
    if (j % 2 == 1) gauss += wg[j / 2] * pair;
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over the finite interval [a, b].
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integration limits must be finite");
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<detail::Panel> panels;
  double value = 0.0;
  double error = 0.0;
  const std::size_t n0 = std::max<std::size_t>(1, opt.initial_panels);
  for (std::size_t i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / n0;
    const double hi = (i + 1 == n0) ? b : a + (b - a) * static_cast<double>(i + 1) / n0;
    auto p = detail::gauss_kronrod(f, lo, hi, res.evaluations);
    value += p.value;
    error += p.error;
    panels.push(p);
  }
  auto target = [&] { return std::max(opt.rel_tol * std::abs(value), opt.abs_tol); };
  while (error > target() && panels.size() < opt.max_panels) {
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod(f, worst.a, mid, res.evaluations);
    auto right = detail::gauss_kronrod(f, mid, worst.b, res.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift of the incremental updates.
  CompensatedSum v;
  CompensatedSum e;
  while (!panels.empty()) {
    v.add(panels.top().value);
    e.add(panels.top().error);
    panels.pop();
  }
  res.value = v.value();
  res.est_error = e.value();
  res.converged = res.est_error <= std::max(opt.rel_tol * std::abs(res.value), opt.abs_tol);
  return res;
}

/// Integrates f over [0, inf) through k = scale * tan(theta).
template <class F>
QuadratureResult integrate_semi_inf(F&& f, double scale, const Options& opt = {}) {
  if (!(std::isfinite(scale) && scale > 0.0)) throw DomainError("scale must be positive");
  auto g = [&](double theta) {
    const double c = std::cos(theta);
    return f(scale * std::tan(theta)) * scale / (c * c);
  };
  return integrate(g, 0.0, 0.5 * std::numbers::pi, opt);
}

template <class F>
QuadratureResult integrate_semi_inf(F&& f, double scale, double rel_tol) {
  Options opt;
  opt.rel_tol = rel_tol;
  return integrate_semi_inf(std::forward<F>(f), scale, opt);
}

/// Integrates f over the real line through k = scale * tan(theta), theta in (-pi/2, pi/2).
template <class F>
QuadratureResult integrate_real_line(F&& f, double scale, const Options& opt = {}) {
  if (!(std::isfinite(scale) && scale > 0.0)) throw DomainError("scale must be positive");
  auto g = [&](double theta) {
    const double c = std::cos(theta);
    return f(scale * std::tan(theta)) * scale / (c * c);
  };
  Options o = opt;
  o.initial_panels = 2 * opt.initial_panels;
  const double h = 0.5 * std::numbers::pi;
  return integrate(g, -h, h, o);
}

template <class F>
QuadratureResult integrate_real_line(F&& f, double scale, double rel_tol) {
  Options opt;
  opt.rel_tol = rel_tol;
  return integrate_real_line(std::forward<F>(f), scale, opt);
}

}  // namespace sumrules::quad
