#pragma once

// Sum-rule verification over both models. Each identity is evaluated by a
// closed route (series identities for the square well, residues for the
// delta well) and a brute route (truncated sums over matrix elements, or
// adaptive quadrature), and both are compared with the analytic right side.

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumrules/core.hpp"
#include "sumrules/delta.hpp"
#include "sumrules/isw.hpp"
#include "sumrules/quadrature.hpp"
#include "sumrules/residue.hpp"
#include "sumrules/series.hpp"

namespace sumrules {

enum class Operator { x, x2, exp_iqx };

/// (operator, energy-weight power); q only matters for exp_iqx.
struct SumRuleSpec {
  Operator op = Operator::x;
  int power = 0;
  double q = 0.0;

  static SumRuleSpec closure() { return {Operator::x, 0, 0.0}; }
  static SumRuleSpec trk() { return {Operator::x, 1, 0.0}; }
  static SumRuleSpec monopole() { return {Operator::x2, 1, 0.0}; }
  static SumRuleSpec bethe(double q) { return {Operator::exp_iqx, 1, q}; }

  void validate() const {
    if (power != 0 && power != 1) throw InvalidSpec("energy-weight power must be 0 or 1");
    if (op == Operator::exp_iqx && !(std::isfinite(q) && q > 0.0))
      throw InvalidSpec("Bethe rule needs q > 0");
    if ((op == Operator::x2 || op == Operator::exp_iqx) && power == 0)
      throw Unsupported("only the energy-weighted form is supported for this operator");
  }

  std::string id() const {
    if (op == Operator::exp_iqx) return "bethe";
    if (op == Operator::x2) return "monopole";
    return power == 0 ? "closure" : "trk";
  }

  /// Dimensions of the sum (energy power, length power).
  std::pair<int, int> dimensions() const {
    if (op == Operator::exp_iqx) return {1, 0};
    if (op == Operator::x2) return {1, 4};
    return {power, 2};
  }
};

inline std::optional<SumRuleSpec> rule_from_id(const std::string& id, double q = 0.0) {
  if (id == "closure") return SumRuleSpec::closure();
  if (id == "trk") return SumRuleSpec::trk();
  if (id == "monopole") return SumRuleSpec::monopole();
  if (id == "bethe") return SumRuleSpec::bethe(q);
  return std::nullopt;
}

/// Truncation cap for brute sums; SUMRULE_KMAX overrides the default 1e5.
inline long long default_k_max() {
  if (const char* env = std::getenv("SUMRULE_KMAX")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 100'000;
}

struct VerifyOptions {
  double tol = kDefaultTolerance;
  long long k_max = default_k_max();
  double quad_tol = 1e-12;
  double cross_check = 1e-8;  // residue vs quadrature
};

// ---------------------------------------------------------------------------
// Right-hand sides (reduced units)
// ---------------------------------------------------------------------------

inline double analytic_rhs(const SumRuleSpec& spec, ModelKind model, int n = 1) {
  spec.validate();
  if (model == ModelKind::isw) {
    if (spec.op == Operator::exp_iqx) throw Unsupported("Bethe rule is not available for the square well");
    const double x2 = isw::x2_diag(n);
    if (spec.op == Operator::x) return spec.power == 0 ? x2 : 0.5;
    return 2.0 * x2;
  }
  constexpr double x2 = 0.5;  // <0|x^2|0>
  switch (spec.op) {
    case Operator::x: return spec.power == 0 ? x2 : 0.5;
    case Operator::x2: return 2.0 * x2;
    case Operator::exp_iqx: return 0.5 * spec.q * spec.q;
  }
  throw Unsupported("unknown operator");
}

struct LhsResult {
  double closed = 0.0;
  double brute = 0.0;
  ConvergenceInfo trace = TruncationTrace{};
  std::vector<std::pair<std::string, double>> components;
};

// ---------------------------------------------------------------------------
// Square well
// ---------------------------------------------------------------------------

namespace detail {

inline double brute_tolerance(double tol) { return tol * 1e-2; }

inline double pi2() { return std::numbers::pi * std::numbers::pi; }

/// Coefficient c with |<n|x|k>|^2 = c k^2/(k^2-n^2)^4 (both x and x^2 elements).
inline double dipole_coeff(int n) {
  const double pi = std::numbers::pi;
  return 64.0 * n * n / (pi * pi * pi * pi);
}

}  // namespace detail

inline LhsResult lhs_isw(const SumRuleSpec& spec, int n, const VerifyOptions& opt = {}) {
  spec.validate();
  if (n < 1) throw DomainError("square-well level must be >= 1");
  if (spec.op == Operator::exp_iqx) throw Unsupported("Bethe rule is not available for the square well");
  const double c = detail::dipole_coeff(n);
  const double nd = n;
  const double btol = detail::brute_tolerance(opt.tol);
  LhsResult r;

  if (spec.op == Operator::x) {
    // Only k of parity opposite to n couple.
    const long long first = (n % 2 == 1) ? 2 : 1;
    if (spec.power == 0) {
      r.closed = 0.25 + c * series::weighted_k2_sum(4, n);
      auto term = [&](long long k) { const double v = isw::x_me(n, static_cast<int>(k)); return v * v; };
      auto tail = [&](long long k) { return c * series::detail::tail_bound(4, nd, true, 2, static_cast<double>(k)); };
      auto tr = series::truncated_sum(term, first, 2, std::nullopt, n + 1, tail, btol, opt.k_max);
      for (auto& s : tr.partial_sums) s += 0.25;
      r.brute = tr.value();
      r.components = {{"diagonal", 0.25}, {"off_diagonal", r.brute - 0.25}};
      r.trace = std::move(tr);
    } else {
      r.closed = c * 0.5 * detail::pi2() * series::weighted_k2_sum(3, n);
      auto term = [&](long long k) {
        const int kk = static_cast<int>(k);
        const double v = isw::x_me(n, kk);
        return v * v * isw::energy_gap(n, kk);
      };
      auto tail = [&](long long k) {
        return c * 0.5 * detail::pi2() * series::detail::tail_bound(3, nd, true, 2, static_cast<double>(k));
      };
      auto tr = series::truncated_sum(term, first, 2, std::nullopt, n + 1, tail, btol, opt.k_max);
      r.brute = tr.value();
      r.trace = std::move(tr);
    }
    return r;
  }

  // Monopole: every k != n couples.
  r.closed = c * 0.5 * detail::pi2() * series::removed_term_sum_limit(n);
  double lower = 0.0;
  auto term = [&](long long k) {
    const int kk = static_cast<int>(k);
    const double v = isw::x2_me(n, kk);
    const double t = v * v * isw::energy_gap(n, kk);
    if (kk < n) lower += t;
    return t;
  };
  auto tail = [&](long long k) {
    return c * 0.5 * detail::pi2() * series::detail::tail_bound(3, nd, true, 1, static_cast<double>(k));
  };
  auto tr = series::truncated_sum(term, 1, 1, static_cast<long long>(n), n + 1, tail, btol, opt.k_max);
  r.brute = tr.value();
  r.components = {{"lower_states", lower}, {"upper_states", r.brute - lower}};
  r.trace = std::move(tr);
  return r;
}

struct OscillatorStrengthTable {
  std::vector<std::pair<int, double>> entries;  // (k, f_nk)
  double sum = 0.0;
  double tail_estimate = 0.0;
};

/// f_nk = 2 (E_k - E_n) |<n|x|k>|^2 for k = 1..k_max.
inline OscillatorStrengthTable oscillator_strengths(int n, int k_max) {
  if (n < 1) throw DomainError("square-well level must be >= 1");
  if (k_max <= n) throw DomainError("k_max must exceed n");
  OscillatorStrengthTable t;
  t.entries.reserve(static_cast<std::size_t>(k_max));
  CompensatedSum acc;
  for (int k = 1; k <= k_max; ++k) {
    const double v = isw::x_me(n, k);
    const double f = k == n ? 0.0 : 2.0 * isw::energy_gap(n, k) * v * v;
    t.entries.emplace_back(k, f);
    acc.add(f);
  }
  t.sum = acc.value();
  // Last coupled k has parity opposite to n.
  const int k_last = ((k_max + n) % 2 == 1) ? k_max : k_max - 1;
  t.tail_estimate = 2.0 * detail::dipole_coeff(n) * 0.5 * detail::pi2() *
                    series::detail::tail_bound(3, n, true, 2, static_cast<double>(k_last));
  return t;
}

// ---------------------------------------------------------------------------
// Delta well
// ---------------------------------------------------------------------------

namespace detail {

/// Half-line integral of an even rational integrand from its full-line contour value.
inline double half_line(const residue::FactoredRational& f) { return 0.5 * residue::contour_integral_uhp(f); }

inline residue::ComplexPoly k_squared() { return residue::ComplexPoly({0.0, 0.0, 1.0}); }

inline void cross_check(double a, double b, double tol, const std::string& what) {
  if (std::abs(a - b) > tol * std::max(std::abs(a), kRelErrFloor))
    throw Inconsistency(what + ": residue and quadrature routes disagree");
}

}  // namespace detail

inline double oscillator_strength_density(double k) {
  const double v = delta::x_me_bound(k);
  return 2.0 * delta::energy_gap(k) * v * v;
}

/// Integral of the continuum oscillator-strength density over k > 0.
inline QuadratureResult oscillator_strength_integral(double quad_tol = 1e-12) {
  return quad::integrate_semi_inf([](double k) { return k > 0.0 ? oscillator_strength_density(k) : 0.0; }, 1.0,
                                  quad_tol);
}

inline LhsResult lhs_delta(const SumRuleSpec& spec, const VerifyOptions& opt = {}) {
  spec.validate();
  using residue::build_lorentzian_power;
  const double pi = std::numbers::pi;
  LhsResult r;
  // The integrands all vanish at k = 0; the guard keeps the mapped endpoint finite.
  auto on_half_line = [&](auto g, double scale) {
    return quad::integrate_semi_inf([&](double k) { return k > 0.0 ? g(k) : 0.0; }, scale, opt.quad_tol);
  };

  if (spec.op == Operator::exp_iqx) {
    const double q = spec.q;
    const double qq = q * q;
    const double odd_res = 8.0 * qq / pi * detail::half_line(residue::build_bethe_integrand(Parity::odd, q, 1.0));
    const double even_res =
        8.0 * qq * qq / pi * detail::half_line(residue::build_bethe_integrand(Parity::even, q, 1.0));
    const double scale = std::max(q, 1.0);
    auto odd_q = on_half_line([&](double k) {
      const double v = delta::bethe_me(Parity::odd, q, k);
      return v * v * delta::energy_gap(k);
    }, scale);
    auto even_q = on_half_line([&](double k) {
      const double v = delta::bethe_me(Parity::even, q, k);
      return v * v * delta::energy_gap(k);
    }, scale);
    detail::cross_check(odd_res, odd_q.value, opt.cross_check, "odd Bethe channel");
    detail::cross_check(even_res, even_q.value, opt.cross_check, "even Bethe channel");
    r.closed = odd_res + even_res;
    QuadratureResult total{odd_q.value + even_q.value, odd_q.est_error + even_q.est_error,
                           odd_q.evaluations + even_q.evaluations, odd_q.converged && even_q.converged};
    r.brute = total.value;
    r.trace = total;
    r.components = {{"B_odd", odd_res}, {"B_even", even_res},
                    {"B_odd_quadrature", odd_q.value}, {"B_even_quadrature", even_q.value}};
    return r;
  }

  QuadratureResult qr;
  if (spec.op == Operator::x && spec.power == 0) {
    r.closed = 16.0 / pi * detail::half_line(build_lorentzian_power(detail::k_squared(), 1.0, 4));
    qr = on_half_line([](double k) { const double v = delta::x_me_bound(k); return v * v; }, 1.0);
  } else if (spec.op == Operator::x) {
    r.closed = 8.0 / pi * detail::half_line(build_lorentzian_power(detail::k_squared(), 1.0, 3));
    qr = on_half_line([](double k) {
      const double v = delta::x_me_bound(k);
      return v * v * delta::energy_gap(k);
    }, 1.0);
  } else {
    r.closed = 32.0 / pi * detail::half_line(build_lorentzian_power(detail::k_squared(), 1.0, 4));
    qr = on_half_line([](double k) {
      const double v = delta::x2_me_bound(k);
      return v * v * delta::energy_gap(k);
    }, 1.0);
  }
  detail::cross_check(r.closed, qr.value, opt.cross_check, spec.id());
  r.brute = qr.value;
  r.trace = qr;
  return r;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace detail {

inline VerificationReport make_report(const std::string& rule, const ModelSpec& model, double analytic,
                                      LhsResult&& lhs, double tol) {
  VerificationReport rep;
  rep.rule_id = rule;
  rep.model = to_string(model.kind());
  rep.analytic = analytic;
  rep.numeric_closed = lhs.closed;
  rep.numeric_brute = lhs.brute;
  rep.tolerance = tol;
  rep.trace = std::move(lhs.trace);
  rep.components = std::move(lhs.components);
  rep.finalize();
  return rep;
}

inline void add_model_params(VerificationReport& rep, const ModelSpec& model) {
  rep.params["hbar"] = model.scales().hbar;
  rep.params["mass"] = model.scales().mass;
  if (model.kind() == ModelKind::isw) rep.params["width"] = model.width();
  else rep.params["kappa0"] = model.kappa0();
}

}  // namespace detail

/// Checks one sum rule for level n of the square well (n is ignored for the
/// delta well, whose only bound state is the reference). Dimensional
/// inputs (q) and outputs follow the model's unit scales.
inline VerificationReport verify(const SumRuleSpec& spec, const ModelSpec& model, int n = 1,
                                 const VerifyOptions& opt = {}) {
  const auto red = to_reduced(model);
  SumRuleSpec rs = spec;
  if (spec.op == Operator::exp_iqx) rs.q = red.scale.wavenumber_to_reduced(spec.q);
  rs.validate();
  LhsResult lhs = model.kind() == ModelKind::isw ? lhs_isw(rs, n, opt) : lhs_delta(rs, opt);
  auto rep = detail::make_report(spec.id(), model, analytic_rhs(rs, model.kind(), n), std::move(lhs), opt.tol);
  detail::add_model_params(rep, model);
  if (model.kind() == ModelKind::isw) rep.params["n"] = n;
  if (spec.op == Operator::exp_iqx) rep.params["q"] = spec.q;
  const auto [e, l] = spec.dimensions();
  rep.rescale(red.scale, e, l);
  return rep;
}

/// Second-order shift in a field F x, via the perturbation sum (square well)
/// or continuum integral (delta well), against the closed form.
inline VerificationReport stark_verify(const ModelSpec& model, int n, double field, const VerifyOptions& opt = {}) {
  if (!std::isfinite(field)) throw DomainError("field must be finite");
  const auto red = to_reduced(model);
  const double f = red.scale.field_to_reduced(field);
  const double ff = f * f;
  const double pi = std::numbers::pi;
  LhsResult lhs;
  double analytic = 0.0;

  if (model.kind() == ModelKind::isw) {
    if (n < 1) throw DomainError("square-well level must be >= 1");
    analytic = isw::stark_shift2(n, f);
    const double c = 2.0 / (pi * pi) * detail::dipole_coeff(n);
    lhs.closed = -ff * c * series::weighted_k2_sum(5, n);
    double lower = 0.0;
    auto term = [&](long long k) {
      const int kk = static_cast<int>(k);
      const double v = isw::x_me(n, kk);
      const double t = -ff * v * v / isw::energy_gap(n, kk);
      if (kk < n) lower += t;
      return t;
    };
    auto tail = [&](long long k) {
      return ff * c * series::detail::tail_bound(5, n, true, 2, static_cast<double>(k));
    };
    const long long first = (n % 2 == 1) ? 2 : 1;
    auto tr = series::truncated_sum(term, first, 2, std::nullopt, n + 1, tail, detail::brute_tolerance(opt.tol),
                                    opt.k_max);
    lhs.brute = tr.value();
    lhs.trace = std::move(tr);
    lhs.components = {{"lower_states", lower}, {"upper_states", lhs.brute - lower}};
  } else {
    analytic = delta::stark_shift2_delta(f);
    lhs.closed = -ff * 32.0 / pi *
                 detail::half_line(residue::build_lorentzian_power(detail::k_squared(), 1.0, 5));
    auto qr = quad::integrate_semi_inf(
        [&](double k) {
          if (!(k > 0.0)) return 0.0;
          const double v = delta::x_me_bound(k);
          return v * v / delta::energy_gap(k);
        },
        1.0, opt.quad_tol);
    lhs.brute = -ff * qr.value;
    qr.value = lhs.brute;
    qr.est_error *= ff;
    if (ff > 0.0) detail::cross_check(lhs.closed, lhs.brute, opt.cross_check, "stark");
    lhs.trace = qr;
    lhs.components = {{"lower_states", 0.0}, {"upper_states", lhs.brute}};
  }

  auto rep = detail::make_report("stark", model, analytic, std::move(lhs), opt.tol);
  detail::add_model_params(rep, model);
  if (model.kind() == ModelKind::isw) rep.params["n"] = n;
  rep.params["F"] = field;
  rep.rescale(red.scale, 1, 0);
  return rep;
}

}  // namespace sumrules
