#pragma once

// Sums of the family
//
//   S_p(z)     = sum_{k>=1}      1 / (k^2 - z^2)^p
//   S_p^(+)(z) = sum_{k even}    1 / (k^2 - z^2)^p
//   S_p^(-)(z) = sum_{k odd}     1 / (k^2 - z^2)^p
//
// evaluated in closed form from the partial-fraction expansion of the
// cotangent, S_1(z) = 1/(2z^2) - pi cot(pi z)/(2z), and the recursion
// S_{p+1} = (1/(2pz)) dS_p/dz. Every S_p is a polynomial in h = pi cot(pi z)
// (or h = (pi/2) tan(pi z/2) for the odd sums) with Laurent coefficients in z;
// since h' is quadratic in h the recursion closes on those coefficient tables,
// which are generated at compile time below.
//
// Also here: the k^2-weighted sums used by the square-well rules, the
// removed-term limit T(n), and the brute-force truncated sums that serve as
// their independent oracle.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sumrules/core.hpp"

namespace sumrules::series {

inline constexpr int kMaxPower = 6;

// Closed forms refuse to evaluate closer than this to a lattice pole.
inline constexpr double kPoleGuard = 1e-8;

namespace detail {

inline constexpr int kMaxZPow = 2 * kMaxPower;
inline constexpr int kMaxHPow = kMaxPower;

// coef[a][b] multiplies z^(-a) h^b.
template <class Real>
struct TrigTable {
  std::array<std::array<Real, kMaxHPow + 1>, kMaxZPow + 1> coef{};
};

// Maps the table of S_p to that of S_{p+1} = (1/(2pz)) dS_p/dz, for a
// generator satisfying h' = alpha + beta h^2.
template <class Real>
constexpr TrigTable<Real> raise_power(const TrigTable<Real>& s, int p, Real alpha, Real beta) {
  TrigTable<Real> d{};
  const Real f = Real(2) * p;
  for (int a = 0; a <= kMaxZPow; ++a) {
    for (int b = 0; b <= kMaxHPow; ++b) {
      const Real c = s.coef[a][b];
      if (c == Real(0)) continue;
      if (a > 0) d.coef[a + 2][b] += -a * c / f;
      if (b > 0) {
        d.coef[a + 1][b - 1] += b * alpha * c / f;
        d.coef[a + 1][b + 1] += b * beta * c / f;
      }
    }
  }
  return d;
}

template <class Real>
constexpr std::array<TrigTable<Real>, kMaxPower> build_tables(TrigTable<Real> first, Real alpha, Real beta) {
  std::array<TrigTable<Real>, kMaxPower> out{};
  out[0] = first;
  for (int p = 1; p < kMaxPower; ++p) out[p] = raise_power(out[p - 1], p, alpha, beta);
  return out;
}

// h = pi cot(pi z), h' = -pi^2 - h^2, S_1 = 1/(2z^2) - h/(2z)
template <class Real>
constexpr auto make_all_tables() {
  constexpr Real pi = std::numbers::pi_v<Real>;
  TrigTable<Real> t{};
  t.coef[2][0] = Real(0.5);
  t.coef[1][1] = Real(-0.5);
  return build_tables<Real>(t, -pi * pi, Real(-1));
}

// h = (pi/2) tan(pi z/2), h' = pi^2/4 + h^2, S_1^(-) = h/(2z)
template <class Real>
constexpr auto make_odd_tables() {
  constexpr Real pi = std::numbers::pi_v<Real>;
  TrigTable<Real> t{};
  t.coef[1][1] = Real(0.5);
  return build_tables<Real>(t, pi * pi / Real(4), Real(1));
}

template <class Real>
inline constexpr auto kAllTables = make_all_tables<Real>();
template <class Real>
inline constexpr auto kOddTables = make_odd_tables<Real>();

template <class Real>
Real eval_table(const TrigTable<Real>& t, Real z, Real h) {
  const Real zi = Real(1) / z;
  Real acc = 0;
  for (int a = kMaxZPow; a >= 0; --a) {
    Real row = 0;
    for (int b = kMaxHPow; b >= 0; --b) row = row * h + t.coef[a][b];
    acc = acc * zi + row;
  }
  return acc;
}

// Both generators are evaluated on a reduced argument so that sin/tan never
// see an argument near a nonzero multiple of pi, which would cost relative
// accuracy right where the sums are steepest.
template <class Real>
Real pi_cot_pi(Real z) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real r = z - std::nearbyint(z);  // period 1, r in [-1/2, 1/2]
  return pi * std::cos(pi * r) / std::sin(pi * r);
}

template <class Real>
Real half_pi_tan_half_pi(Real z) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real half_pi = pi / Real(2);
  const Real r = z - Real(2) * std::nearbyint(z / Real(2));  // period 2, r in [-1, 1]
  // tan(pi r/2) = cot(pi (1 - r)/2) folds |r| > 1/2 back toward 0
  if (r > Real(0.5)) return half_pi / std::tan(half_pi * (Real(1) - r));
  if (r < Real(-0.5)) return -half_pi / std::tan(half_pi * (Real(1) + r));
  return half_pi * std::tan(half_pi * r);
}

/// zeta(s) for even s >= 2.
template <class Real>
Real zeta_even(int s) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  // B_2 .. B_20 as numerator/denominator pairs
  static constexpr std::array<std::array<long long, 2>, 10> bernoulli{{
      {1, 6}, {-1, 30}, {1, 42}, {-1, 30}, {5, 66},
      {-691, 2730}, {7, 6}, {-3617, 510}, {43867, 798}, {-174611, 330}}};
  if (s <= 20) {
    const int j = s / 2;
    Real fact = 1;
    for (int i = 2; i <= s; ++i) fact *= i;
    const Real b = Real(bernoulli[j - 1][0]) / Real(bernoulli[j - 1][1]);
    const Real sign = (j % 2 == 1) ? Real(1) : Real(-1);
    return sign * b * std::pow(Real(2) * pi, s) / (Real(2) * fact);
  }
  Real acc = 0;
  for (int n = 40; n >= 1; --n) acc += std::pow(static_cast<Real>(n), -s);
  return acc;
}

// sum_m C(p+m-1, m) c(2p+2m) z^(2m) with c = zeta (all k) or the odd-k
// lambda function. Valid for |z| < 1; used for |z| < 0.5.
template <class Real>
Real small_z_series(int p, Real z, bool odd_only) {
  const Real x = z * z;
  Real binom = 1;
  Real xm = 1;
  Real acc = 0;
  for (int m = 0; m < 400; ++m) {
    const int s = 2 * p + 2 * m;
    Real c = zeta_even<Real>(s);
    if (odd_only) c *= Real(1) - std::pow(Real(2), -s);
    const Real term = binom * c * xm;
    acc += term;
    if (term < Real(1e-21) * acc) break;
    binom *= static_cast<Real>(p + m) / static_cast<Real>(m + 1);
    xm *= x;
  }
  return acc;
}

inline constexpr double kSeriesSwitch = 0.5;

inline void check_power(int p) {
  if (p < 1 || p > kMaxPower)
    throw Unsupported("power p=" + std::to_string(p) + " outside supported range 1.." +
                      std::to_string(kMaxPower));
}

inline void check_finite(double z) {
  if (!std::isfinite(z)) throw DomainError("series argument must be finite");
}

// Throws when |z| is within the guard of a nonzero lattice integer of the
// summation parity.
inline void guard_pole(double z, Parity lattice) {
  const double az = std::abs(z);
  const double m = std::nearbyint(az);
  if (m == 0.0 || std::abs(az - m) >= kPoleGuard) return;
  const bool m_even = std::fmod(m, 2.0) == 0.0;
  const bool hit = lattice == Parity::all || (lattice == Parity::even && m_even) ||
                   (lattice == Parity::odd && !m_even);
  if (hit)
    throw PoleError("z is within the pole guard of the lattice point k=" +
                    std::to_string(static_cast<long long>(m)));
}

template <class Real>
Real sp_all_unchecked(int p, Real z) {
  const Real az = std::abs(z);
  if (az < Real(kSeriesSwitch)) return small_z_series<Real>(p, az, false);
  return eval_table<Real>(kAllTables<Real>[p - 1], az, pi_cot_pi(az));
}

template <class Real>
Real sp_odd_unchecked(int p, Real z) {
  const Real az = std::abs(z);
  if (az < Real(kSeriesSwitch)) return small_z_series<Real>(p, az, true);
  return eval_table<Real>(kOddTables<Real>[p - 1], az, half_pi_tan_half_pi(az));
}

template <class Real>
Real sp_unchecked(int p, Parity parity, Real z) {
  switch (parity) {
    case Parity::all: return sp_all_unchecked<Real>(p, z);
    case Parity::even: return std::pow(Real(4), -p) * sp_all_unchecked<Real>(p, Real(0.5) * z);
    case Parity::odd: return sp_odd_unchecked<Real>(p, z);
  }
  return 0;
}

template <class Real>
Real weighted_unchecked(int p, Real z, Parity parity) {
  return sp_unchecked<Real>(p - 1, parity, z) + z * z * sp_unchecked<Real>(p, parity, z);
}

// T(z;n) in working precision Real.
template <class Real>
Real removed_term_unchecked(Real z, int n) {
  const Real nr = n;
  const Real d = (nr - z) * (nr + z);  // n - z is exact near the pole
  return weighted_unchecked<Real>(3, z, Parity::all) - nr * nr / (d * d * d);
}

/// Rigorous bound on sum_{j>=1} f(K + stride*j) for f(k) = k^w / (k^2 - z^2)^p,
/// from the integral test with the majorant x^(w-2p) (1 - z^2/K^2)^(-p).
inline double tail_bound(int p, double z, bool weight_k2, long long stride, double k_last) {
  if (k_last <= std::abs(z)) return std::numeric_limits<double>::max();
  const int w = weight_k2 ? 2 : 0;
  const int e = 2 * p - w - 1;
  return std::pow(1.0 - z * z / (k_last * k_last), -p) * std::pow(k_last, -e) /
         (e * static_cast<double>(stride));
}

}  // namespace detail

/// S_1(z) = 1/(2z^2) - pi cot(pi z)/(2z); z = 0 gives zeta(2).
inline double s1_closed(double z) {
  detail::check_finite(z);
  detail::guard_pole(z, Parity::all);
  return detail::sp_all_unchecked<double>(1, z);
}

inline double sp_closed(int p, double z) {
  detail::check_power(p);
  detail::check_finite(z);
  detail::guard_pole(z, Parity::all);
  return detail::sp_all_unchecked<double>(p, z);
}

/// Parity-restricted sums. The even sum is 4^-p S_p(z/2); the odd sum comes
/// from its own tan-form recursion so it stays regular at even integers.
inline double sp_parity_closed(int p, Parity parity, double z) {
  detail::check_power(p);
  detail::check_finite(z);
  detail::guard_pole(z, parity);
  return detail::sp_unchecked<double>(p, parity, z);
}

/// sum over k in `parity` of k^2 / (k^2 - z^2)^p = S_{p-1}(z) + z^2 S_p(z).
inline double weighted_k2_closed(int p, double z, Parity parity) {
  if (p < 3 || p > 5) throw Unsupported("weighted sums are supported for p in {3,4,5}");
  detail::check_finite(z);
  detail::guard_pole(z, parity);
  return detail::weighted_unchecked<double>(p, z, parity);
}

/// sum over k of parity opposite to n of k^2 / (k^2 - n^2)^p.
inline double weighted_k2_sum(int p, int n) {
  if (n < 1) throw DomainError("level index n must be >= 1");
  const Parity parity = (n % 2 == 1) ? Parity::even : Parity::odd;
  return weighted_k2_closed(p, static_cast<double>(n), parity);
}

/// T(z;n) = sum_{k != n} k^2/(k^2 - z^2)^3 for non-integer z, evaluated in
/// extended precision since both pieces blow up as z -> n.
inline double removed_term_sum(double z, int n) {
  if (n < 1) throw DomainError("level index n must be >= 1");
  detail::check_finite(z);
  detail::guard_pole(z, Parity::all);
  return static_cast<double>(detail::removed_term_unchecked<long double>(z, n));
}

/// Closed value of lim_{z->n} T(z;n) = (pi^2/16n^2)(1/3 - 1/(2 n^2 pi^2)).
inline double removed_term_closed(int n) {
  if (n < 1) throw DomainError("level index n must be >= 1");
  const double pi = std::numbers::pi;
  const double nn = static_cast<double>(n) * n;
  return pi * pi / (16.0 * nn) * (1.0 / 3.0 - 1.0 / (2.0 * nn * pi * pi));
}

struct Extrapolation {
  double value = 0.0;
  double last_change = 0.0;
  int steps = 0;
};

/// lim_{eps->0} T(n+eps; n) by Richardson extrapolation. Both pieces of T
/// diverge like 1/eps^3, so eps stays >= ~1e-4 and the symmetric average
/// [T(n+eps) + T(n-eps)]/2, an even function of eps, is extrapolated in eps^2.
inline Extrapolation removed_term_extrapolation(int n, double accept = 1e-10) {
  if (n < 1) throw DomainError("level index n must be >= 1");
  using Real = long double;
  constexpr int kMaxSteps = 10;
  std::array<std::array<Real, kMaxSteps>, kMaxSteps> tab{};
  std::array<Real, kMaxSteps> h{};
  const Real center = n;
  Real eps = 0.1L;
  for (int j = 0; j < kMaxSteps; ++j, eps *= 0.5L) {
    h[j] = eps * eps;
    tab[j][0] = 0.5L * (detail::removed_term_unchecked<Real>(center + eps, n) +
                        detail::removed_term_unchecked<Real>(center - eps, n));
    for (int i = 1; i <= j; ++i)
      tab[j][i] = tab[j][i - 1] + (tab[j][i - 1] - tab[j - 1][i - 1]) / (h[j - i] / h[j] - 1.0L);
    if (j > 0) {
      const auto change = static_cast<double>(std::abs(tab[j][j] - tab[j][j - 1]));
      if (change < accept * std::abs(static_cast<double>(tab[j][j])))
        return {static_cast<double>(tab[j][j]), change, j + 1};
    }
  }
  throw NumericalInstability("removed-term extrapolation did not settle for n=" + std::to_string(n));
}

inline double removed_term_sum_limit(int n) { return removed_term_extrapolation(n).value; }

// ---------------------------------------------------------------------------
// Brute-force truncated sums
// ---------------------------------------------------------------------------

/// Sums term(k) for k = first, first+stride, ... up to k_max, skipping
/// `exclude`. Stops once k >= check_from and both |term| and tail(k) fall
/// below tol relative to the running sum. Partial sums are sampled at
/// power-of-two term counts.
template <class Term, class Tail>
TruncationTrace truncated_sum(Term&& term, long long first, long long stride, std::optional<long long> exclude,
                              long long check_from, Tail&& tail, double tol, long long k_max) {
  TruncationTrace tr;
  CompensatedSum acc;
  long long k_last = first - stride;
  std::size_t next_sample = 1;
  for (long long k = first; k <= k_max; k += stride) {
    if (exclude && *exclude == k) continue;
    const double t = term(k);
    if (!std::isfinite(t)) throw DomainError("non-finite term at k=" + std::to_string(k));
    acc.add(t);
    k_last = k;
    tr.last_term = t;
    ++tr.terms_used;
    if (tr.terms_used == next_sample) {
      tr.partial_sums.push_back(acc.value());
      tr.checkpoints.push_back(tr.terms_used);
      next_sample *= 2;
    }
    if (k >= check_from) {
      const double scale = std::max(std::abs(acc.value()), kRelErrFloor);
      if (std::abs(t) < tol * scale && tail(k) <= tol * scale) {
        tr.converged = true;
        break;
      }
    }
  }
  if (tr.checkpoints.empty() || tr.checkpoints.back() != tr.terms_used) {
    tr.partial_sums.push_back(acc.value());
    tr.checkpoints.push_back(tr.terms_used);
  }
  tr.tail_estimate = k_last >= check_from ? tail(k_last) : std::numeric_limits<double>::max();
  return tr;
}

struct BruteQuery {
  int p = 1;
  double z = 0.0;
  Parity parity = Parity::all;
  bool weight_k2 = false;
  std::optional<long long> exclude;
  double tol = 1e-12;
  long long k_max = 10'000'000;
};

/// Direct partial sums of sum_k [k^2]/(k^2 - z^2)^p over the requested parity.
inline TruncationTrace brute_sum(const BruteQuery& q) {
  if (q.p < 1) throw DomainError("power must be >= 1");
  if (q.weight_k2 && q.p < 2) throw DomainError("weighted sum diverges for p < 2");
  detail::check_finite(q.z);
  const long long stride = q.parity == Parity::all ? 1 : 2;
  const long long first = q.parity == Parity::even ? 2 : 1;
  auto term = [&](long long k) {
    const double kd = static_cast<double>(k);
    const double kk = kd * kd;
    const double d = (kd - q.z) * (kd + q.z);
    double denom = 1.0;
    for (int i = 0; i < q.p; ++i) denom *= d;
    return (q.weight_k2 ? kk : 1.0) / denom;
  };
  auto tail = [&](long long k) { return detail::tail_bound(q.p, q.z, q.weight_k2, stride, static_cast<double>(k)); };
  const auto check_from = static_cast<long long>(std::floor(std::abs(q.z))) + 2;
  return truncated_sum(term, first, stride, q.exclude, check_from, tail, q.tol, q.k_max);
}

}  // namespace sumrules::series
