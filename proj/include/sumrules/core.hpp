#pragma once

// Shared vocabulary for the sum-rule library: errors, unit handling, model
// descriptors, and the trace/report records every other module produces.
//
// Everything downstream works in reduced units (hbar = m = 1 and either the
// well width a = 1 or the delta-well wavenumber K0 = 1). Dimensional values
// only appear at the API boundary through ScalePair.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace sumrules {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// Closed form asked to evaluate on (or within the guard distance of) a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's domain (n < 1, x outside the well, NaN...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalInstability : public Error {
 public:
  using Error::Error;
};

// Rational integrand whose large-arc contribution does not vanish.
class ArcDivergence : public Error {
 public:
  using Error::Error;
};

// Two evaluation routes that must agree do not.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

inline constexpr double kRelErrFloor = 1e-300;
inline constexpr double kDefaultTolerance = 1e-9;

enum class Parity { all, even, odd };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::all: return "all";
    case Parity::even: return "even";
    case Parity::odd: return "odd";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Units and models
// ---------------------------------------------------------------------------

struct UnitScales {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(std::isfinite(hbar) && hbar > 0.0))
      throw InvalidSpec("hbar must be positive and finite");
    if (!(std::isfinite(mass) && mass > 0.0))
      throw InvalidSpec("mass must be positive and finite");
  }
};

enum class ModelKind { isw, delta };

inline const char* to_string(ModelKind k) {
  return k == ModelKind::isw ? "isw" : "delta";
}

/// Infinite square well of width a on [0, a], or the attractive
/// delta well V = -g delta(x) parametrised by K0 = m g / hbar^2.
class ModelSpec {
 public:
  static ModelSpec isw(double width, UnitScales scales = {}) {
    scales.validate();
    if (!(std::isfinite(width) && width > 0.0))
      throw InvalidSpec("well width must be positive and finite");
    return ModelSpec(ModelKind::isw, width, scales);
  }

  static ModelSpec delta(double kappa0, UnitScales scales = {}) {
    scales.validate();
    if (!(std::isfinite(kappa0) && kappa0 > 0.0))
      throw InvalidSpec("kappa0 must be positive and finite");
    return ModelSpec(ModelKind::delta, kappa0, scales);
  }

  ModelKind kind() const { return kind_; }
  const UnitScales& scales() const { return scales_; }

  double width() const {
    if (kind_ != ModelKind::isw) throw InvalidSpec("width is only defined for the square well");
    return param_;
  }

  double kappa0() const {
    if (kind_ != ModelKind::delta) throw InvalidSpec("kappa0 is only defined for the delta well");
    return param_;
  }

  /// Delta strength g = hbar^2 K0 / m.
  double coupling() const { return scales_.hbar * scales_.hbar * kappa0() / scales_.mass; }

  /// Hydrogen-analogue length a0 = 1 / K0.
  double bohr_length() const { return 1.0 / kappa0(); }

 private:
  ModelSpec(ModelKind kind, double param, UnitScales scales)
      : kind_(kind), param_(param), scales_(scales) {}

  ModelKind kind_;
  double param_;
  UnitScales scales_;
};

/// Conversion factors between reduced and dimensional quantities.
struct ScalePair {
  double energy_unit = 1.0;
  double length_unit = 1.0;

  double energy(double reduced) const { return reduced * energy_unit; }
  double length(double reduced) const { return reduced * length_unit; }

  /// Scales a reduced value carrying dimensions energy^e * length^l.
  double dimensional(double reduced, int energy_power, int length_power) const {
    return reduced * std::pow(energy_unit, energy_power) * std::pow(length_unit, length_power);
  }

  double wavenumber_to_reduced(double k) const { return k * length_unit; }
  double field_to_reduced(double force) const { return force * length_unit / energy_unit; }
};

struct ReducedModel {
  ModelKind kind;
  ScalePair scale;
};

inline ReducedModel to_reduced(const ModelSpec& spec) {
  const auto& u = spec.scales();
  u.validate();
  const double h2m = u.hbar * u.hbar / u.mass;
  if (spec.kind() == ModelKind::isw) {
    const double a = spec.width();
    return {ModelKind::isw, {h2m / (a * a), a}};
  }
  const double k0 = spec.kappa0();
  return {ModelKind::delta, {h2m * k0 * k0, 1.0 / k0}};
}

// ---------------------------------------------------------------------------
// Traces and reports
// ---------------------------------------------------------------------------

/// Record of a truncated series: sampled partial sums plus a rigorous bound
/// on the discarded tail.
struct TruncationTrace {
  std::vector<double> partial_sums;        // sampled at `checkpoints`, last entry is the final sum
  std::vector<std::size_t> checkpoints;    // terms_used at each sample
  std::size_t terms_used = 0;
  double last_term = 0.0;
  double tail_estimate = 0.0;
  bool converged = false;

  double value() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using ConvergenceInfo = std::variant<TruncationTrace, QuadratureResult>;

inline double error_bound(const ConvergenceInfo& info) {
  return std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, TruncationTrace>) return r.tail_estimate;
        else return r.est_error;
      },
      info);
}

inline bool is_converged(const ConvergenceInfo& info) {
  return std::visit([](const auto& r) { return r.converged; }, info);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double relative_error(double reference, double value) {
  return std::abs(reference - value) / std::max(std::abs(reference), kRelErrFloor);
}

/// Outcome of checking one identity by two independent numerical routes
/// (a closed-form route and a brute-force route) against its analytic value.
struct VerificationReport {
  std::string rule_id;
  std::string model;
  std::map<std::string, double> params;
  double analytic = 0.0;
  double numeric_closed = 0.0;
  double numeric_brute = 0.0;
  double abs_err_closed = 0.0;
  double rel_err_closed = 0.0;
  double abs_err = 0.0;  // brute route
  double rel_err = 0.0;  // brute route
  double tolerance = kDefaultTolerance;
  ConvergenceInfo trace = TruncationTrace{};
  // Named partial contributions, e.g. the two parity channels of the Bethe rule.
  std::vector<std::pair<std::string, double>> components;
  bool passed = false;

  /// Recomputes the error fields and the pass flag from the three values.
  void finalize() {
    abs_err_closed = std::abs(analytic - numeric_closed);
    rel_err_closed = abs_err_closed / std::max(std::abs(analytic), kRelErrFloor);
    abs_err = std::abs(analytic - numeric_brute);
    rel_err = abs_err / std::max(std::abs(analytic), kRelErrFloor);
    passed = rel_err_closed <= tolerance && rel_err <= tolerance;
  }

  /// Converts value fields from reduced units; relative errors are unchanged.
  void rescale(const ScalePair& s, int energy_power, int length_power) {
    const double f = s.dimensional(1.0, energy_power, length_power);
    analytic *= f;
    numeric_closed *= f;
    numeric_brute *= f;
    for (auto& c : components) c.second *= f;
    std::visit(
        [f](auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, TruncationTrace>) {
            for (auto& v : r.partial_sums) v *= f;
            r.last_term *= f;
            r.tail_estimate *= std::abs(f);
          } else {
            r.value *= f;
            r.est_error *= std::abs(f);
          }
        },
        trace);
    finalize();
  }
};

}  // namespace sumrules
