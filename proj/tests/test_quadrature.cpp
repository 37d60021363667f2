#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sumrules/quadrature.hpp"

using namespace sumrules;
using namespace sumrules::quad;

namespace {
constexpr double pi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double lorentz(double k) { return 1.0 / (k * k + 1.0); }
double closure_integrand(double k) { return k * k / std::pow(k * k + 1.0, 4); }
double stark_integrand(double k) { return k * k / std::pow(k * k + 1.0, 5); }
}  // namespace

TEST(Finite, PolynomialIsExact) {
  const auto r = integrate([](double x) { return 3 * x * x + 1; }, 0.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 10.0, 1e-14);
}

TEST(Finite, SineSquaredNormalisation) {
  const auto r = integrate([](double x) { return 2 * std::pow(std::sin(7 * pi * x), 2); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
}

TEST(Finite, EmptyAndReversedIntervals) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
  EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0).value, -0.5, 1e-15);
}

TEST(SemiInf, Lorentzian) {
  const auto r = integrate_semi_inf(lorentz, 1.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel(r.value, pi / 2), 1e-13);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(SemiInf, ClosureIntegrand) {
  const auto r = integrate_semi_inf(closure_integrand, 1.0, 1e-12);
  EXPECT_LT(rel(r.value, pi / 32), 1e-13);
  EXPECT_NEAR(16 / pi * r.value, 0.5, 1e-13);
}

// B(3/2, 7/2)/2 from the Gamma function, and a fixed Gauss-Legendre rule.
TEST(SemiInf, StarkIntegrandAgainstBetaFunction) {
  const double beta = std::tgamma(1.5) * std::tgamma(3.5) / std::tgamma(5.0);
  EXPECT_NEAR(beta / 2, 5 * pi / 256, 1e-15);
  const auto r = integrate_semi_inf(stark_integrand, 1.0, 1e-12);
  EXPECT_LT(rel(r.value, beta / 2), 1e-13);
  EXPECT_LT(rel(oracle::gauss_legendre_semi_inf(stark_integrand), beta / 2), 1e-12);
}

TEST(SemiInf, ErrorEstimateIsConservative) {
  struct Case {
    double (*f)(double);
    double exact;
  };
  const Case cases[] = {{lorentz, pi / 2}, {closure_integrand, pi / 32}, {stark_integrand, 5 * pi / 256}};
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    for (const auto& c : cases) {
      const auto r = integrate_semi_inf(c.f, 1.0, tol);
      EXPECT_LE(std::abs(r.value - c.exact), 10 * r.est_error + 1e-16) << tol;
      EXPECT_EQ(r.converged, r.est_error <= tol * std::abs(r.value));
    }
  }
}

TEST(SemiInfProperty, ScaleInvariance) {
  for (double lambda : {0.5, 2.0, 10.0}) {
    auto g = [lambda](double k) { return closure_integrand(k / lambda) / lambda; };
    const double ref = integrate_semi_inf(closure_integrand, 1.0, 1e-13).value;
    EXPECT_LT(rel(integrate_semi_inf(g, 1.0, 1e-13).value, ref), 1e-10) << lambda;
    EXPECT_LT(rel(integrate_semi_inf(g, lambda, 1e-13).value, ref), 1e-10) << lambda;
  }
}

TEST(RealLine, EvenFunctionIsTwiceHalfLine) {
  const double half = integrate_semi_inf(closure_integrand, 1.0, 1e-13).value;
  const double full = integrate_real_line(closure_integrand, 1.0, 1e-13).value;
  EXPECT_LT(rel(full, 2 * half), 1e-12);
}

TEST(RealLine, SquaredLorentzian) {
  const auto r = integrate_real_line([](double k) { return std::pow(k * k + 1.0, -2); }, 1.0, 1e-12);
  EXPECT_LT(rel(r.value, pi / 2), 1e-12);
}

TEST(RealLine, OddFunctionVanishes) {
  const auto r = integrate_real_line([](double k) { return k / std::pow(k * k + 1.0, 3); }, 1.0,
                                     Options{1e-12, 1e-15});
  EXPECT_NEAR(r.value, 0.0, 1e-14);
}

TEST(RealLine, OffCentrePeak) {
  // Lorentzian of width 0.1 centred at k = 5, total weight pi.
  auto f = [](double k) { return 0.1 / ((k - 5) * (k - 5) + 0.01); };
  EXPECT_LT(rel(integrate_real_line(f, 5.0, 1e-12).value, pi), 1e-11);
}

TEST(Errors, NaNIntegrandIsDomainError) {
  EXPECT_THROW(integrate_semi_inf([](double) { return std::nan(""); }, 1.0, 1e-10), DomainError);
  EXPECT_THROW(integrate_semi_inf(lorentz, 0.0, 1e-10), DomainError);
  EXPECT_THROW(integrate(lorentz, 0.0, INFINITY), DomainError);
}

TEST(Errors, PanelCapGivesUnconvergedResult) {
  Options o;
  o.rel_tol = 1e-15;
  o.max_panels = 20;
  const auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, o);
  EXPECT_FALSE(r.converged);
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-6);
}
