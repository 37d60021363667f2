#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sumrules/quadrature.hpp"
#include "sumrules/residue.hpp"

using namespace sumrules;
using namespace sumrules::residue;

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double real_line(const FactoredRational& f, double scale) {
  return quad::integrate_real_line([&](double k) { return f(cplx(k, 0.0)).real(); }, scale, 1e-13).value;
}
}  // namespace

TEST(ComplexPoly, Arithmetic) {
  const ComplexPoly a({1.0, 2.0});        // 1 + 2z
  const ComplexPoly b({0.0, 0.0, 1.0});   // z^2
  const auto p = a * b + a;               // 1 + 2z + z^2 + 2z^3
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(p[3], cplx(2.0));
  EXPECT_EQ(p(cplx(1.0)), cplx(6.0));
  EXPECT_EQ(p.derivative()(cplx(0.0)), cplx(2.0));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ((a - a).degree(), -1);
  EXPECT_EQ(ComplexPoly::linear_power(I, 2)(I), cplx(0.0));
  EXPECT_EQ(ComplexPoly::linear_power(I, 3).degree(), 3);
  const auto s = p.shifted(cplx(0.5, -1.0));
  for (double t : {-1.0, 0.3, 2.0}) EXPECT_LT(std::abs(s(cplx(t)) - p(cplx(0.5 + t, -1.0))), 1e-13);
}

TEST(Residue, SimplePole) {
  const auto f = build_lorentzian_power(ComplexPoly({1.0}), 1.0, 1);
  const cplx r = residue_at(f, 0);
  EXPECT_NEAR(std::abs(r - 1.0 / (2.0 * I)), 0.0, 1e-16);
  EXPECT_NEAR(contour_integral_uhp(f), pi, 1e-15);
}

TEST(Residue, DoublePole) {
  const auto f = build_lorentzian_power(ComplexPoly({1.0}), 1.0, 2);
  EXPECT_NEAR(std::abs(residue_at(f, 0) - (-I / 4.0)), 0.0, 1e-16);
  EXPECT_NEAR(contour_integral_uhp(f), pi / 2, 1e-15);
  EXPECT_LT(rel(contour_integral_uhp(f), real_line(f, 1.0)), 1e-12);
}

TEST(Residue, HighOrderPoles) {
  const ComplexPoly k2({0.0, 0.0, 1.0});
  EXPECT_LT(rel(contour_integral_uhp(build_lorentzian_power(k2, 1.0, 4)), pi / 16), 1e-14);
  EXPECT_LT(rel(contour_integral_uhp(build_lorentzian_power(k2, 1.0, 5)), 5 * pi / 128), 1e-14);
  EXPECT_LT(rel(contour_integral_uhp(build_lorentzian_power(k2, 1.0, 3)), pi / 8), 1e-14);
}

TEST(Residue, Validation) {
  FactoredRational on_axis{ComplexPoly({1.0}), {{cplx(1.0, 0.0), 2}}};
  EXPECT_THROW(residue_at(on_axis, 0), DomainError);
  FactoredRational repeated{ComplexPoly({1.0}), {{I, 1}, {I, 1}, {-I, 2}}};
  EXPECT_THROW(contour_integral_uhp(repeated), InvalidSpec);
  FactoredRational bad_order{ComplexPoly({1.0}), {{I, 0}}};
  EXPECT_THROW(residue_at(bad_order, 0), InvalidSpec);
  EXPECT_THROW(residue_at(build_lorentzian_power(ComplexPoly({1.0}), 1.0, 1), 5), InvalidSpec);
}

TEST(Residue, ArcDivergence) {
  // k^2/(k^2+1): the large arc does not vanish.
  EXPECT_THROW(contour_integral_uhp(build_lorentzian_power(ComplexPoly({0.0, 0.0, 1.0}), 1.0, 1)), ArcDivergence);
}

TEST(Residue, NonRealIntegrandIsInconsistent) {
  // 1/((z - i)(z - 1 + i)) integrates to (4 pi - 2 pi i)/5.
  FactoredRational f{ComplexPoly({1.0}), {{I, 1}, {cplx(1.0, -1.0), 1}}};
  EXPECT_THROW(contour_integral_uhp(f), Inconsistency);
}

TEST(Bethe, Structure) {
  const auto odd = build_bethe_integrand(Parity::odd, 1.0, 1.0);
  EXPECT_EQ(odd.numerator.degree(), 4);
  EXPECT_EQ(odd.denominator_degree(), 8);
  ASSERT_EQ(odd.poles.size(), 4u);
  for (const auto& p : odd.poles) {
    EXPECT_EQ(p.order, 2);
    EXPECT_DOUBLE_EQ(std::abs(p.location.real()), 1.0);
    EXPECT_DOUBLE_EQ(std::abs(p.location.imag()), 1.0);
  }
  const auto even = build_bethe_integrand(Parity::even, 2.0, 1.0);
  EXPECT_EQ(even.numerator.degree(), 2);
  for (const auto& p : even.poles) EXPECT_DOUBLE_EQ(std::abs(p.location.real()), 2.0);
  for (const auto* f : {&odd, &even}) EXPECT_LE(f->numerator.degree(), f->denominator_degree() - 2);
  EXPECT_THROW(build_bethe_integrand(Parity::odd, 0.0, 1.0), InvalidSpec);
  EXPECT_THROW(build_bethe_integrand(Parity::all, 1.0, 1.0), InvalidSpec);
}

TEST(Bethe, IntegrandMatchesExplicitForm) {
  const auto f = build_bethe_integrand(Parity::odd, 0.7, 1.3);
  for (double k : {-2.0, 0.1, 0.9, 3.0}) {
    const double d = ((k + 0.7) * (k + 0.7) + 1.69) * ((k - 0.7) * (k - 0.7) + 1.69);
    EXPECT_NEAR(f(cplx(k)).real(), k * k * (k * k + 1.69) / (d * d), 1e-15);
  }
}

// Full-line values at q = K0 = 1 (checked against 30-digit numerical integration).
TEST(Bethe, UnitValues) {
  EXPECT_LT(rel(contour_integral_uhp(build_bethe_integrand(Parity::odd, 1.0, 1.0)), 3 * pi / 32), 1e-14);
  EXPECT_LT(rel(contour_integral_uhp(build_bethe_integrand(Parity::even, 1.0, 1.0)), pi / 32), 1e-14);
  // Channel weights: (8 q^2/pi) and (8 q^4/pi) times the half-line integral.
  EXPECT_NEAR(8 / pi * 0.5 * contour_integral_uhp(build_bethe_integrand(Parity::odd, 1.0, 1.0)), 0.375, 1e-15);
  EXPECT_NEAR(8 / pi * 0.5 * contour_integral_uhp(build_bethe_integrand(Parity::even, 1.0, 1.0)), 0.125, 1e-15);
}

TEST(BetheProperty, ResidueMatchesQuadratureRandomParameters) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  for (int i = 0; i < 20; ++i) {
    const double q = std::exp(u(rng)), k0 = std::exp(u(rng));
    for (Parity par : {Parity::odd, Parity::even}) {
      const auto f = build_bethe_integrand(par, q, k0);
      const double res = contour_integral_uhp(f);
      EXPECT_LT(rel(res, real_line(f, std::max(q, k0))), 1e-9) << "q=" << q << " K0=" << k0;
    }
  }
}

TEST(ResidueProperty, RealityOfConjugateSymmetricInputs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int i = 0; i < 20; ++i) {
    const auto f = build_bethe_integrand(i % 2 ? Parity::odd : Parity::even, u(rng), u(rng));
    cplx sum{};
    for (std::size_t j = 0; j < f.poles.size(); ++j)
      if (f.poles[j].location.imag() > 0) sum += residue_at(f, j);
    const cplx total = 2.0 * pi * I * sum;
    EXPECT_LT(std::abs(total.imag()) / std::abs(total.real()), 1e-12);
  }
}

TEST(ResidueProperty, AdditiveInNumerator) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const ComplexPoly a({cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
    const ComplexPoly b({cplx(u(rng), u(rng)), 0.0, cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
    const std::vector<Pole> poles{{cplx(1.0, 1.0), 2}, {cplx(-1.0, 1.0), 3}, {cplx(0.5, -2.0), 2}};
    const FactoredRational fa{a, poles}, fb{b, poles}, fs{a + b, poles};
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const cplx lhs = residue_at(fs, j);
      const cplx rhs = residue_at(fa, j) + residue_at(fb, j);
      EXPECT_LT(std::abs(lhs - rhs), 1e-13 * (1 + std::abs(lhs)));
    }
  }
}

// Sum of all residues of a rational function decaying as z^-2 is zero.
TEST(ResidueProperty, TotalResidueVanishes) {
  const std::vector<Pole> poles{{cplx(1.0, 1.0), 2}, {cplx(-1.0, 0.5), 3}, {cplx(0.5, -2.0), 1}};
  const FactoredRational f{ComplexPoly({1.0, cplx(0.0, 2.0), 3.0}), poles};
  cplx sum{};
  for (std::size_t j = 0; j < poles.size(); ++j) sum += residue_at(f, j);
  EXPECT_LT(std::abs(sum), 1e-13);
}
