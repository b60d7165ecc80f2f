#include <doctest.h>

#include <cmath>

#include "phasespace/quadrature.hpp"

using namespace phasespace;

namespace {

GaussianPolynomial unit_gaussian(int dim) {
  Envelope env;
  for (int v = 0; v < 2 * dim; ++v) env.set_q(v, v, Complex{1.0, 0.0});
  return GaussianPolynomial::gaussian(dim, env);
}

// closed-form moments of exp(-a x^2): int x^{2k} = (2k-1)!! / (2a)^k sqrt(pi/a)
double gaussian_moment(double a, int k) {
  if (k % 2 == 1) return 0.0;
  double v = std::sqrt(M_PI / a);
  for (int j = 1; j < k; j += 2) v *= j / (2.0 * a);
  return v;
}

}  // namespace

TEST_CASE("gaussian integrals: pi, odd vanishing, q^2 moment") {
  auto g = unit_gaussian(1);
  CHECK(std::abs(integrate(g) - Complex{M_PI, 0.0}) < 1e-13);
  CHECK(std::abs(integrate(g.multiply_by_var(Var::Qx))) < 1e-15);
  auto q2g = g.multiply_by_var(Var::Qx).multiply_by_var(Var::Qx);
  CHECK(std::abs(integrate(q2g) - Complex{M_PI / 2.0, 0.0}) < 1e-13);
}

TEST_CASE("gauss-hermite tensor is exact through degree 2N-1") {
  for (int k = 0; k <= 12; k += 2) {
    Envelope env;
    env.set_q(0, 0, Complex{0.7, 0.0});
    env.set_q(1, 1, Complex{1.3, 0.0});
    GaussianPolynomial f(1);
    std::array<std::uint8_t, kMaxVars> e{};
    e[0] = std::uint8_t(k);
    f.add_raw(env, pack_exp(e), Complex{1.0, 0.0});
    f.canonicalize();
    int points = k / 2 + 1;  // degree k is integrated exactly by k/2+1 points
    Complex got = integrate(f, Quadrature::gauss_hermite(points));
    double expect = gaussian_moment(0.7, k) * gaussian_moment(1.3, 0);
    CHECK(std::abs(got - Complex{expect, 0.0}) < 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("complex linear terms (oscillatory factors) integrate exactly") {
  // int exp(-x^2 - i b x) dx = sqrt(pi) exp(-b^2/4)
  Envelope env;
  env.set_q(0, 0, Complex{1.0, 0.0});
  env.set_q(1, 1, Complex{1.0, 0.0});
  env.lin[0] = Complex{0.0, 1.5};
  auto f = GaussianPolynomial::gaussian(1, env);
  double expect = std::sqrt(M_PI) * std::exp(-1.5 * 1.5 / 4.0) * std::sqrt(M_PI);
  CHECK(std::abs(integrate(f) - Complex{expect, 0.0}) < 1e-13);
  CHECK(std::abs(integrate(f, Quadrature::gauss_hermite(12)) - Complex{expect, 0.0}) < 1e-12);
}

TEST_CASE("coupled real envelopes integrate via rotation") {
  // exp(-(x^2 + y^2 + x y)): eigenvalues 1.5 and 0.5; integral = pi/sqrt(det)
  Envelope env;
  env.set_q(0, 0, Complex{1.0, 0.0});
  env.set_q(1, 1, Complex{1.0, 0.0});
  env.set_q(0, 1, Complex{0.5, 0.0});
  auto g = GaussianPolynomial::gaussian(1, env);
  double det = 1.0 - 0.25;
  CHECK(std::abs(integrate(g) - Complex{M_PI / std::sqrt(det), 0.0}) < 1e-12);
  // and with a monomial: int x^2 exp(...) = pi/sqrt(det) * Sigma_xx, Sigma = Q^{-1}/2
  double sxx = (1.0 / det) / 2.0;  // (Q^{-1})_{00} = Q_{11}/det
  auto q2 = g.multiply_by_var(Var::Qx).multiply_by_var(Var::Qx);
  CHECK(std::abs(integrate(q2) - Complex{M_PI / std::sqrt(det) * sxx, 0.0}) < 1e-12);
  CHECK(std::abs(integrate(q2, Quadrature::gauss_hermite(10)) -
                 Complex{M_PI / std::sqrt(det) * sxx, 0.0}) < 1e-11);
}

TEST_CASE("non-integrable envelopes are rejected") {
  auto poly = GaussianPolynomial::variable(1, Var::Qx);
  CHECK_THROWS_AS(integrate(poly), std::domain_error);
  Envelope env;
  env.set_q(0, 0, Complex{-1.0, 0.0});
  env.set_q(1, 1, Complex{1.0, 0.0});
  auto bad = GaussianPolynomial::gaussian(1, env);
  CHECK_FALSE(bad.is_integrable());
}

TEST_CASE("integrate_out reduces dimension with exact partial moments") {
  auto g = unit_gaussian(2);
  auto f = g.multiply_by_var(Var::Qx).multiply_by_var(Var::Qx);
  auto sigma = integrate_out(f, {Var::Px, Var::Qy, Var::Py});
  // sigma(q) = q^2 exp(-q^2) * pi^(3/2)
  double expect = 0.25 * std::exp(-0.5 * 0.5) * std::pow(M_PI, 1.5);
  CHECK(std::abs(sigma.evaluate({0.5, 0, 0, 0}) - Complex{expect, 0.0}) < 1e-12);
  // total mass of the marginal equals the full integral: sqrt(pi)/2 * pi^(3/2)
  CHECK(std::abs(integrate(f) - Complex{0.5 * std::sqrt(M_PI) * std::pow(M_PI, 1.5), 0.0}) <
        1e-12);
}

TEST_CASE("integrate_abs equals integrate for nonnegative integrands") {
  auto g = unit_gaussian(1);
  auto r = integrate_abs_auto(g, 0, 64);
  CHECK(std::abs(r.abs_integral - M_PI) < 1e-6);
  CHECK(std::abs(r.signed_integral - M_PI) < 1e-6);
  // and |.| is sign-blind
  auto neg = Complex{-1.0, 0.0} * g;
  auto r2 = integrate_abs_auto(neg, 0, 64);
  CHECK(r2.abs_integral == doctest::Approx(r.abs_integral));
}

TEST_CASE("integrate_abs rejects complex-valued integrands") {
  auto g = unit_gaussian(1);
  auto c = Complex{1.0, 1.0} * g;
  auto box = auto_box(c, 0);
  CHECK_THROWS_AS(integrate_abs(c, Quadrature::trapezoid(32, box)), std::runtime_error);
}

TEST_CASE("trapezoid integrate matches the analytic value on a generous box") {
  auto g = unit_gaussian(1);
  auto box = auto_box(g, 0);
  Complex got = integrate(g, Quadrature::trapezoid(96, box));
  CHECK(std::abs(got - Complex{M_PI, 0.0}) < 1e-9);
}

TEST_CASE("auto box grows with the hint and respects the envelope floor") {
  auto g = unit_gaussian(1);
  auto b0 = auto_box(g, 0);
  auto b9 = auto_box(g, 9);
  CHECK(b9[0].second > b0[0].second);
  CHECK(b0[0].second >= 4.0 + 2.5);
}
