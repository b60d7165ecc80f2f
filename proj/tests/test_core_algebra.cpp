#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "phasespace/poly.hpp"

using namespace phasespace;

namespace {

Envelope unit_gaussian_env(int dimension) {
  Envelope env;
  for (int v = 0; v < 2 * dimension; ++v) env.set_q(v, v, Complex{1.0, 0.0});
  return env;
}

}  // namespace

TEST_CASE("derivative of exp(-q^2) is -2q exp(-q^2)") {
  Envelope env;
  env.set_q(0, 0, Complex{1.0, 0.0});
  auto g = GaussianPolynomial::gaussian(1, env);
  auto dg = g.differentiate(Var::Qx);
  auto expected = Complex{-2.0, 0.0} * g.multiply_by_var(Var::Qx);
  CHECK(GaussianPolynomial::canonically_equal(dg, expected));
}

TEST_CASE("derivative of q p with respect to p is q") {
  auto qp = GaussianPolynomial::variable(1, Var::Qx)
                .multiply(GaussianPolynomial::variable(1, Var::Px));
  auto d = qp.differentiate(Var::Px);
  CHECK(GaussianPolynomial::canonically_equal(d, GaussianPolynomial::variable(1, Var::Qx)));
}

TEST_CASE("product rule: d/dq [q^2 exp(-(q^2+p^2))] = (2q - 2q^3) exp(-(q^2+p^2))") {
  auto g = GaussianPolynomial::gaussian(1, unit_gaussian_env(1));
  auto f = g.multiply_by_var(Var::Qx).multiply_by_var(Var::Qx);
  auto df = f.differentiate(Var::Qx);
  auto q = GaussianPolynomial::variable(1, Var::Qx);
  auto expected =
      (Complex{2.0, 0.0} * q - Complex{2.0, 0.0} * q.multiply(q).multiply(q)).multiply(g);
  CHECK(GaussianPolynomial::canonically_equal(df, expected));
}

TEST_CASE("canonicalization merges duplicate terms and drops dust") {
  GaussianPolynomial f(1);
  Envelope env = unit_gaussian_env(1);
  f.add_raw(env, pack_exp({1, 0, 0, 0}), Complex{2.0, 0.0});
  f.add_raw(env, pack_exp({1, 0, 0, 0}), Complex{3.0, 0.0});
  f.add_raw(env, pack_exp({0, 1, 0, 0}), Complex{1e-20, 0.0});
  f.canonicalize();
  REQUIRE(f.groups().size() == 1);
  REQUIRE(f.groups()[0].monos.size() == 1);
  CHECK(f.groups()[0].monos[0].coeff == Complex{5.0, 0.0});
}

TEST_CASE("translate shifts the evaluation point exactly") {
  auto g = GaussianPolynomial::gaussian(2, unit_gaussian_env(2));
  auto f = g.multiply_by_var(Var::Qx).multiply_by_var(Var::Py);
  std::array<double, kMaxVars> t{0.7, -0.3, 0.2, 1.1};
  auto shifted = f.translate(t);
  std::array<double, kMaxVars> pt{0.5, 0.25, -0.75, 0.4};
  std::array<double, kMaxVars> pt_minus{pt[0] - t[0], pt[1] - t[1], pt[2] - t[2], pt[3] - t[3]};
  CHECK(std::abs(shifted.evaluate(pt) - f.evaluate(pt_minus)) < 1e-14);
}

TEST_CASE("evaluate: q p at (2,3) and gaussian on-axis") {
  auto qp = GaussianPolynomial::variable(1, Var::Qx)
                .multiply(GaussianPolynomial::variable(1, Var::Px));
  CHECK(qp.evaluate({2.0, 3.0, 0, 0}) == Complex{6.0, 0.0});
  Envelope env;
  env.set_q(0, 0, Complex{1.0, 0.0});
  auto g = GaussianPolynomial::gaussian(1, env);
  CHECK(std::abs(g.evaluate({0.0, 5.0, 0, 0}) - Complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("conjugate flips imaginary parts everywhere") {
  Envelope env = unit_gaussian_env(1);
  env.lin[1] = Complex{0.0, -2.0};
  GaussianPolynomial f(1);
  f.add_raw(env, pack_exp({1, 0, 0, 0}), Complex{1.0, 3.0});
  f.canonicalize();
  auto fc = f.conjugate();
  std::array<double, kMaxVars> pt{0.3, -0.9, 0, 0};
  CHECK(std::abs(fc.evaluate(pt) - std::conj(f.evaluate(pt))) < 1e-14);
}

TEST_CASE("json round trip preserves the canonical form") {
  Envelope env = unit_gaussian_env(2);
  env.lin[2] = Complex{0.25, -1.0};
  env.cnst = Complex{0.1, 0.0};
  GaussianPolynomial f(2);
  f.add_raw(env, pack_exp({2, 1, 0, 3}), Complex{0.5, -0.25});
  f.add_raw(Envelope{}, pack_exp({1, 0, 0, 0}), Complex{2.0, 0.0});
  f.canonicalize();
  auto j = f.to_json();
  auto g = GaussianPolynomial::from_json(j);
  CHECK(GaussianPolynomial::canonically_equal(f, g, 1e-15));
}

TEST_CASE("restricted_to_zero drops fixed-variable content") {
  auto g = GaussianPolynomial::gaussian(2, unit_gaussian_env(2));
  auto f = g.multiply_by_var(Var::Qx).multiply_by_var(Var::Qy);
  auto s = f.restricted_to_zero({Var::Qy, Var::Py});
  CHECK(s.empty());  // the qy factor kills every term at qy = 0
  auto f2 = g + g.multiply_by_var(Var::Qx);
  auto s2 = f2.restricted_to_zero({Var::Qy, Var::Py});
  std::array<double, kMaxVars> pt{0.4, -1.2, 0.0, 0.0};
  CHECK(std::abs(s2.evaluate(pt) - f2.evaluate(pt)) < 1e-14);
  std::array<double, kMaxVars> off{0.4, -1.2, 0.8, 0.3};
  // the restriction is constant along the fixed axes
  CHECK(std::abs(s2.evaluate(off) - s2.evaluate(pt)) < 1e-14);
}

TEST_CASE("imag residual and real_part") {
  GaussianPolynomial f(1);
  f.add_raw(Envelope{}, pack_exp({1, 0, 0, 0}), Complex{1.0, 1e-10});
  f.canonicalize();
  CHECK(f.imag_residual() == doctest::Approx(1e-10));
  CHECK(f.real_part().imag_residual() == 0.0);
}

TEST_CASE("dimension guards") {
  CHECK_THROWS_AS(GaussianPolynomial::variable(1, Var::Qy), std::invalid_argument);
  auto a = GaussianPolynomial::variable(1, Var::Qx);
  auto b = GaussianPolynomial::variable(2, Var::Qy);
  CHECK_THROWS_AS(a.multiply(b), std::invalid_argument);
}
