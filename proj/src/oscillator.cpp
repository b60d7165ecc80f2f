#include "phasespace/oscillator.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace phasespace {

namespace {

const Complex kI{0.0, 1.0};

// a      = (sqrt(w) q + i p/sqrt(w)) / sqrt(2)
// a_dag  = (sqrt(w) q - i p/sqrt(w)) / sqrt(2)
GaussianPolynomial ladder_symbol(int axis, double omega, bool creation) {
  const double sw = std::sqrt(omega);
  GaussianPolynomial q = GaussianPolynomial::variable(2, position_of_axis(axis));
  GaussianPolynomial p = GaussianPolynomial::variable(2, momentum_of_axis(axis));
  const Complex ip = (creation ? -kI : kI) / sw;
  GaussianPolynomial s = Complex{sw, 0.0} * q + ip * p;
  s *= Complex{1.0 / std::sqrt(2.0), 0.0};
  return s;
}

}  // namespace

LadderSet ladder_set(double omega, double hbar) {
  if (omega <= 0.0) throw std::invalid_argument("ladder_set: omega must be positive");
  LadderSet L;
  L.omega = omega;
  L.hbar = hbar;
  L.a = StarOperator{ladder_symbol(0, omega, false), hbar};
  L.a_dag = StarOperator{ladder_symbol(0, omega, true), hbar};
  L.b = StarOperator{ladder_symbol(1, omega, false), hbar};
  L.b_dag = StarOperator{ladder_symbol(1, omega, true), hbar};
  return L;
}

GaussianPolynomial ho_ground(double omega, int dimension) {
  if (omega <= 0.0) throw std::invalid_argument("ho_ground: omega must be positive");
  // exp(-2h/omega) per axis = exp(-(omega q^2 + p^2/omega))
  Envelope env;
  for (int axis = 0; axis < dimension; ++axis) {
    env.set_q(2 * axis, 2 * axis, Complex{omega, 0.0});
    env.set_q(2 * axis + 1, 2 * axis + 1, Complex{1.0 / omega, 0.0});
  }
  GaussianPolynomial g = GaussianPolynomial::gaussian(dimension, env);
  Complex norm2 = integrate(g.multiply(g.conjugate()));
  g *= Complex{1.0 / std::sqrt(norm2.real()), 0.0};
  return g;
}

const GaussianPolynomial& ho_state(FockLabel n, double omega, int max_index) {
  if (n.nx < 0 || n.ny < 0) throw std::invalid_argument("ho_state: negative quantum number");
  if (n.nx > max_index || n.ny > max_index)
    throw std::invalid_argument("ho_state: quantum number above configured maximum");
  static std::map<std::pair<std::pair<int, int>, double>, GaussianPolynomial> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(std::make_pair(n.nx, n.ny), omega);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  GaussianPolynomial psi(2);
  if (n.nx == 0 && n.ny == 0) {
    psi = ho_ground(omega, 2);
  } else {
    LadderSet L = ladder_set(omega);
    GaussianPolynomial cur = ho_ground(omega, 2);
    for (int k = 0; k < n.nx; ++k) {
      cur = bopp_apply(L.a_dag, cur);
      cur *= Complex{1.0 / std::sqrt(double(k + 1)), 0.0};
    }
    for (int k = 0; k < n.ny; ++k) {
      cur = bopp_apply(L.b_dag, cur);
      cur *= Complex{1.0 / std::sqrt(double(k + 1)), 0.0};
    }
    psi = std::move(cur);
    Complex norm2 = integrate(psi.multiply(psi.conjugate()));
    psi *= Complex{1.0 / std::sqrt(norm2.real()), 0.0};
  }
  return cache.emplace(key, std::move(psi)).first->second;
}

double ho_energy(FockLabel n, double omega) {
  return (n.nx + 0.5) * omega + (n.ny + 0.5) * omega;
}

OverlapDiagnostic star_overlap_diagnostic(const GaussianPolynomial& a,
                                          const GaussianPolynomial& b, int order, double hbar) {
  if (!a.is_integrable() || !b.is_integrable())
    throw std::invalid_argument("star_overlap: states must be integrable");
  GaussianPolynomial adag = a.conjugate();
  Complex star_route = integrate(star_truncated(adag, b, order, hbar));
  Complex plain_route = integrate(adag.multiply(b));
  return {star_route, plain_route, std::abs(star_route - plain_route)};
}

Complex star_overlap(const GaussianPolynomial& a, const GaussianPolynomial& b, int order,
                     double hbar) {
  OverlapDiagnostic d = star_overlap_diagnostic(a, b, order, hbar);
  if (d.difference > 1e-6)
    throw std::runtime_error("star_overlap: star and plain routes disagree by " +
                             std::to_string(d.difference) + " (truncation too low)");
  return d.plain_route;
}

GaussianPolynomial oscillator_hamiltonian_symbol(double omega, int dimension) {
  GaussianPolynomial h = GaussianPolynomial::zero(dimension);
  for (int axis = 0; axis < dimension; ++axis) {
    GaussianPolynomial q = GaussianPolynomial::variable(dimension, position_of_axis(axis));
    GaussianPolynomial p = GaussianPolynomial::variable(dimension, momentum_of_axis(axis));
    h += Complex{0.5 * omega * omega, 0.0} * q.multiply(q);
    h += Complex{0.5, 0.0} * p.multiply(p);
  }
  return h;
}

std::vector<FockLabel> labels_up_to_shell(int max_shell) {
  std::vector<FockLabel> out;
  for (int shell = 0; shell <= max_shell; ++shell)
    for (int nx = 0; nx <= shell; ++nx) out.push_back({nx, shell - nx});
  return out;
}

}  // namespace phasespace
