// oscillator.hpp -- 2-D harmonic-oscillator eigenstates in phase space.
//
// States are built by ladder star-operators acting on the Gaussian ground
// state exp(-2h/omega), h = (p^2 + omega^2 q^2)/2 per axis, and normalized
// numerically to int |psi|^2 = 1.

#pragma once

#include <compare>
#include <vector>

#include "phasespace/poly.hpp"
#include "phasespace/quadrature.hpp"
#include "phasespace/star.hpp"

namespace phasespace {

struct FockLabel {
  int nx = 0;
  int ny = 0;
  int shell() const { return nx + ny; }
  auto operator<=>(const FockLabel&) const = default;
};

// Annihilation/creation star-operators for both axes.  At omega != 1 the
// symbols use the canonical scaling q -> sqrt(omega) q, p -> p/sqrt(omega),
// which keeps [A, A^dag] = 1 literal.
struct LadderSet {
  StarOperator a, a_dag;  // x axis
  StarOperator b, b_dag;  // y axis
  double omega = 1.0;
  double hbar = 1.0;
};

LadderSet ladder_set(double omega = 1.0, double hbar = 1.0);

inline int default_max_index() { return 14; }

// Normalized Gaussian ground state; dimension 1 or 2.
GaussianPolynomial ho_ground(double omega = 1.0, int dimension = 2);

// (A^dag)^nx (B^dag)^ny ground / sqrt(nx! ny!), renormalized.  Cached;
// concurrent readers are safe.  max_index guards against runaway ladder
// chains; perturbation sums raise it to their cutoff.
const GaussianPolynomial& ho_state(FockLabel n, double omega = 1.0,
                                   int max_index = default_max_index());

double ho_energy(FockLabel n, double omega = 1.0);

struct OverlapDiagnostic {
  Complex star_route;   // int conj(a) * b with the truncated star product
  Complex plain_route;  // int conj(a) b
  double difference;
};

// <a|b> computed through both routes of the star-integral identity; throws if
// they disagree beyond 1e-6 (truncation too low), returns the plain route.
Complex star_overlap(const GaussianPolynomial& a, const GaussianPolynomial& b, int order = 2,
                     double hbar = 1.0);
OverlapDiagnostic star_overlap_diagnostic(const GaussianPolynomial& a,
                                          const GaussianPolynomial& b, int order = 2,
                                          double hbar = 1.0);

// Oscillator Hamiltonian symbol h = sum_axes (p^2 + omega^2 q^2)/2.
GaussianPolynomial oscillator_hamiltonian_symbol(double omega = 1.0, int dimension = 2);

// All labels with shell <= max_shell, ordered by (shell, nx).
std::vector<FockLabel> labels_up_to_shell(int max_shell);

}  // namespace phasespace
