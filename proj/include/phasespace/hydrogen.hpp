// hydrogen.hpp -- the 1-D Coulomb problem in phase space, atomic units.
//
// Bound-state amplitudes on the q > 0 branch have the closed profile
//   rho_n(x) = x exp(-Z x / n) F(1-n, 2; 2 Z x / n),
// with energies E_n = -Z^2 / (2 n^2) hartree.  The phase-space state carries
// oscillatory factors exp(-2iqp/hbar) and a plane-wave h(p); those phases
// shift the profile by one Bohr radius and cancel in |psi|^2.  Distributions
// (Wigner function, position density) are built from the phase-reduced
// profile, which keeps the truncated star product exact at every order.

#pragma once

#include <vector>

#include "phasespace/poly.hpp"

namespace phasespace {

enum class Branch { PositiveQ, NegativeQ };

struct HydrogenParams {
  int z = 1;  // nuclear charge
  int n = 1;  // principal quantum number, >= 1
  Branch branch = Branch::PositiveQ;
};

constexpr double kHartreeEv = 27.211386;

// Kummer confluent hypergeometric F(a, b; x).  For a a nonpositive integer
// the series terminates and is evaluated from exact rational coefficients;
// otherwise the series is summed to a 1e-12 term ratio.  b must not be a
// nonpositive integer.
double confluent_F(double a, double b, double x);

// Exact rational coefficients of the terminating polynomial F(-m, b; x).
std::vector<double> kummer_polynomial(int m, int b);

// Phase-reduced radial profile rho_n as a 1-D Gaussian polynomial in q
// (independent of p); `shifted` moves the origin to the Bohr radius, the
// offset induced by the plane-wave h(p) of the full phase-space solution.
GaussianPolynomial hydrogen_profile(const HydrogenParams& p, bool shifted);

// Full quasi-amplitude including the exp(-2iqp/hbar) factor and plane-wave
// h(p); |psi| is p-independent.
GaussianPolynomial hydrogen_state(const HydrogenParams& p);

double hydrogen_energy_hartree(int n, int z = 1);
double hydrogen_energy_ev(int n, int z = 1);

// psi * psi^dag at truncation order K (every order agrees: the reduced
// amplitude is p-independent, so all bidifferential terms vanish), normalized
// to int_0^inf f dq = 1 on the branch.
struct HydrogenWigner {
  GaussianPolynomial f;          // expanded product, function of q only
  GaussianPolynomial amplitude;  // exact square root of f on the branch;
                                 // evaluating amplitude^2 avoids the
                                 // cancellation of the expanded polynomial
                                 // near its double roots
  double q_hi;                   // branch sampling limit used for normalization
};
HydrogenWigner hydrogen_wigner(int n, int star_order = 2, int z = 1);

struct RadialDensity {
  std::vector<double> q;
  std::vector<double> sigma;  // normalized position density on q > 0
  double argmax = 0.0;
};
RadialDensity radial_density(int n, int z = 1, int samples = 4097);

// argmax of the n=1 position density (the Bohr radius, 1/Z in atomic units).
double bohr_radius_estimate(int z = 1);

struct HydrogenNegativity {
  double eta;
  double convergence_delta;
};
// eta on the q > 0 branch (per-unit-p density; the momentum direction
// carries no content for the phase-reduced state).
HydrogenNegativity hydrogen_negativity(int n, int z = 1, int points = 4097);

// Residual of the radial eigenvalue problem -rho''/2 - Z rho / x = E rho,
// multiplied through by x to avoid the Coulomb singularity, relative to the
// scale of E x rho on [0.05, q_hi].
double hydrogen_eigen_residual(int n, int z = 1);

}  // namespace phasespace
