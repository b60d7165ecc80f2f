// wigner.hpp -- Wigner functions from quasi-amplitudes, extrema, marginals,
// and the negativity indicator eta = int |f| - 1.
//
// For states in the oscillator span the product psi * psi^dag is evaluated
// EXACTLY: psi factors as (creation polynomial) * ground, its conjugate as
// ground * (annihilation polynomial), and the ground state is a star-product
// projector, so the whole product reduces to left/right applications of
// polynomial symbols -- each a terminating Bopp series.  A literal order-K
// truncation of the product is kept alongside as a diagnostic route; it is
// the published approximation, not an equality (see README).

#pragma once

#include <map>
#include <optional>

#include "phasespace/grid.hpp"
#include "phasespace/oscillator.hpp"
#include "phasespace/perturbation.hpp"
#include "phasespace/poly.hpp"
#include "phasespace/quadrature.hpp"

namespace phasespace {

// Exact psi * psi^dag for psi = sum_n c_n |n_x, n_y>, normalized to
// int f = 1.  Throws if the result is not normalizable or not Hermitian.
GaussianPolynomial wigner_from_coefficients(const std::map<FockLabel, Complex>& coeffs,
                                            double omega = 1.0, double hbar = 1.0);

// Decomposes psi over the oscillator basis (exact for states in the span;
// throws when the reconstruction residual exceeds 1e-10), then assembles the
// exact product.  star_order is recorded for diagnostics: the exact ladder
// assembly terminates by itself.
GaussianPolynomial wigner_from_state(const GaussianPolynomial& psi, int star_order = 2,
                                     double omega = 1.0, double hbar = 1.0);

// psi = psi0 + psi1 (+ psi2) from a perturbed state, then the exact product.
GaussianPolynomial wigner_perturbed(const PerturbedState& state, int star_order = 2);

// Literal truncated product star_truncated(psi, psi^dag, K), normalized.
// Diagnostic route only.
GaussianPolynomial wigner_truncated(const GaussianPolynomial& psi, int star_order,
                                    double hbar = 1.0);

// Largest single-axis quantum number entering a coefficient set; drives the
// auto-sized integration box.
int max_axis_index(const std::map<FockLabel, Complex>& coeffs);

struct NegativityResult {
  double eta;
  double convergence_delta;  // |eta - eta(one axis doubled)|
  double imag_residual;
};

// eta = int |f| - 1 for a normalized f, tensor-trapezoid on the auto box.
// Errors on eta < -5e-3 (normalization bug upstream).  Passing an explicit
// box pins the grid, which is what comparisons across parameter values use.
NegativityResult negativity(const GaussianPolynomial& f, int points_per_axis, int n_max_hint,
                            const std::vector<std::pair<double, double>>* fixed_box = nullptr);

// Grid extrema over the auto box with one Newton refinement.
ExtremaResult wigner_extrema(const GaussianPolynomial& f, int points_per_axis, int n_max_hint);

struct Marginal {
  std::vector<double> q;
  std::vector<double> sigma;
  double argmax = 0.0;
};

// sigma(q) = f integrated over all momenta (and the other position for 2-D
// states): one position variable kept, normalized to int sigma = 1.
Marginal marginal_position(const GaussianPolynomial& psi, int star_order = 2,
                           double omega = 1.0, double hbar = 1.0, Var keep = Var::Qx,
                           int samples = 1024);

// Scan + one-Newton-step argmax of a one-variable function on [lo, hi].
double argmax_1d(const GaussianPolynomial& f_onevar, double lo, double hi, int samples);

}  // namespace phasespace
