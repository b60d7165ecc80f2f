// quadrature.hpp -- exact and grid integration of Gaussian-polynomial functions.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/poly.hpp"

namespace phasespace {

struct Quadrature {
  enum class Kind { GaussHermiteTensor, TrapezoidTensor };
  Kind kind = Kind::GaussHermiteTensor;
  int points_per_axis = 24;
  // Per-axis [lo, hi]; required for TrapezoidTensor.
  std::vector<std::pair<double, double>> box;

  static Quadrature gauss_hermite(int points);
  static Quadrature trapezoid(int points, std::vector<std::pair<double, double>> box);
};

// Nodes and weights for int e^{-x^2} f(x) dx (Golub-Welsch).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite_rule(int points);

// Closed-form integral over all variables.  Exact for diagonal envelopes
// (complex alpha with positive real part, complex linear terms) and for real
// symmetric envelopes after an orthogonal rotation.  Throws when Re(quad) is
// not positive definite on the active variables.
Complex integrate(const GaussianPolynomial& f);

// Quadrature-backed integral per the requested rule.  Gauss-Hermite is exact
// (up to roundoff) for polynomial degree <= 2*points-1 after completing the
// square per term; trapezoid sums Re and Im over the box.
Complex integrate(const GaussianPolynomial& f, const Quadrature& quad);

// Integrate out a subset of variables analytically (diagonal envelopes).
// The kept variables are compacted into the low slots of the result, which
// is tagged with the smallest dimension that can hold them.
GaussianPolynomial integrate_out(const GaussianPolynomial& f, const std::vector<Var>& out_vars);

// Auto-sized trapezoid box: per-axis half-width c + s*sqrt(2 n_max + 1)
// (natural oscillator units), expanded until the boundary magnitude falls
// below 1e-10 of the peak.
std::vector<std::pair<double, double>> auto_box(const GaussianPolynomial& f, int n_max,
                                                double c = 4.0, double s = 2.5);

struct AbsIntegral {
  double abs_integral;     // int |Re f|
  double signed_integral;  // int Re f
  double imag_residual;    // max |Im| / max |Re| on the grid
};

// Tensor-trapezoid integral of |f|.  Preconditions per the module contract:
// trapezoid rule only, f real on the grid (imaginary residual <= 1e-8).
AbsIntegral integrate_abs(const GaussianPolynomial& f, const Quadrature& quad);
AbsIntegral integrate_abs(const GaussianPolynomial& f,
                          const std::vector<std::pair<double, double>>& box,
                          const std::vector<int>& points_per_axis);

// Convenience: integrate_abs over the auto-sized box at the given resolution.
AbsIntegral integrate_abs_auto(const GaussianPolynomial& f, int n_max, int points_per_axis);

}  // namespace phasespace
