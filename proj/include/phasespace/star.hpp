// star.hpp -- Moyal star products, Bopp-shifted operators, Moyal brackets.
//
// Sign convention: the bidifferential operator in a*b = a exp(i hbar L/2) b
// pairs d/dq on the left factor with d/dp on the right factor,
//   a L b = sum_axes (dq a)(dp b) - (dp a)(dq b),
// which is the unique choice reproducing q*p = qp + i hbar/2 and the
// coordinate operators q^ = q + (i hbar/2) d_p, p^ = p - (i hbar/2) d_q.

#pragma once

#include "phasespace/poly.hpp"

namespace phasespace {

// A polynomial symbol acting by star multiplication.  Application is exact:
// the Bopp-shifted differential operator of a polynomial has finite order.
struct StarOperator {
  GaussianPolynomial symbol;  // must be a pure polynomial
  double hbar = 1.0;

  StarOperator() = default;
  StarOperator(GaussianPolynomial s, double hb);
};

// Single coordinate star-operators acting from either side:
//   left  q: q f + (i hbar/2) d_p f     left  p: p f - (i hbar/2) d_q f
//   right q: q f - (i hbar/2) d_p f     right p: p f + (i hbar/2) d_q f
enum class Side { Left, Right };

GaussianPolynomial apply_q_star(const GaussianPolynomial& f, int axis, double hbar, Side side);
GaussianPolynomial apply_p_star(const GaussianPolynomial& f, int axis, double hbar, Side side);

// A(q,p) * f  (side = Left) or f * A(q,p) (side = Right), computed exactly by
// substituting the Bopp-shifted coordinates into the Weyl-symmetrized
// monomials of the symbol (McCoy form).  Throws if the symbol is not a pure
// polynomial: the substitution series would not terminate.
GaussianPolynomial bopp_apply(const StarOperator& op, const GaussianPolynomial& f,
                              Side side = Side::Left);

// Truncated Moyal product  sum_{j<=K} (i hbar/2)^j / j!  f L^j g.
// Exact whenever either factor is a polynomial of total degree <= K.
GaussianPolynomial star_truncated(const GaussianPolynomial& f, const GaussianPolynomial& g,
                                  int order, double hbar = 1.0);

// {f,g}_M = f*g - g*f at truncation order K (exact for deg(f) <= K polynomial f).
GaussianPolynomial moyal_bracket(const GaussianPolynomial& f, const GaussianPolynomial& g,
                                 int order, double hbar = 1.0);

}  // namespace phasespace
