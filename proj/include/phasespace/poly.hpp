// poly.hpp -- closed algebra of Gaussian-polynomial phase-space functions.
//
// Every state and quasi-distribution in this library is a finite sum of
// terms  coeff * prod_v v^e[v] * exp(-(v^T Q v + L.v + c)), kept in a
// canonical merged form.  The class is closed under addition, pointwise
// multiplication, differentiation, coordinate shifts and the star-product
// machinery layered on top (star.hpp).

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace phasespace {

using Complex = std::complex<double>;

// Phase-space variables, indexed in a fixed order.  A 1-D function uses
// {Qx, Px}; a 2-D function uses all four.
enum class Var : int { Qx = 0, Px = 1, Qy = 2, Py = 3 };

constexpr int kMaxVars = 4;

inline int var_index(Var v) { return static_cast<int>(v); }
inline Var position_of_axis(int axis) { return static_cast<Var>(2 * axis); }
inline Var momentum_of_axis(int axis) { return static_cast<Var>(2 * axis + 1); }
const char* var_name(Var v);

// Exponent multi-index packed into 32 bits (8 bits per variable).
using PackedExp = std::uint32_t;

inline PackedExp pack_exp(const std::array<std::uint8_t, kMaxVars>& e) {
  return PackedExp(e[0]) | PackedExp(e[1]) << 8 | PackedExp(e[2]) << 16 |
         PackedExp(e[3]) << 24;
}
inline std::array<std::uint8_t, kMaxVars> unpack_exp(PackedExp k) {
  return {std::uint8_t(k & 0xff), std::uint8_t((k >> 8) & 0xff),
          std::uint8_t((k >> 16) & 0xff), std::uint8_t((k >> 24) & 0xff)};
}

// Exponential part exp(-(v^T quad v + lin.v + cnst)); quad is complex
// symmetric, stored dense row-major over the active variables.
struct Envelope {
  std::array<Complex, kMaxVars * kMaxVars> quad{};
  std::array<Complex, kMaxVars> lin{};
  Complex cnst{0.0, 0.0};

  Complex q(int i, int j) const { return quad[i * kMaxVars + j]; }
  void set_q(int i, int j, Complex value) {
    quad[i * kMaxVars + j] = value;
    quad[j * kMaxVars + i] = value;
  }
  bool is_zero() const;
  bool is_diagonal(int nvars) const;
  // Re(quad) positive semidefinite over the active variables.
  bool real_part_psd(int nvars) const;
  // Strictly positive real diagonal and no off-diagonal coupling.
  bool diagonal_positive(int nvars) const;
};

struct Monomial {
  PackedExp exps = 0;
  Complex coeff{0.0, 0.0};
};

// One envelope with its attached polynomial.
struct TermGroup {
  Envelope env;
  std::vector<Monomial> monos;  // sorted by exps, merged
};

class GaussianPolynomial {
 public:
  GaussianPolynomial() = default;
  explicit GaussianPolynomial(int dimension);

  // ----- constructors for simple building blocks -----
  static GaussianPolynomial zero(int dimension);
  static GaussianPolynomial constant(int dimension, Complex value);
  static GaussianPolynomial variable(int dimension, Var v);
  static GaussianPolynomial monomial(int dimension, Complex coeff,
                                     const std::array<std::uint8_t, kMaxVars>& exps);
  // exp(-(v^T quad v + lin.v + cnst)) with unit prefactor.
  static GaussianPolynomial gaussian(int dimension, const Envelope& env);

  int dimension() const { return dim_; }
  int num_vars() const { return 2 * dim_; }
  bool empty() const { return groups_.empty(); }
  std::size_t term_count() const;
  const std::vector<TermGroup>& groups() const { return groups_; }

  // ----- algebra -----
  GaussianPolynomial& operator+=(const GaussianPolynomial& other);
  GaussianPolynomial& operator-=(const GaussianPolynomial& other);
  GaussianPolynomial& operator*=(Complex scalar);
  friend GaussianPolynomial operator+(GaussianPolynomial a, const GaussianPolynomial& b) {
    a += b;
    return a;
  }
  friend GaussianPolynomial operator-(GaussianPolynomial a, const GaussianPolynomial& b) {
    a -= b;
    return a;
  }
  friend GaussianPolynomial operator*(Complex s, GaussianPolynomial f) {
    f *= s;
    return f;
  }

  GaussianPolynomial multiply(const GaussianPolynomial& other) const;
  GaussianPolynomial conjugate() const;

  // Exact analytic derivative with respect to one variable.
  GaussianPolynomial differentiate(Var v) const;
  // f(v) -> f(v - shift): exact expansion in the representation.
  GaussianPolynomial translate(const std::array<double, kMaxVars>& shift) const;
  // v_mult * f  (exponent bump).
  GaussianPolynomial multiply_by_var(Var v) const;

  Complex evaluate(const std::array<double, kMaxVars>& point) const;

  // Restriction f|_{vars = 0}: drops monomials carrying those variables and
  // removes them from every envelope.
  GaussianPolynomial restricted_to_zero(const std::vector<Var>& vars) const;

  // ----- structure queries -----
  int total_degree() const;
  int degree_in(Var v) const;
  // True when every envelope vanishes (pure polynomial).
  bool is_polynomial() const;
  // True when every envelope has Re(quad) PSD (precondition for quadrature).
  bool is_integrable() const;
  // max |Im coeff| / max |coeff| over all terms (0 for empty).
  double imag_residual() const;
  double max_abs_coeff() const;
  // Drop imaginary parts of all coefficients (after an imag_residual check).
  GaussianPolynomial real_part() const;

  // Merge identical terms, drop |coeff| < tol * max|coeff|, sort.
  void canonicalize(double rel_tol = 1e-14);

  // Structural near-equality of canonical forms (same envelopes and
  // exponents, coefficients within rel_tol of the larger scale).
  static bool canonically_equal(const GaussianPolynomial& a,
                                const GaussianPolynomial& b, double rel_tol = 1e-12);

  nlohmann::json to_json() const;
  static GaussianPolynomial from_json(const nlohmann::json& j);

  std::string brief() const;  // short human-readable summary for logs

  // Internal accumulation helper; callers must canonicalize() afterwards.
  void add_raw(const Envelope& env, PackedExp exps, Complex coeff);

 private:
  int dim_ = 1;
  std::vector<TermGroup> groups_;
};

// Quantized envelope key for canonical merging (1e-12 grid).
std::array<std::int64_t, 2 * (kMaxVars * kMaxVars + kMaxVars + 1)> envelope_key(
    const Envelope& env);

}  // namespace phasespace
