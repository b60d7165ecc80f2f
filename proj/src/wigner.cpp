#include "phasespace/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phasespace/star.hpp"

namespace phasespace {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

GaussianPolynomial right_ladder_a(const GaussianPolynomial& f, int axis, double omega,
                                  double hbar) {
  // f * a with a = (sqrt(w) q + i p/sqrt(w)) / sqrt(2)
  const double sw = std::sqrt(omega);
  GaussianPolynomial out = Complex{sw, 0.0} * apply_q_star(f, axis, hbar, Side::Right);
  out += Complex{0.0, 1.0 / sw} * apply_p_star(f, axis, hbar, Side::Right);
  out *= Complex{1.0 / std::sqrt(2.0), 0.0};
  return out;
}

GaussianPolynomial left_ladder_adag(const GaussianPolynomial& f, int axis, double omega,
                                    double hbar) {
  // a^dag * f with a^dag = (sqrt(w) q - i p/sqrt(w)) / sqrt(2)
  const double sw = std::sqrt(omega);
  GaussianPolynomial out = Complex{sw, 0.0} * apply_q_star(f, axis, hbar, Side::Left);
  out += Complex{0.0, -1.0 / sw} * apply_p_star(f, axis, hbar, Side::Left);
  out *= Complex{1.0 / std::sqrt(2.0), 0.0};
  return out;
}

}  // namespace

int max_axis_index(const std::map<FockLabel, Complex>& coeffs) {
  int m = 0;
  for (const auto& [label, c] : coeffs) m = std::max({m, label.nx, label.ny});
  return m;
}

GaussianPolynomial wigner_from_coefficients(const std::map<FockLabel, Complex>& coeffs,
                                            double omega, double hbar) {
  if (coeffs.empty()) throw std::invalid_argument("wigner_from_coefficients: empty state");
  int max_nx = 0, max_ny = 0;
  for (const auto& [m, c] : coeffs) {
    max_nx = std::max(max_nx, m.nx);
    max_ny = std::max(max_ny, m.ny);
  }

  const GaussianPolynomial ground = ho_ground(omega, 2);

  // Right factor: psi0 * sum_m conj(c_m)/sqrt(m!) a^mx b^my (annihilators).
  GaussianPolynomial right = GaussianPolynomial::zero(2);
  {
    GaussianPolynomial cur_x = ground;
    for (int mx = 0; mx <= max_nx; ++mx) {
      if (mx > 0) cur_x = right_ladder_a(cur_x, 0, omega, hbar);
      GaussianPolynomial cur = cur_x;
      for (int my = 0; my <= max_ny; ++my) {
        if (my > 0) cur = right_ladder_a(cur, 1, omega, hbar);
        auto it = coeffs.find({mx, my});
        if (it != coeffs.end() && it->second != Complex{}) {
          double nrm = 1.0 / std::sqrt(factorial(mx) * factorial(my));
          right += (std::conj(it->second) * nrm) * cur;
        }
      }
    }
  }

  // Left factor: sum_n c_n/sqrt(n!) (a^dag)^nx (b^dag)^ny applied to `right`.
  GaussianPolynomial f_raw = GaussianPolynomial::zero(2);
  {
    GaussianPolynomial cur_x = right;
    for (int nx = 0; nx <= max_nx; ++nx) {
      if (nx > 0) cur_x = left_ladder_adag(cur_x, 0, omega, hbar);
      GaussianPolynomial cur = cur_x;
      for (int ny = 0; ny <= max_ny; ++ny) {
        if (ny > 0) cur = left_ladder_adag(cur, 1, omega, hbar);
        auto it = coeffs.find({nx, ny});
        if (it != coeffs.end() && it->second != Complex{}) {
          double nrm = 1.0 / std::sqrt(factorial(nx) * factorial(ny));
          f_raw += (it->second * nrm) * cur;
        }
      }
    }
  }

  double residual = f_raw.imag_residual();
  if (residual > 1e-8)
    throw std::runtime_error("wigner_from_coefficients: product is not Hermitian (residual " +
                             std::to_string(residual) + ")");
  GaussianPolynomial f = f_raw.real_part();
  Complex norm = integrate(f);
  if (std::abs(norm) < 1e-12 * std::max(1.0, f.max_abs_coeff()))
    throw std::runtime_error("wigner_from_coefficients: non-normalizable result");
  f *= Complex{1.0 / norm.real(), 0.0};
  return f;
}

GaussianPolynomial wigner_from_state(const GaussianPolynomial& psi, int star_order, double omega,
                                     double hbar) {
  (void)star_order;  // the exact assembly terminates on its own; kept for metadata
  if (!psi.is_integrable()) throw std::invalid_argument("wigner_from_state: psi not integrable");
  const int max_shell = psi.total_degree();
  std::map<FockLabel, Complex> coeffs;
  GaussianPolynomial recon = GaussianPolynomial::zero(2);
  for (FockLabel m : labels_up_to_shell(max_shell)) {
    const GaussianPolynomial& basis = ho_state(m, omega, std::max(default_max_index(), max_shell));
    Complex c = integrate(basis.conjugate().multiply(psi));
    if (std::abs(c) < 1e-13) continue;
    coeffs[m] = c;
    recon += c * basis;
  }
  GaussianPolynomial delta = psi - recon;
  Complex norm2 = integrate(psi.conjugate().multiply(psi));
  Complex err2 = integrate(delta.conjugate().multiply(delta));
  if (err2.real() > 1e-10 * norm2.real())
    throw std::invalid_argument(
        "wigner_from_state: state lies outside the oscillator span (residual " +
        std::to_string(err2.real() / norm2.real()) + ")");
  return wigner_from_coefficients(coeffs, omega, hbar);
}

GaussianPolynomial wigner_perturbed(const PerturbedState& state, int star_order) {
  (void)star_order;
  return wigner_from_coefficients(state.coefficients(), state.spec.omega, state.spec.hbar);
}

GaussianPolynomial wigner_truncated(const GaussianPolynomial& psi, int star_order, double hbar) {
  GaussianPolynomial f_raw = star_truncated(psi, psi.conjugate(), star_order, hbar);
  double residual = f_raw.imag_residual();
  if (residual > 1e-8)
    throw std::runtime_error("wigner_truncated: product is not Hermitian");
  GaussianPolynomial f = f_raw.real_part();
  Complex norm = integrate(f);
  if (std::abs(norm.real()) < 1e-12 * std::max(1.0, f.max_abs_coeff()))
    throw std::runtime_error("wigner_truncated: non-normalizable result");
  f *= Complex{1.0 / norm.real(), 0.0};
  return f;
}

NegativityResult negativity(const GaussianPolynomial& f, int points_per_axis, int n_max_hint,
                            const std::vector<std::pair<double, double>>* fixed_box) {
  auto box = fixed_box ? *fixed_box : auto_box(f, n_max_hint);
  AbsIntegral base = integrate_abs(f, box, std::vector<int>(f.num_vars(), points_per_axis));
  // convergence probe: double the first axis only
  std::vector<int> pts(f.num_vars(), points_per_axis);
  pts[0] = 2 * points_per_axis;
  AbsIntegral fine = integrate_abs(f, box, pts);
  double eta = base.abs_integral - 1.0;
  double eta_fine = fine.abs_integral - 1.0;
  if (eta < -5e-3)
    throw std::runtime_error("negativity: eta = " + std::to_string(eta) +
                             " below the -5e-3 floor (normalization bug upstream)");
  return {eta, std::abs(eta - eta_fine), base.imag_residual};
}

ExtremaResult wigner_extrema(const GaussianPolynomial& f, int points_per_axis, int n_max_hint) {
  auto box = auto_box(f, n_max_hint);
  GridSpec grid = GridSpec::uniform(box, std::vector<int>(f.num_vars(), points_per_axis));
  return extrema_scan(f, grid);
}

double argmax_1d(const GaussianPolynomial& f_onevar, double lo, double hi, int samples) {
  double best_x = lo, best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double x = lo + (hi - lo) * double(i) / double(samples - 1);
    double v = f_onevar.evaluate({x, 0.0, 0.0, 0.0}).real();
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  // one Newton step on d/dq
  GaussianPolynomial d1 = f_onevar.differentiate(Var::Qx);
  GaussianPolynomial d2 = d1.differentiate(Var::Qx);
  double g = d1.evaluate({best_x, 0, 0, 0}).real();
  double h = d2.evaluate({best_x, 0, 0, 0}).real();
  if (h < 0.0) {
    double cand = best_x - g / h;
    if (cand >= lo && cand <= hi &&
        f_onevar.evaluate({cand, 0, 0, 0}).real() >= best_v)
      best_x = cand;
  }
  return best_x;
}

Marginal marginal_position(const GaussianPolynomial& psi, int star_order, double omega,
                           double hbar, Var keep, int samples) {
  GaussianPolynomial f = wigner_from_state(psi, star_order, omega, hbar);
  std::vector<Var> out_vars;
  for (int v = 0; v < f.num_vars(); ++v)
    if (v != var_index(keep)) out_vars.push_back(static_cast<Var>(v));
  GaussianPolynomial sigma = integrate_out(f, out_vars);
  if (sigma.imag_residual() > 1e-8)
    throw std::runtime_error("marginal_position: marginal is not real");
  sigma = sigma.real_part();

  // sample over the envelope support
  int n_hint = psi.total_degree();
  double half = 4.0 + 2.5 * std::sqrt(2.0 * n_hint + 1.0);
  Marginal m;
  m.q.resize(samples);
  m.sigma.resize(samples);
  for (int i = 0; i < samples; ++i) {
    double x = -half + 2 * half * double(i) / double(samples - 1);
    m.q[i] = x;
    m.sigma[i] = sigma.evaluate({x, 0, 0, 0}).real();
  }
  m.argmax = argmax_1d(sigma, -half, half, samples);
  return m;
}

}  // namespace phasespace
