#include "phasespace/hydrogen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "phasespace/grid.hpp"
#include "phasespace/star.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

namespace {

const Complex kI{0.0, 1.0};

bool is_nonpositive_integer(double x) {
  return x <= 1e-12 && std::abs(x - std::round(x)) < 1e-12;
}

long long gcd_ll(long long a, long long b) { return std::gcd(std::abs(a), std::abs(b)); }

double branch_sign(Branch b) { return b == Branch::PositiveQ ? 1.0 : -1.0; }

// Upper sampling limit: extend until the profile squared falls below
// 1e-14 of its running peak.
double branch_limit(int n, int z) {
  HydrogenParams p{z, n, Branch::PositiveQ};
  GaussianPolynomial f = hydrogen_profile(p, false);
  double peak = 0.0;
  double q = 1.0;
  while (q < 4000.0) {
    double v = std::abs(f.evaluate({q, 0, 0, 0}).real());
    peak = std::max(peak, v);
    if (peak > 0.0 && v < 1e-14 * peak && q > 2.0 * n * n / double(z)) break;
    q += std::max(0.25, 0.05 * q);
  }
  return q;
}

}  // namespace

std::vector<double> kummer_polynomial(int m, int b) {
  if (m < 0) throw std::invalid_argument("kummer_polynomial: m must be >= 0");
  if (b <= 0) throw std::invalid_argument("kummer_polynomial: b must be positive");
  // c_{k+1}/c_k = (a+k)/((b+k)(k+1)) with a = -m; exact rationals.
  std::vector<double> coeffs(m + 1);
  long long num = 1, den = 1;
  coeffs[0] = 1.0;
  for (int k = 0; k < m; ++k) {
    num *= (-m + k);
    den *= (b + k) * (k + 1);
    long long g = gcd_ll(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    coeffs[k + 1] = double(num) / double(den);
  }
  return coeffs;
}

double confluent_F(double a, double b, double x) {
  if (is_nonpositive_integer(b))
    throw std::invalid_argument("confluent_F: b must not be a nonpositive integer");
  if (is_nonpositive_integer(a)) {
    int m = int(std::llround(-a));
    int bi = int(std::llround(b));
    std::vector<double> c = (std::abs(b - bi) < 1e-12 && bi > 0)
                                ? kummer_polynomial(m, bi)
                                : std::vector<double>{};
    if (!c.empty()) {
      double acc = 0.0;
      for (int k = m; k >= 0; --k) acc = acc * x + c[k];
      return acc;
    }
  }
  // generic series with a relative-term stop
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= (a + k) * x / ((b + k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-12 * std::max(1.0, std::abs(sum)) && k > 2) return sum;
  }
  throw std::runtime_error("confluent_F: series did not converge");
}

GaussianPolynomial hydrogen_profile(const HydrogenParams& p, bool shifted) {
  if (p.n < 1) throw std::invalid_argument("hydrogen_profile: n must be >= 1");
  const double zn = double(p.z) / double(p.n);
  const double sgn = branch_sign(p.branch);
  // rho(x) = x exp(-zn |x|) F(1-n, 2; 2 zn |x|) on the branch; represent in
  // the signed coordinate so the (q<0) branch mirrors the (q>0) one.
  std::vector<double> kum = kummer_polynomial(p.n - 1, 2);
  GaussianPolynomial poly = GaussianPolynomial::zero(1);
  Envelope env;
  env.lin[0] = Complex{sgn * zn, 0.0};  // exp(-zn * sgn * q)
  for (int k = 0; k <= p.n - 1; ++k) {
    double c = kum[k] * std::pow(2.0 * zn * sgn, k) * sgn;
    std::array<std::uint8_t, kMaxVars> e{};
    e[0] = std::uint8_t(k + 1);  // leading x from the ansatz
    poly.add_raw(env, pack_exp(e), Complex{c, 0.0});
  }
  poly.canonicalize();
  if (!shifted) return poly;
  // the plane-wave h(p) of the full solution shifts the profile by one Bohr
  // radius a = 1/Z along the branch
  const double a0 = 1.0 / double(p.z);
  return poly.translate({sgn * a0, 0.0, 0.0, 0.0});
}

GaussianPolynomial hydrogen_state(const HydrogenParams& p) {
  GaussianPolynomial radial = hydrogen_profile(p, true);
  // phases: exp(-2iqp/hbar) * h(p), h(p) = exp(2i a0 p)/sqrt(2 pi), hbar = 1
  const double a0 = 1.0 / double(p.z);
  GaussianPolynomial out = GaussianPolynomial::zero(1);
  for (const auto& g : radial.groups()) {
    Envelope env = g.env;
    env.set_q(0, 1, env.q(0, 1) + kI);        // adds exp(-2iqp)
    env.lin[1] += Complex{0.0, -2.0 * a0};    // adds exp(+2i a0 p)
    for (const auto& m : g.monos) out.add_raw(env, m.exps, m.coeff / std::sqrt(2.0 * M_PI));
  }
  out.canonicalize();
  return out;
}

double hydrogen_energy_hartree(int n, int z) {
  if (n < 1) throw std::invalid_argument("hydrogen_energy: n must be >= 1");
  return -0.5 * double(z) * double(z) / (double(n) * double(n));
}

double hydrogen_energy_ev(int n, int z) { return hydrogen_energy_hartree(n, z) * kHartreeEv; }

HydrogenWigner hydrogen_wigner(int n, int star_order, int z) {
  HydrogenParams p{z, n, Branch::PositiveQ};
  GaussianPolynomial psi = hydrogen_profile(p, true);
  psi *= Complex{1.0 / std::sqrt(2.0 * M_PI), 0.0};
  GaussianPolynomial f_raw = star_truncated(psi, psi.conjugate(), star_order, 1.0);
  if (f_raw.imag_residual() > 1e-10)
    throw std::runtime_error("hydrogen_wigner: product is not real");
  GaussianPolynomial f = f_raw.real_part();

  const double a0 = 1.0 / double(z);
  const double q_hi = branch_limit(n, z) + a0;
  // normalize on the branch: trapezoid over [0, q_hi], factored evaluation
  const int pts = 8193;
  double h = q_hi / double(pts - 1);
  KahanSum s;
  for (int i = 0; i < pts; ++i) {
    double w = (i == 0 || i == pts - 1) ? 0.5 * h : h;
    double amp = psi.evaluate({i * h, 0, 0, 0}).real();
    s.add(w * amp * amp);
  }
  if (std::abs(s.sum) < 1e-300) throw std::runtime_error("hydrogen_wigner: zero norm");
  f *= Complex{1.0 / s.sum, 0.0};
  psi *= Complex{1.0 / std::sqrt(s.sum), 0.0};
  return {f, psi, q_hi};
}

RadialDensity radial_density(int n, int z, int samples) {
  HydrogenParams p{z, n, Branch::PositiveQ};
  GaussianPolynomial rho = hydrogen_profile(p, false);
  GaussianPolynomial dens = rho.multiply(rho.conjugate()).real_part();
  double q_hi = branch_limit(n, z);
  RadialDensity out;
  out.q.resize(samples);
  out.sigma.resize(samples);
  double h = q_hi / double(samples - 1);
  KahanSum norm;
  for (int i = 0; i < samples; ++i) {
    double x = i * h;
    out.q[i] = x;
    out.sigma[i] = dens.evaluate({x, 0, 0, 0}).real();
    norm.add(((i == 0 || i == samples - 1) ? 0.5 : 1.0) * h * out.sigma[i]);
  }
  for (auto& v : out.sigma) v /= norm.sum;
  out.argmax = argmax_1d(dens, 0.0, q_hi, samples);
  return out;
}

double bohr_radius_estimate(int z) { return radial_density(1, z).argmax; }

HydrogenNegativity hydrogen_negativity(int n, int z, int points) {
  HydrogenWigner w = hydrogen_wigner(n, 2, z);
  // integrand through the factored amplitude: the expanded polynomial loses
  // ~1e-5 of mass to cancellation near its double roots at high n
  auto eta_at = [&](int pts) {
    double h = w.q_hi / double(pts - 1);
    KahanSum abs_s, sig_s;
    for (int i = 0; i < pts; ++i) {
      double wt = (i == 0 || i == pts - 1) ? 0.5 * h : h;
      double amp = w.amplitude.evaluate({i * h, 0, 0, 0}).real();
      double v = amp * amp;
      abs_s.add(wt * std::abs(v));
      sig_s.add(wt * v);
    }
    return abs_s.sum / sig_s.sum - 1.0;
  };
  double eta = eta_at(points);
  double eta_fine = eta_at(2 * points - 1);
  return {eta, std::abs(eta - eta_fine)};
}

double hydrogen_eigen_residual(int n, int z) {
  HydrogenParams p{z, n, Branch::PositiveQ};
  GaussianPolynomial rho = hydrogen_profile(p, false);
  GaussianPolynomial d2 = rho.differentiate(Var::Qx).differentiate(Var::Qx);
  const double E = hydrogen_energy_hartree(n, z);
  // x * (H rho - E rho) = -x rho''/2 - Z rho - E x rho
  double q_hi = branch_limit(n, z);
  double scale = 0.0, worst = 0.0;
  const int pts = 512;
  for (int i = 0; i < pts; ++i) {
    double x = 0.05 + (q_hi - 0.05) * double(i) / double(pts - 1);
    double r = rho.evaluate({x, 0, 0, 0}).real();
    double rpp = d2.evaluate({x, 0, 0, 0}).real();
    double lhs = -0.5 * x * rpp - double(z) * r - E * x * r;
    worst = std::max(worst, std::abs(lhs));
    scale = std::max(scale, std::abs(E * x * r));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace phasespace
