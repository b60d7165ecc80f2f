#include "phasespace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

namespace phasespace {

namespace {

// 1D moment table: s_k with  int v^k exp(-a v^2 - b v) dv
//                          = sqrt(pi/a) exp(b^2/(4a)) s_k,
// via the shifted-Gaussian recursion s_k = mu s_{k-1} + (k-1) sigma2 s_{k-2}.
std::vector<Complex> moment_table(Complex alpha, Complex beta, int max_k) {
  std::vector<Complex> s(max_k + 1);
  const Complex mu = -beta / (2.0 * alpha);
  const Complex sigma2 = 1.0 / (2.0 * alpha);
  s[0] = 1.0;
  if (max_k >= 1) s[1] = mu;
  for (int k = 2; k <= max_k; ++k) s[k] = mu * s[k - 1] + double(k - 1) * sigma2 * s[k - 2];
  return s;
}

// Same table evaluated through the Gauss-Hermite rule (exact for k <= 2N-1).
std::vector<Complex> gh_moment_table(Complex alpha, Complex beta, int max_k, int points) {
  const auto& rule = gauss_hermite_rule(points);
  const Complex sa = std::sqrt(alpha);
  const Complex mu = -beta / (2.0 * alpha);
  std::vector<Complex> s(max_k + 1, Complex{});
  const double spi = std::sqrt(M_PI);
  for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
    Complex v = mu + rule.nodes[m] / sa;
    Complex pw{1.0, 0.0};
    for (int k = 0; k <= max_k; ++k) {
      s[k] += rule.weights[m] * pw;
      pw *= v;
    }
  }
  // normalize so the caller applies the same sqrt(pi/a) exp(b^2/4a) prefactor
  for (auto& z : s) z /= spi;
  return s;
}

struct DiagonalGroup {
  TermGroup group;
  int nvars;
};

// Rotate a real-symmetric envelope to principal axes, transforming the
// attached polynomial exactly.  Degree growth is multiplicative, so cap it.
DiagonalGroup diagonalize_group(const TermGroup& g, int nvars) {
  Eigen::MatrixXd Q(nvars, nvars);
  for (int i = 0; i < nvars; ++i)
    for (int j = 0; j < nvars; ++j) {
      if (std::abs(g.env.q(i, j).imag()) > 0.0)
        throw std::invalid_argument("integrate: complex quadratic coupling is unsupported");
      Q(i, j) = g.env.q(i, j).real();
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  Eigen::MatrixXd V = es.eigenvectors();
  Eigen::VectorXd D = es.eigenvalues();

  DiagonalGroup out;
  out.nvars = nvars;
  Envelope env;
  for (int i = 0; i < nvars; ++i) env.set_q(i, i, Complex{D(i), 0.0});
  for (int j = 0; j < nvars; ++j) {
    Complex lj{};
    for (int i = 0; i < nvars; ++i) lj += g.env.lin[i] * V(i, j);
    env.lin[j] = lj;
  }
  env.cnst = g.env.cnst;
  out.group.env = env;

  // substitute v_i = sum_j V(i,j) u_j into each monomial
  std::unordered_map<PackedExp, Complex> acc;
  for (const auto& m : g.monos) {
    auto e = unpack_exp(m.exps);
    int deg = 0;
    for (int i = 0; i < nvars; ++i) deg += e[i];
    if (deg > 24) throw std::invalid_argument("integrate: rotated polynomial degree too high");
    std::unordered_map<PackedExp, Complex> poly{{0, m.coeff}};
    for (int i = 0; i < nvars; ++i) {
      for (int rep = 0; rep < e[i]; ++rep) {
        std::unordered_map<PackedExp, Complex> next;
        for (const auto& [key, c] : poly) {
          auto ke = unpack_exp(key);
          for (int j = 0; j < nvars; ++j) {
            if (V(i, j) == 0.0) continue;
            auto ne = ke;
            ne[j] += 1;
            next[pack_exp(ne)] += c * V(i, j);
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [key, c] : poly) acc[key] += c;
  }
  out.group.monos.reserve(acc.size());
  for (const auto& [key, c] : acc) out.group.monos.push_back({key, c});
  return out;
}

Complex integrate_diagonal_group(const TermGroup& g, int nvars, int gh_points) {
  std::array<int, kMaxVars> maxdeg{};
  for (const auto& m : g.monos) {
    auto e = unpack_exp(m.exps);
    for (int v = 0; v < nvars; ++v) maxdeg[v] = std::max(maxdeg[v], int(e[v]));
  }
  Complex pref = std::exp(-g.env.cnst);
  std::array<std::vector<Complex>, kMaxVars> tables;
  for (int v = 0; v < nvars; ++v) {
    Complex alpha = g.env.q(v, v);
    Complex beta = g.env.lin[v];
    if (alpha.real() <= 0.0)
      throw std::domain_error("integrate: envelope is not integrable (Re quad not PD)");
    pref *= std::sqrt(M_PI / alpha) * std::exp(beta * beta / (4.0 * alpha));
    tables[v] = gh_points > 0 ? gh_moment_table(alpha, beta, maxdeg[v], gh_points)
                              : moment_table(alpha, beta, maxdeg[v]);
  }
  Complex acc{};
  for (const auto& m : g.monos) {
    auto e = unpack_exp(m.exps);
    Complex t = m.coeff;
    for (int v = 0; v < nvars; ++v) t *= tables[v][e[v]];
    acc += t;
  }
  return pref * acc;
}

Complex integrate_impl(const GaussianPolynomial& f, int gh_points) {
  const int nvars = f.num_vars();
  Complex total{};
  for (const auto& g : f.groups()) {
    if (g.env.is_diagonal(nvars)) {
      total += integrate_diagonal_group(g, nvars, gh_points);
    } else {
      DiagonalGroup dg = diagonalize_group(g, nvars);
      total += integrate_diagonal_group(dg.group, nvars, gh_points);
    }
  }
  return total;
}

std::vector<double> trapezoid_weights(const std::vector<double>& xs) {
  std::vector<double> w(xs.size(), 0.0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double h = xs[i + 1] - xs[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

Quadrature Quadrature::gauss_hermite(int points) {
  Quadrature q;
  q.kind = Kind::GaussHermiteTensor;
  q.points_per_axis = points;
  return q;
}

Quadrature Quadrature::trapezoid(int points, std::vector<std::pair<double, double>> box) {
  Quadrature q;
  q.kind = Kind::TrapezoidTensor;
  q.points_per_axis = points;
  q.box = std::move(box);
  return q;
}

const GaussHermiteRule& gauss_hermite_rule(int points) {
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  if (points < 1 || points > 256) throw std::invalid_argument("gauss_hermite_rule: bad size");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    double b = std::sqrt(k / 2.0);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < points; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

Complex integrate(const GaussianPolynomial& f) { return integrate_impl(f, 0); }

Complex integrate(const GaussianPolynomial& f, const Quadrature& quad) {
  if (quad.kind == Quadrature::Kind::GaussHermiteTensor)
    return integrate_impl(f, quad.points_per_axis);

  if (quad.box.size() != std::size_t(f.num_vars()))
    throw std::invalid_argument("integrate(trapezoid): box has wrong number of axes");
  std::vector<int> pts(f.num_vars(), quad.points_per_axis);
  GridSpec grid = GridSpec::uniform(quad.box, pts);
  std::vector<std::vector<double>> w;
  for (const auto& xs : grid.axes) w.push_back(trapezoid_weights(xs));
  std::size_t slab = grid.total_points() / grid.axes[0].size();
  std::vector<double> wslab(slab, 1.0);
  for (std::size_t r = 0; r < slab; ++r) {
    std::size_t rem = r;
    for (std::size_t v = grid.axes.size(); v-- > 1;) {
      wslab[r] *= w[v][rem % grid.axes[v].size()];
      rem /= grid.axes[v].size();
    }
  }
  KahanSum re, im;
  stream_grid(f, grid, [&](std::size_t i0, const Complex* vals, std::size_t count) {
    double w0 = w[0][i0];
    for (std::size_t r = 0; r < count; ++r) {
      re.add(w0 * wslab[r] * vals[r].real());
      im.add(w0 * wslab[r] * vals[r].imag());
    }
  });
  return Complex{re.sum, im.sum};
}

GaussianPolynomial integrate_out(const GaussianPolynomial& f, const std::vector<Var>& out_vars) {
  const int nvars = f.num_vars();
  std::array<bool, kMaxVars> drop{};
  for (Var v : out_vars) {
    if (var_index(v) >= nvars) throw std::invalid_argument("integrate_out: bad variable");
    drop[var_index(v)] = true;
  }
  std::vector<int> kept;
  for (int v = 0; v < nvars; ++v)
    if (!drop[v]) kept.push_back(v);
  if (kept.empty()) throw std::invalid_argument("integrate_out: use integrate() for all vars");
  const int out_dim = int(kept.size() + 1) / 2;

  GaussianPolynomial out(out_dim);
  for (const auto& g : f.groups()) {
    if (!g.env.is_diagonal(nvars))
      throw std::invalid_argument("integrate_out requires diagonal envelopes");
    std::array<int, kMaxVars> maxdeg{};
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      for (int v = 0; v < nvars; ++v) maxdeg[v] = std::max(maxdeg[v], int(e[v]));
    }
    Complex pref{1.0, 0.0};
    std::array<std::vector<Complex>, kMaxVars> tables;
    for (int v = 0; v < nvars; ++v) {
      if (!drop[v]) continue;
      Complex alpha = g.env.q(v, v);
      Complex beta = g.env.lin[v];
      if (alpha.real() <= 0.0)
        throw std::domain_error("integrate_out: variable direction is not integrable");
      pref *= std::sqrt(M_PI / alpha) * std::exp(beta * beta / (4.0 * alpha));
      tables[v] = moment_table(alpha, beta, maxdeg[v]);
    }
    Envelope env;
    for (std::size_t s = 0; s < kept.size(); ++s) {
      env.set_q(int(s), int(s), g.env.q(kept[s], kept[s]));
      env.lin[s] = g.env.lin[kept[s]];
    }
    env.cnst = g.env.cnst;
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      Complex c = m.coeff * pref;
      for (int v = 0; v < nvars; ++v)
        if (drop[v]) c *= tables[v][e[v]];
      std::array<std::uint8_t, kMaxVars> ne{};
      for (std::size_t s = 0; s < kept.size(); ++s) ne[s] = e[kept[s]];
      out.add_raw(env, pack_exp(ne), c);
    }
  }
  out.canonicalize();
  return out;
}

std::vector<std::pair<double, double>> auto_box(const GaussianPolynomial& f, int n_max, double c,
                                                double s) {
  const int nvars = f.num_vars();
  double half = c + s * std::sqrt(2.0 * n_max + 1.0);
  // center each axis on the envelope means so shifted states stay covered
  // and translated copies see congruent grids
  std::vector<double> lo_c(nvars, std::numeric_limits<double>::infinity());
  std::vector<double> hi_c(nvars, -std::numeric_limits<double>::infinity());
  for (const auto& g : f.groups()) {
    for (int v = 0; v < nvars; ++v) {
      Complex alpha = g.env.q(v, v);
      if (alpha.real() <= 0.0) continue;
      double mu = (-g.env.lin[v] / (2.0 * alpha)).real();
      lo_c[v] = std::min(lo_c[v], mu);
      hi_c[v] = std::max(hi_c[v], mu);
    }
  }
  for (int v = 0; v < nvars; ++v) {
    if (!std::isfinite(lo_c[v])) lo_c[v] = 0.0;
    if (!std::isfinite(hi_c[v])) hi_c[v] = 0.0;
  }
  const int probe = 17;
  auto make_box = [&](double h) {
    std::vector<std::pair<double, double>> box(nvars);
    for (int v = 0; v < nvars; ++v) box[v] = {lo_c[v] - h, hi_c[v] + h};
    return box;
  };
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<std::pair<double, double>> box = make_box(half);
    GridSpec grid = GridSpec::uniform(box, std::vector<int>(nvars, probe));
    auto vals = evaluate_grid_dense(f, grid);
    double peak = 0.0, boundary = 0.0;
    std::vector<std::size_t> dims;
    for (const auto& a : grid.axes) dims.push_back(a.size());
    for (std::size_t flat = 0; flat < vals.size(); ++flat) {
      double a = std::abs(vals[flat]);
      peak = std::max(peak, a);
      std::size_t rem = flat;
      bool on_boundary = false;
      for (std::size_t v = dims.size(); v-- > 0;) {
        std::size_t idx = rem % dims[v];
        rem /= dims[v];
        if (idx == 0 || idx + 1 == dims[v]) on_boundary = true;
      }
      if (on_boundary) boundary = std::max(boundary, a);
    }
    if (peak == 0.0 || boundary < 1e-10 * peak || half > 64.0) return box;
    half += 1.0;
  }
  return make_box(half);
}

AbsIntegral integrate_abs(const GaussianPolynomial& f, const Quadrature& quad) {
  if (quad.kind != Quadrature::Kind::TrapezoidTensor)
    throw std::invalid_argument("integrate_abs: trapezoid-tensor rule required");
  return integrate_abs(f, quad.box, std::vector<int>(f.num_vars(), quad.points_per_axis));
}

AbsIntegral integrate_abs(const GaussianPolynomial& f,
                          const std::vector<std::pair<double, double>>& box,
                          const std::vector<int>& points_per_axis) {
  if (box.size() != std::size_t(f.num_vars()))
    throw std::invalid_argument("integrate_abs: box has wrong number of axes");
  GridSpec grid = GridSpec::uniform(box, points_per_axis);
  std::vector<std::vector<double>> w;
  for (const auto& xs : grid.axes) w.push_back(trapezoid_weights(xs));
  std::size_t slab = grid.total_points() / grid.axes[0].size();
  std::vector<double> wslab(slab, 1.0);
  for (std::size_t r = 0; r < slab; ++r) {
    std::size_t rem = r;
    for (std::size_t v = grid.axes.size(); v-- > 1;) {
      wslab[r] *= w[v][rem % grid.axes[v].size()];
      rem /= grid.axes[v].size();
    }
  }
  KahanSum abs_sum, signed_sum;
  double max_re = 0.0, max_im = 0.0;
  stream_grid(f, grid, [&](std::size_t i0, const Complex* vals, std::size_t count) {
    double w0 = w[0][i0];
    for (std::size_t r = 0; r < count; ++r) {
      double re = vals[r].real();
      max_re = std::max(max_re, std::abs(re));
      max_im = std::max(max_im, std::abs(vals[r].imag()));
      abs_sum.add(w0 * wslab[r] * std::abs(re));
      signed_sum.add(w0 * wslab[r] * re);
    }
  });
  double residual = max_re > 0.0 ? max_im / max_re : 0.0;
  if (residual > 1e-8)
    throw std::runtime_error(
        "integrate_abs: integrand is not real on the grid (imag residual " +
        std::to_string(residual) + "); upstream construction is not Hermitian");
  return {abs_sum.sum, signed_sum.sum, residual};
}

AbsIntegral integrate_abs_auto(const GaussianPolynomial& f, int n_max, int points_per_axis) {
  Quadrature quad = Quadrature::trapezoid(points_per_axis, auto_box(f, n_max));
  return integrate_abs(f, quad);
}

}  // namespace phasespace
