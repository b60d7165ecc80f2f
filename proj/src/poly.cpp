#include "phasespace/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace phasespace {

namespace {

constexpr double kKeyScale = 1e12;

std::int64_t quantize(double x) {
  double s = x * kKeyScale;
  if (std::abs(s) > 9.0e18) throw std::runtime_error("envelope entry too large to canonicalize");
  std::int64_t q = std::llround(s);
  return q == 0 ? 0 : q;  // normalize -0
}

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 2 * (kMaxVars * kMaxVars + kMaxVars + 1)>& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

const char* var_name(Var v) {
  switch (v) {
    case Var::Qx: return "q_x";
    case Var::Px: return "p_x";
    case Var::Qy: return "q_y";
    case Var::Py: return "p_y";
  }
  return "?";
}

bool Envelope::is_zero() const {
  for (const auto& z : quad)
    if (z != Complex{}) return false;
  for (const auto& z : lin)
    if (z != Complex{}) return false;
  return cnst == Complex{};
}

bool Envelope::is_diagonal(int nvars) const {
  for (int i = 0; i < nvars; ++i)
    for (int j = 0; j < nvars; ++j)
      if (i != j && q(i, j) != Complex{}) return false;
  return true;
}

bool Envelope::real_part_psd(int nvars) const {
  // Sylvester-style check on the real part via a pivoted Cholesky attempt.
  std::array<double, kMaxVars * kMaxVars> a{};
  for (int i = 0; i < nvars; ++i)
    for (int j = 0; j < nvars; ++j) a[i * nvars + j] = q(i, j).real();
  // LDL^T without pivoting; PSD iff all pivots >= -tol.
  const double tol = 1e-12;
  for (int k = 0; k < nvars; ++k) {
    double d = a[k * nvars + k];
    if (d < -tol) return false;
    if (std::abs(d) < tol) {
      // zero pivot: the row/col must vanish for PSD
      for (int j = k + 1; j < nvars; ++j)
        if (std::abs(a[k * nvars + j]) > 1e-10) return false;
      continue;
    }
    for (int i = k + 1; i < nvars; ++i) {
      double f = a[i * nvars + k] / d;
      for (int j = k; j < nvars; ++j) a[i * nvars + j] -= f * a[k * nvars + j];
    }
  }
  return true;
}

bool Envelope::diagonal_positive(int nvars) const {
  if (!is_diagonal(nvars)) return false;
  for (int i = 0; i < nvars; ++i)
    if (q(i, i).real() <= 0.0) return false;
  return true;
}

std::array<std::int64_t, 2 * (kMaxVars * kMaxVars + kMaxVars + 1)> envelope_key(
    const Envelope& env) {
  std::array<std::int64_t, 2 * (kMaxVars * kMaxVars + kMaxVars + 1)> key{};
  std::size_t idx = 0;
  for (const auto& z : env.quad) {
    key[idx++] = quantize(z.real());
    key[idx++] = quantize(z.imag());
  }
  for (const auto& z : env.lin) {
    key[idx++] = quantize(z.real());
    key[idx++] = quantize(z.imag());
  }
  key[idx++] = quantize(env.cnst.real());
  key[idx++] = quantize(env.cnst.imag());
  return key;
}

GaussianPolynomial::GaussianPolynomial(int dimension) : dim_(dimension) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("GaussianPolynomial: dimension must be 1 or 2");
}

GaussianPolynomial GaussianPolynomial::zero(int dimension) {
  return GaussianPolynomial(dimension);
}

GaussianPolynomial GaussianPolynomial::constant(int dimension, Complex value) {
  GaussianPolynomial f(dimension);
  f.add_raw(Envelope{}, 0, value);
  f.canonicalize();
  return f;
}

GaussianPolynomial GaussianPolynomial::variable(int dimension, Var v) {
  if (var_index(v) >= 2 * dimension)
    throw std::invalid_argument("variable outside declared dimension");
  std::array<std::uint8_t, kMaxVars> e{};
  e[var_index(v)] = 1;
  return monomial(dimension, Complex{1.0, 0.0}, e);
}

GaussianPolynomial GaussianPolynomial::monomial(
    int dimension, Complex coeff, const std::array<std::uint8_t, kMaxVars>& exps) {
  GaussianPolynomial f(dimension);
  for (int i = 2 * dimension; i < kMaxVars; ++i)
    if (exps[i] != 0) throw std::invalid_argument("monomial exponent outside dimension");
  f.add_raw(Envelope{}, pack_exp(exps), coeff);
  f.canonicalize();
  return f;
}

GaussianPolynomial GaussianPolynomial::gaussian(int dimension, const Envelope& env) {
  GaussianPolynomial f(dimension);
  const int nv = 2 * dimension;
  for (int i = nv; i < kMaxVars; ++i) {
    if (env.lin[i] != Complex{}) throw std::invalid_argument("envelope outside dimension");
    for (int j = 0; j < kMaxVars; ++j)
      if (env.q(i, j) != Complex{}) throw std::invalid_argument("envelope outside dimension");
  }
  f.add_raw(env, 0, Complex{1.0, 0.0});
  f.canonicalize();
  return f;
}

std::size_t GaussianPolynomial::term_count() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.monos.size();
  return n;
}

void GaussianPolynomial::add_raw(const Envelope& env, PackedExp exps, Complex coeff) {
  // Linear scan over groups; the group count stays tiny in practice.
  for (auto& g : groups_) {
    if (envelope_key(g.env) == envelope_key(env)) {
      g.monos.push_back({exps, coeff});
      return;
    }
  }
  groups_.push_back({env, {{exps, coeff}}});
}

GaussianPolynomial& GaussianPolynomial::operator+=(const GaussianPolynomial& other) {
  if (other.dim_ != dim_ && !other.empty() && !empty())
    throw std::invalid_argument("dimension mismatch in +=");
  if (empty()) dim_ = other.dim_;
  for (const auto& g : other.groups_)
    for (const auto& m : g.monos) add_raw(g.env, m.exps, m.coeff);
  canonicalize();
  return *this;
}

GaussianPolynomial& GaussianPolynomial::operator-=(const GaussianPolynomial& other) {
  GaussianPolynomial neg = other;
  neg *= Complex{-1.0, 0.0};
  return (*this += neg);
}

GaussianPolynomial& GaussianPolynomial::operator*=(Complex scalar) {
  for (auto& g : groups_)
    for (auto& m : g.monos) m.coeff *= scalar;
  canonicalize();
  return *this;
}

GaussianPolynomial GaussianPolynomial::multiply(const GaussianPolynomial& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch in multiply");
  GaussianPolynomial out(dim_);
  for (const auto& ga : groups_) {
    for (const auto& gb : other.groups_) {
      Envelope env;
      for (int i = 0; i < kMaxVars * kMaxVars; ++i) env.quad[i] = ga.env.quad[i] + gb.env.quad[i];
      for (int i = 0; i < kMaxVars; ++i) env.lin[i] = ga.env.lin[i] + gb.env.lin[i];
      env.cnst = ga.env.cnst + gb.env.cnst;
      auto& group = [&]() -> TermGroup& {
        for (auto& g : out.groups_)
          if (envelope_key(g.env) == envelope_key(env)) return g;
        out.groups_.push_back({env, {}});
        return out.groups_.back();
      }();
      std::unordered_map<PackedExp, Complex> acc;
      acc.reserve(ga.monos.size() * gb.monos.size());
      for (const auto& ma : ga.monos) {
        auto ea = unpack_exp(ma.exps);
        for (const auto& mb : gb.monos) {
          auto eb = unpack_exp(mb.exps);
          std::array<std::uint8_t, kMaxVars> e{};
          for (int i = 0; i < kMaxVars; ++i) {
            int s = ea[i] + eb[i];
            if (s > 255) throw std::runtime_error("monomial degree overflow in multiply");
            e[i] = static_cast<std::uint8_t>(s);
          }
          acc[pack_exp(e)] += ma.coeff * mb.coeff;
        }
      }
      group.monos.reserve(group.monos.size() + acc.size());
      for (const auto& [k, c] : acc) group.monos.push_back({k, c});
    }
  }
  out.canonicalize();
  return out;
}

GaussianPolynomial GaussianPolynomial::conjugate() const {
  GaussianPolynomial out(dim_);
  for (const auto& g : groups_) {
    Envelope env;
    for (int i = 0; i < kMaxVars * kMaxVars; ++i) env.quad[i] = std::conj(g.env.quad[i]);
    for (int i = 0; i < kMaxVars; ++i) env.lin[i] = std::conj(g.env.lin[i]);
    env.cnst = std::conj(g.env.cnst);
    for (const auto& m : g.monos) out.add_raw(env, m.exps, std::conj(m.coeff));
  }
  out.canonicalize();
  return out;
}

GaussianPolynomial GaussianPolynomial::differentiate(Var v) const {
  const int d = var_index(v);
  if (d >= num_vars()) throw std::invalid_argument("differentiate: variable outside dimension");
  GaussianPolynomial out(dim_);
  for (const auto& g : groups_) {
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      // monomial part
      if (e[d] > 0) {
        auto e1 = e;
        e1[d] -= 1;
        out.add_raw(g.env, pack_exp(e1), m.coeff * double(e[d]));
      }
      // envelope part: -(sum_w 2 Q[d][w] v_w + L[d])
      for (int w = 0; w < num_vars(); ++w) {
        Complex qdw = g.env.q(d, w);
        if (qdw == Complex{}) continue;
        auto e1 = e;
        if (e1[w] == 255) throw std::runtime_error("degree overflow in differentiate");
        e1[w] += 1;
        out.add_raw(g.env, pack_exp(e1), -2.0 * qdw * m.coeff);
      }
      if (g.env.lin[d] != Complex{}) out.add_raw(g.env, m.exps, -g.env.lin[d] * m.coeff);
    }
  }
  out.canonicalize();
  return out;
}

GaussianPolynomial GaussianPolynomial::multiply_by_var(Var v) const {
  const int d = var_index(v);
  if (d >= num_vars()) throw std::invalid_argument("multiply_by_var: variable outside dimension");
  GaussianPolynomial out(dim_);
  for (const auto& g : groups_) {
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      if (e[d] == 255) throw std::runtime_error("degree overflow in multiply_by_var");
      e[d] += 1;
      out.add_raw(g.env, pack_exp(e), m.coeff);
    }
  }
  out.canonicalize();
  return out;
}

GaussianPolynomial GaussianPolynomial::translate(
    const std::array<double, kMaxVars>& shift) const {
  // f(v - t): envelope exponent becomes
  //   (v-t)^T Q (v-t) + L.(v-t) + c
  //   = v^T Q v + (L - 2 Q t).v + (c + t^T Q t - L.t),
  // and each monomial (v_d - t_d)^e expands binomially.
  const int nv = num_vars();
  GaussianPolynomial out(dim_);
  for (const auto& g : groups_) {
    Envelope env = g.env;
    Complex cshift{};
    for (int i = 0; i < nv; ++i) {
      Complex qt{};
      for (int j = 0; j < nv; ++j) qt += g.env.q(i, j) * shift[j];
      env.lin[i] = g.env.lin[i] - 2.0 * qt;
      cshift += qt * shift[i] - g.env.lin[i] * shift[i];
    }
    env.cnst = g.env.cnst + cshift;
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      // expand prod (v_d - t_d)^{e_d}
      std::vector<std::pair<std::array<std::uint8_t, kMaxVars>, double>> parts;
      parts.push_back({{0, 0, 0, 0}, 1.0});
      for (int d = 0; d < nv; ++d) {
        if (e[d] == 0) continue;
        std::vector<std::pair<std::array<std::uint8_t, kMaxVars>, double>> next;
        // binomial coefficients of (v - t)^e[d]
        double binom = 1.0;
        std::vector<double> pw(e[d] + 1);
        pw[0] = 1.0;
        for (int k = 1; k <= e[d]; ++k) pw[k] = pw[k - 1] * (-shift[d]);
        for (int k = 0; k <= e[d]; ++k) {
          if (k > 0) binom = binom * double(e[d] - k + 1) / double(k);
          for (const auto& [pe, pc] : parts) {
            auto ne = pe;
            ne[d] = static_cast<std::uint8_t>(e[d] - k);
            next.push_back({ne, pc * binom * pw[k]});
          }
        }
        parts = std::move(next);
      }
      for (const auto& [pe, pc] : parts) out.add_raw(env, pack_exp(pe), m.coeff * pc);
    }
  }
  out.canonicalize();
  return out;
}

Complex GaussianPolynomial::evaluate(const std::array<double, kMaxVars>& point) const {
  const int nv = num_vars();
  Complex total{};
  for (const auto& g : groups_) {
    Complex expo = g.env.cnst;
    for (int i = 0; i < nv; ++i) {
      expo += g.env.lin[i] * point[i];
      for (int j = 0; j < nv; ++j) expo += g.env.q(i, j) * point[i] * point[j];
    }
    Complex envf = std::exp(-expo);
    Complex psum{};
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      double mono = 1.0;
      for (int i = 0; i < nv; ++i)
        for (int k = 0; k < e[i]; ++k) mono *= point[i];
      psum += m.coeff * mono;
    }
    total += psum * envf;
  }
  return total;
}

GaussianPolynomial GaussianPolynomial::restricted_to_zero(const std::vector<Var>& vars) const {
  std::array<bool, kMaxVars> fixed{};
  for (Var v : vars) fixed[var_index(v)] = true;
  GaussianPolynomial out(dim_);
  for (const auto& g : groups_) {
    Envelope env = g.env;
    for (int i = 0; i < kMaxVars; ++i) {
      if (!fixed[i]) continue;
      env.lin[i] = Complex{};
      for (int j = 0; j < kMaxVars; ++j) {
        env.quad[i * kMaxVars + j] = Complex{};
        env.quad[j * kMaxVars + i] = Complex{};
      }
    }
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      bool alive = true;
      for (int i = 0; i < kMaxVars; ++i)
        if (fixed[i] && e[i] != 0) alive = false;
      if (alive) out.add_raw(env, m.exps, m.coeff);
    }
  }
  out.canonicalize();
  return out;
}

int GaussianPolynomial::total_degree() const {
  int deg = 0;
  for (const auto& g : groups_)
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      deg = std::max(deg, int(e[0]) + int(e[1]) + int(e[2]) + int(e[3]));
    }
  return deg;
}

int GaussianPolynomial::degree_in(Var v) const {
  int deg = 0;
  for (const auto& g : groups_)
    for (const auto& m : g.monos) deg = std::max(deg, int(unpack_exp(m.exps)[var_index(v)]));
  return deg;
}

bool GaussianPolynomial::is_polynomial() const {
  for (const auto& g : groups_)
    if (!g.env.is_zero()) return false;
  return true;
}

bool GaussianPolynomial::is_integrable() const {
  for (const auto& g : groups_)
    if (!g.env.real_part_psd(num_vars())) return false;
  return true;
}

double GaussianPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& g : groups_)
    for (const auto& t : g.monos) m = std::max(m, std::abs(t.coeff));
  return m;
}

double GaussianPolynomial::imag_residual() const {
  double mx = max_abs_coeff();
  if (mx == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& g : groups_)
    for (const auto& t : g.monos) mi = std::max(mi, std::abs(t.coeff.imag()));
  return mi / mx;
}

GaussianPolynomial GaussianPolynomial::real_part() const {
  GaussianPolynomial out(dim_);
  for (const auto& g : groups_)
    for (const auto& m : g.monos) out.add_raw(g.env, m.exps, Complex{m.coeff.real(), 0.0});
  out.canonicalize();
  return out;
}

void GaussianPolynomial::canonicalize(double rel_tol) {
  using Key = std::array<std::int64_t, 2 * (kMaxVars * kMaxVars + kMaxVars + 1)>;
  std::map<Key, TermGroup> merged;
  double maxabs = 0.0;
  for (const auto& g : groups_)
    for (const auto& m : g.monos) maxabs = std::max(maxabs, std::abs(m.coeff));
  const double drop = maxabs * rel_tol;
  for (auto& g : groups_) {
    Key key = envelope_key(g.env);
    auto it = merged.find(key);
    if (it == merged.end()) it = merged.emplace(key, TermGroup{g.env, {}}).first;
    auto& monos = it->second.monos;
    monos.insert(monos.end(), g.monos.begin(), g.monos.end());
  }
  groups_.clear();
  for (auto& [key, g] : merged) {
    std::sort(g.monos.begin(), g.monos.end(),
              [](const Monomial& a, const Monomial& b) { return a.exps < b.exps; });
    std::vector<Monomial> out;
    out.reserve(g.monos.size());
    for (const auto& m : g.monos) {
      if (!out.empty() && out.back().exps == m.exps)
        out.back().coeff += m.coeff;
      else
        out.push_back(m);
    }
    std::vector<Monomial> kept;
    kept.reserve(out.size());
    for (const auto& m : out)
      if (std::abs(m.coeff) > drop) kept.push_back(m);
    if (!kept.empty()) groups_.push_back({g.env, std::move(kept)});
  }
}

bool GaussianPolynomial::canonically_equal(const GaussianPolynomial& a,
                                           const GaussianPolynomial& b, double rel_tol) {
  GaussianPolynomial fa = a, fb = b;
  fa.canonicalize();
  fb.canonicalize();
  double scale = std::max(fa.max_abs_coeff(), fb.max_abs_coeff());
  if (scale == 0.0) return true;
  GaussianPolynomial diff = fa - fb;
  return diff.max_abs_coeff() <= rel_tol * scale;
}

nlohmann::json GaussianPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  const int nv = num_vars();
  for (const auto& g : groups_) {
    for (const auto& m : g.monos) {
      nlohmann::json quad = nlohmann::json::array();
      for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
          quad.push_back({g.env.q(i, j).real(), g.env.q(i, j).imag()});
      nlohmann::json lin = nlohmann::json::array();
      for (int i = 0; i < nv; ++i) lin.push_back({g.env.lin[i].real(), g.env.lin[i].imag()});
      auto e = unpack_exp(m.exps);
      nlohmann::json exps = nlohmann::json::array();
      for (int i = 0; i < nv; ++i) exps.push_back(int(e[i]));
      terms.push_back({m.coeff.real(), m.coeff.imag(), exps, quad, lin,
                       {g.env.cnst.real(), g.env.cnst.imag()}});
    }
  }
  return nlohmann::json{{"dimension", dim_}, {"terms", terms}};
}

GaussianPolynomial GaussianPolynomial::from_json(const nlohmann::json& j) {
  GaussianPolynomial f(j.at("dimension").get<int>());
  const int nv = f.num_vars();
  for (const auto& t : j.at("terms")) {
    Complex coeff{t.at(0).get<double>(), t.at(1).get<double>()};
    std::array<std::uint8_t, kMaxVars> e{};
    for (int i = 0; i < nv; ++i) e[i] = static_cast<std::uint8_t>(t.at(2).at(i).get<int>());
    Envelope env;
    for (int i = 0; i < nv; ++i)
      for (int jx = 0; jx < nv; ++jx) {
        const auto& z = t.at(3).at(i * nv + jx);
        env.quad[i * kMaxVars + jx] = Complex{z.at(0).get<double>(), z.at(1).get<double>()};
      }
    for (int i = 0; i < nv; ++i) {
      const auto& z = t.at(4).at(i);
      env.lin[i] = Complex{z.at(0).get<double>(), z.at(1).get<double>()};
    }
    env.cnst = Complex{t.at(5).at(0).get<double>(), t.at(5).at(1).get<double>()};
    f.add_raw(env, pack_exp(e), coeff);
  }
  f.canonicalize();
  return f;
}

std::string GaussianPolynomial::brief() const {
  std::ostringstream os;
  os << "GaussianPolynomial(dim=" << dim_ << ", groups=" << groups_.size()
     << ", terms=" << term_count() << ", deg=" << total_degree() << ")";
  return os.str();
}

}  // namespace phasespace
