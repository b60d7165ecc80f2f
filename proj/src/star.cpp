#include "phasespace/star.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace phasespace {

namespace {

const Complex kI{0.0, 1.0};

// Derivative cache keyed by packed multi-order (8 bits per variable).
class DerivativeTable {
 public:
  explicit DerivativeTable(const GaussianPolynomial& f) { cache_[0] = f; }

  const GaussianPolynomial& get(const std::array<int, kMaxVars>& order) {
    PackedExp key = pack(order);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    // reduce along the first nonzero component
    std::array<int, kMaxVars> lower = order;
    int v = 0;
    while (lower[v] == 0) ++v;
    lower[v] -= 1;
    const GaussianPolynomial& base = get(lower);
    auto [pos, inserted] = cache_.emplace(key, base.differentiate(static_cast<Var>(v)));
    return pos->second;
  }

 private:
  static PackedExp pack(const std::array<int, kMaxVars>& o) {
    return PackedExp(o[0]) | PackedExp(o[1]) << 8 | PackedExp(o[2]) << 16 | PackedExp(o[3]) << 24;
  }
  std::map<PackedExp, GaussianPolynomial> cache_;
};

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * double(n - j + 1) / double(j);
  return r;
}

}  // namespace

StarOperator::StarOperator(GaussianPolynomial s, double hb) : symbol(std::move(s)), hbar(hb) {
  if (hbar <= 0.0) throw std::invalid_argument("StarOperator: hbar must be positive");
}

GaussianPolynomial apply_q_star(const GaussianPolynomial& f, int axis, double hbar, Side side) {
  const Var q = position_of_axis(axis);
  const Var p = momentum_of_axis(axis);
  const Complex c = (side == Side::Left ? kI : -kI) * (hbar / 2.0);
  GaussianPolynomial out = f.multiply_by_var(q);
  out += c * f.differentiate(p);
  return out;
}

GaussianPolynomial apply_p_star(const GaussianPolynomial& f, int axis, double hbar, Side side) {
  const Var q = position_of_axis(axis);
  const Var p = momentum_of_axis(axis);
  const Complex c = (side == Side::Left ? -kI : kI) * (hbar / 2.0);
  GaussianPolynomial out = f.multiply_by_var(p);
  out += c * f.differentiate(q);
  return out;
}

namespace {

// Apply the Weyl-ordered operator of the single-axis monomial q^a p^b.
// McCoy's identity keeps the term count linear in min(a,b):
//   W(q^a p^b) = 2^-a sum_k C(a,k) q^k p^b q^(a-k)
//              = 2^-b sum_j C(b,j) p^j q^a p^(b-j).
// Operator products act nearest-first on f; for right application the
// composition order mirrors (f * s1 * s2 applies s1 first).
GaussianPolynomial apply_axis_weyl(const GaussianPolynomial& f, int axis, int a, int b,
                                   double hbar, Side side) {
  if (a == 0 && b == 0) return f;
  auto apply_qn = [&](const GaussianPolynomial& g, int n) {
    GaussianPolynomial r = g;
    for (int i = 0; i < n; ++i) r = apply_q_star(r, axis, hbar, side);
    return r;
  };
  auto apply_pn = [&](const GaussianPolynomial& g, int n) {
    GaussianPolynomial r = g;
    for (int i = 0; i < n; ++i) r = apply_p_star(r, axis, hbar, side);
    return r;
  };
  GaussianPolynomial acc = GaussianPolynomial::zero(f.dimension());
  if (a <= b) {
    const double scale = std::pow(0.5, a);
    for (int k = 0; k <= a; ++k) {
      // operator chain q^k p^b q^(a-k); innermost factor acts first on the left
      GaussianPolynomial term =
          (side == Side::Left) ? apply_qn(apply_pn(apply_qn(f, a - k), b), k)
                               : apply_qn(apply_pn(apply_qn(f, k), b), a - k);
      acc += (scale * binomial(a, k)) * term;
    }
  } else {
    const double scale = std::pow(0.5, b);
    for (int j = 0; j <= b; ++j) {
      GaussianPolynomial term =
          (side == Side::Left) ? apply_pn(apply_qn(apply_pn(f, b - j), a), j)
                               : apply_pn(apply_qn(apply_pn(f, j), a), b - j);
      acc += (scale * binomial(b, j)) * term;
    }
  }
  return acc;
}

}  // namespace

GaussianPolynomial bopp_apply(const StarOperator& op, const GaussianPolynomial& f, Side side) {
  if (!op.symbol.is_polynomial())
    throw std::invalid_argument(
        "bopp_apply: symbol must be a pure polynomial (the exact substitution "
        "series terminates only for polynomial symbols)");
  if (op.symbol.dimension() != f.dimension())
    throw std::invalid_argument("bopp_apply: dimension mismatch");
  GaussianPolynomial out = GaussianPolynomial::zero(f.dimension());
  for (const auto& g : op.symbol.groups()) {
    for (const auto& m : g.monos) {
      auto e = unpack_exp(m.exps);
      GaussianPolynomial term = f;
      for (int axis = 0; axis < f.dimension(); ++axis)
        term = apply_axis_weyl(term, axis, e[2 * axis], e[2 * axis + 1], op.hbar, side);
      out += m.coeff * term;
    }
  }
  return out;
}

GaussianPolynomial star_truncated(const GaussianPolynomial& f, const GaussianPolynomial& g,
                                  int order, double hbar) {
  if (order < 0) throw std::invalid_argument("star_truncated: order must be >= 0");
  if (f.dimension() != g.dimension())
    throw std::invalid_argument("star_truncated: dimension mismatch");
  const int naxes = f.dimension();

  DerivativeTable df(f), dg(g);
  GaussianPolynomial out = f.multiply(g);

  // slots: per axis, (+): dq on f with dp on g;  (-): dp on f with dq on g
  const int nslots = 2 * naxes;
  std::vector<int> comp(nslots, 0);
  for (int j = 1; j <= order; ++j) {
    Complex pref = std::pow(kI * hbar / 2.0, j);
    // iterate over all compositions of j into nslots parts
    std::fill(comp.begin(), comp.end(), 0);
    comp[0] = j;
    while (true) {
      double denom = 1.0;
      int minus = 0;
      for (int s = 0; s < nslots; ++s) denom *= factorial(comp[s]);
      for (int axis = 0; axis < naxes; ++axis) minus += comp[2 * axis + 1];
      std::array<int, kMaxVars> of{}, og{};
      for (int axis = 0; axis < naxes; ++axis) {
        int plus = comp[2 * axis], neg = comp[2 * axis + 1];
        of[2 * axis] += plus;      // dq^plus on f
        og[2 * axis + 1] += plus;  // dp^plus on g
        of[2 * axis + 1] += neg;   // dp^neg on f
        og[2 * axis] += neg;       // dq^neg on g
      }
      Complex c = pref * ((minus % 2) ? -1.0 : 1.0) / denom;
      out += c * df.get(of).multiply(dg.get(og));

      // next composition (colex order)
      int k = 0;
      while (k < nslots && comp[k] == 0) ++k;
      if (k == nslots - 1) break;
      int val = comp[k];
      comp[k] = 0;
      comp[k + 1] += 1;
      comp[0] = val - 1;
    }
  }
  return out;
}

GaussianPolynomial moyal_bracket(const GaussianPolynomial& f, const GaussianPolynomial& g,
                                 int order, double hbar) {
  if (order < 1) throw std::invalid_argument("moyal_bracket: order must be >= 1");
  return star_truncated(f, g, order, hbar) - star_truncated(g, f, order, hbar);
}

}  // namespace phasespace
