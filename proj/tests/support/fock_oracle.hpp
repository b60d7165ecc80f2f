// fock_oracle.hpp -- brute-force dense-matrix reference for the perturbation
// module.  Test-only: builds the full two-mode interaction as dense matrix
// products on the tensor basis |i>|j> and reads coefficients straight out of
// the matrix.  Shares no code path with the library's banded ladder algebra
// or its phase-space integrals.

#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "phasespace/oscillator.hpp"

namespace phasespace::oracle {

class DenseTwoMode {
 public:
  explicit DenseTwoMode(int per_axis) : s_(per_axis), dim_(per_axis * per_axis) {}

  int index(FockLabel n) const { return n.nx * s_ + n.ny; }
  int per_axis() const { return s_; }
  int dim() const { return dim_; }

  std::vector<double> identity() const {
    std::vector<double> m(std::size_t(dim_) * dim_, 0.0);
    for (int i = 0; i < dim_; ++i) m[std::size_t(i) * dim_ + i] = 1.0;
    return m;
  }

  // position operator on one axis, lifted to the tensor space
  std::vector<double> q_op(int axis, double omega) const {
    std::vector<double> m(std::size_t(dim_) * dim_, 0.0);
    const double scale = 1.0 / std::sqrt(2.0 * omega);
    for (int i = 0; i < s_; ++i)
      for (int j = 0; j < s_; ++j) {
        double x = 0.0;
        if (i + 1 == j) x = std::sqrt(double(j));
        if (j + 1 == i) x = std::sqrt(double(i));
        if (x == 0.0) continue;
        for (int k = 0; k < s_; ++k) {
          if (axis == 0)
            m[std::size_t(i * s_ + k) * dim_ + (j * s_ + k)] = scale * x;
          else
            m[std::size_t(k * s_ + i) * dim_ + (k * s_ + j)] = scale * x;
        }
      }
    return m;
  }

  std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) const {
    std::vector<double> c(std::size_t(dim_) * dim_, 0.0);
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        double aik = a[std::size_t(i) * dim_ + k];
        if (aik == 0.0) continue;
        const double* brow = &b[std::size_t(k) * dim_];
        double* crow = &c[std::size_t(i) * dim_];
        for (int j = 0; j < dim_; ++j) crow[j] += aik * brow[j];
      }
    return c;
  }

  void axpy(std::vector<double>& y, double a, const std::vector<double>& x) const {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  }

  // V = lambda [ qx^2 qy - qy^3/3 + 5/2 qx^2 qy^2 (qx^2+qy^2) - eps (qx^2+qy^2) ]
  std::vector<double> potential(double epsilon, double lambda, double omega = 1.0) const {
    auto qx = q_op(0, omega);
    auto qy = q_op(1, omega);
    auto qx2 = mul(qx, qx);
    auto qy2 = mul(qy, qy);
    auto v = mul(qx2, qy);
    axpy(v, -1.0 / 3.0, mul(qy2, qy));
    auto qx2qy2 = mul(qx2, qy2);
    axpy(v, 2.5, mul(qx2qy2, qx2));
    axpy(v, 2.5, mul(qx2qy2, qy2));
    axpy(v, -epsilon, qx2);
    axpy(v, -epsilon, qy2);
    for (auto& x : v) x *= lambda;
    return v;
  }

 private:
  int s_;
  int dim_;
};

struct OracleExpansion {
  double e1 = 0.0;
  double e2 = 0.0;
  std::map<FockLabel, double> a1;
  std::map<FockLabel, double> a2;
};

// Full sum-over-states expansion from the dense matrix; degenerate couplings
// (equal shells) are skipped, matching the library's recorded-skip policy.
inline OracleExpansion expand(int per_axis, FockLabel base, double epsilon, double lambda,
                              double omega = 1.0) {
  DenseTwoMode d(per_axis);
  auto v = d.potential(epsilon, lambda, omega);
  auto el = [&](FockLabel m, FockLabel n) {
    return v[std::size_t(d.index(m)) * d.dim() + d.index(n)];
  };
  const int safe_shell = per_axis - 8;  // headroom so truncation cannot leak
  if (base.shell() + 12 > safe_shell)
    throw std::invalid_argument("oracle: per_axis too small for this base");

  OracleExpansion out;
  out.e1 = el(base, base);
  std::vector<FockLabel> labels = labels_up_to_shell(safe_shell);
  for (FockLabel m : labels) {
    if (m == base) continue;
    double vmn = el(m, base);
    if (std::abs(vmn) < 1e-14) continue;
    int dshell = base.shell() - m.shell();
    if (dshell == 0) continue;
    double dE = dshell * omega;
    out.a1[m] = vmn / dE;
    out.e2 += vmn * vmn / dE;
  }
  for (FockLabel m : labels) {
    if (m == base || m.shell() > base.shell() + 12) continue;
    int dm = base.shell() - m.shell();
    if (dm == 0) continue;
    double dEm = dm * omega;
    double sum = 0.0;
    for (FockLabel k : labels) {
      if (k == base || k.shell() > base.shell() + 6) continue;
      int dk = base.shell() - k.shell();
      if (dk == 0) continue;
      sum += el(m, k) * el(k, base) / (dEm * dk * omega);
    }
    double a2 = sum - el(m, base) * out.e1 / (dEm * dEm);
    if (std::abs(a2) > 1e-14) out.a2[m] = a2;
  }
  return out;
}

}  // namespace phasespace::oracle
