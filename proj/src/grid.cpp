#include "phasespace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <atomic>
#include <limits>
#include <thread>

#include <Eigen/Dense>

namespace phasespace {

namespace {

int env_thread_count() {
  const char* s = std::getenv("PHASESPACE_THREADS");
  if (!s) return 1;
  int n = std::atoi(s);
  return n > 0 ? n : 1;
}

// Per-group separable tables for one grid.
struct GroupTables {
  // pw[v][i * (deg+1) + k] = x_{v,i}^k
  std::vector<std::vector<double>> pw;
  std::vector<int> maxdeg;
  // gauss[v][i] = exp(-(alpha_v x^2 + beta_v x)) for this group
  std::vector<std::vector<Complex>> gauss;
  Complex cfactor;  // exp(-cnst)
  // dense coefficient tensor over exponents, row-major (e0 slowest)
  std::vector<Complex> ct;
  std::vector<int> dims;  // maxdeg+1 per var
};

GroupTables build_tables(const TermGroup& g, const GridSpec& grid, int nvars) {
  GroupTables t;
  if (!g.env.is_diagonal(nvars))
    throw std::invalid_argument("grid evaluation requires diagonal envelopes");
  t.maxdeg.assign(nvars, 0);
  for (const auto& m : g.monos) {
    auto e = unpack_exp(m.exps);
    for (int v = 0; v < nvars; ++v) t.maxdeg[v] = std::max(t.maxdeg[v], int(e[v]));
  }
  t.dims.resize(nvars);
  std::size_t csize = 1;
  for (int v = 0; v < nvars; ++v) {
    t.dims[v] = t.maxdeg[v] + 1;
    csize *= t.dims[v];
  }
  t.ct.assign(csize, Complex{});
  for (const auto& m : g.monos) {
    auto e = unpack_exp(m.exps);
    std::size_t idx = 0;
    for (int v = 0; v < nvars; ++v) idx = idx * t.dims[v] + e[v];
    t.ct[idx] += m.coeff;
  }
  t.pw.resize(nvars);
  t.gauss.resize(nvars);
  for (int v = 0; v < nvars; ++v) {
    const auto& xs = grid.axes[v];
    t.pw[v].resize(xs.size() * t.dims[v]);
    t.gauss[v].resize(xs.size());
    const Complex alpha = g.env.q(v, v);
    const Complex beta = g.env.lin[v];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double acc = 1.0;
      for (int k = 0; k < t.dims[v]; ++k) {
        t.pw[v][i * t.dims[v] + k] = acc;
        acc *= xs[i];
      }
      t.gauss[v][i] = std::exp(-(alpha * xs[i] * xs[i] + beta * xs[i]));
    }
  }
  t.cfactor = std::exp(-g.env.cnst);
  return t;
}

// Contract one group into the slab buffer for outer index i0 (4-variable case).
void add_group_slab4(const GroupTables& t, const GridSpec& grid, std::size_t i0,
                     std::vector<Complex>& slab, std::vector<Complex>& work1,
                     std::vector<Complex>& work2) {
  const int d0 = t.dims[0], d1 = t.dims[1], d2 = t.dims[2], d3 = t.dims[3];
  const std::size_t n1 = grid.axes[1].size(), n2 = grid.axes[2].size(), n3 = grid.axes[3].size();

  // M1[e1,e2,e3] = g0(i0) * sum_e0 C[e0,e1,e2,e3] x0^e0
  work1.assign(std::size_t(d1) * d2 * d3, Complex{});
  {
    const double* p0 = &t.pw[0][i0 * d0];
    const Complex g0 = t.gauss[0][i0] * t.cfactor;
    for (int e0 = 0; e0 < d0; ++e0) {
      const Complex w = g0 * p0[e0];
      if (w == Complex{}) continue;
      const Complex* src = &t.ct[std::size_t(e0) * d1 * d2 * d3];
      for (std::size_t r = 0; r < std::size_t(d1) * d2 * d3; ++r) work1[r] += w * src[r];
    }
  }
  // M2[i1][e2,e3] = g1(i1) * sum_e1 M1[e1,e2,e3] x1^e1
  work2.assign(n1 * d2 * d3, Complex{});
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    const double* p1 = &t.pw[1][i1 * d1];
    const Complex g1 = t.gauss[1][i1];
    Complex* dst = &work2[i1 * d2 * d3];
    for (int e1 = 0; e1 < d1; ++e1) {
      const Complex w = g1 * p1[e1];
      const Complex* src = &work1[std::size_t(e1) * d2 * d3];
      for (std::size_t r = 0; r < std::size_t(d2) * d3; ++r) dst[r] += w * src[r];
    }
  }
  // M3[i1,i2][e3] then slab[i1,i2,i3]
  std::vector<Complex> m3(static_cast<std::size_t>(d3), Complex{});
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    const Complex* src2 = &work2[i1 * d2 * d3];
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      const double* p2 = &t.pw[2][i2 * d2];
      const Complex g2 = t.gauss[2][i2];
      std::fill(m3.begin(), m3.end(), Complex{});
      for (int e2 = 0; e2 < d2; ++e2) {
        const Complex w = g2 * p2[e2];
        const Complex* src = src2 + std::size_t(e2) * d3;
        for (int e3 = 0; e3 < d3; ++e3) m3[e3] += w * src[e3];
      }
      Complex* out = &slab[(i1 * n2 + i2) * n3];
      for (std::size_t i3 = 0; i3 < n3; ++i3) {
        const double* p3 = &t.pw[3][i3 * d3];
        Complex acc{};
        for (int e3 = 0; e3 < d3; ++e3) acc += m3[e3] * p3[e3];
        out[i3] += acc * t.gauss[3][i3];
      }
    }
  }
}

void add_group_slab2(const GroupTables& t, const GridSpec& grid, std::size_t i0,
                     std::vector<Complex>& slab) {
  const int d0 = t.dims[0], d1 = t.dims[1];
  const std::size_t n1 = grid.axes[1].size();
  const double* p0 = &t.pw[0][i0 * d0];
  const Complex g0 = t.gauss[0][i0] * t.cfactor;
  std::vector<Complex> m1(std::size_t(d1), Complex{});
  for (int e0 = 0; e0 < d0; ++e0) {
    const Complex w = g0 * p0[e0];
    if (w == Complex{}) continue;
    const Complex* src = &t.ct[std::size_t(e0) * d1];
    for (int e1 = 0; e1 < d1; ++e1) m1[e1] += w * src[e1];
  }
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    const double* p1 = &t.pw[1][i1 * d1];
    Complex acc{};
    for (int e1 = 0; e1 < d1; ++e1) acc += m1[e1] * p1[e1];
    slab[i1] += acc * t.gauss[1][i1];
  }
}

}  // namespace

GridSpec GridSpec::uniform(const std::vector<std::pair<double, double>>& box,
                           const std::vector<int>& points) {
  if (box.size() != points.size()) throw std::invalid_argument("GridSpec: box/points mismatch");
  GridSpec g;
  for (std::size_t v = 0; v < box.size(); ++v) {
    if (points[v] < 2) throw std::invalid_argument("GridSpec: need at least 2 points per axis");
    std::vector<double> xs(points[v]);
    const double lo = box[v].first, hi = box[v].second;
    for (int i = 0; i < points[v]; ++i)
      xs[i] = lo + (hi - lo) * double(i) / double(points[v] - 1);
    g.axes.push_back(std::move(xs));
  }
  return g;
}

std::size_t GridSpec::total_points() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

void stream_grid(const GaussianPolynomial& f, const GridSpec& grid, const SlabVisitor& visit) {
  const int nvars = f.num_vars();
  if (int(grid.axes.size()) != nvars)
    throw std::invalid_argument("stream_grid: grid has wrong number of axes");
  std::vector<GroupTables> tables;
  tables.reserve(f.groups().size());
  for (const auto& g : f.groups()) tables.push_back(build_tables(g, grid, nvars));

  const std::size_t n0 = grid.axes[0].size();
  std::size_t slab_size = 1;
  for (int v = 1; v < nvars; ++v) slab_size *= grid.axes[v].size();

  const int nthreads = std::min<std::size_t>(env_thread_count(), n0);
  if (nthreads <= 1) {
    std::vector<Complex> slab(slab_size), w1, w2;
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
      std::fill(slab.begin(), slab.end(), Complex{});
      for (const auto& t : tables) {
        if (nvars == 4)
          add_group_slab4(t, grid, i0, slab, w1, w2);
        else
          add_group_slab2(t, grid, i0, slab);
      }
      visit(i0, slab.data(), slab_size);
    }
    return;
  }

  // Parallel slabs with in-order delivery, processed in bounded windows so
  // the full grid is never materialized.
  const std::size_t window = std::size_t(4) * nthreads;
  std::vector<std::vector<Complex>> ready(window);
  for (std::size_t base = 0; base < n0; base += window) {
    const std::size_t count = std::min(window, n0 - base);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      std::vector<Complex> w1, w2;
      while (true) {
        std::size_t k = next.fetch_add(1);
        if (k >= count) break;
        std::vector<Complex> slab(slab_size, Complex{});
        for (const auto& t : tables) {
          if (nvars == 4)
            add_group_slab4(t, grid, base + k, slab, w1, w2);
          else
            add_group_slab2(t, grid, base + k, slab);
        }
        ready[k] = std::move(slab);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t k = 0; k < count; ++k) visit(base + k, ready[k].data(), slab_size);
  }
}

std::vector<Complex> evaluate_grid_dense(const GaussianPolynomial& f, const GridSpec& grid) {
  std::vector<Complex> out(grid.total_points());
  std::size_t slab_size = out.size() / grid.axes[0].size();
  stream_grid(f, grid, [&](std::size_t i0, const Complex* values, std::size_t count) {
    std::copy(values, values + count, out.begin() + i0 * slab_size);
  });
  return out;
}

namespace {

std::array<double, kMaxVars> grid_point(const GridSpec& grid, std::size_t flat) {
  const int nv = int(grid.axes.size());
  std::array<double, kMaxVars> pt{};
  for (int v = nv - 1; v >= 0; --v) {
    std::size_t n = grid.axes[v].size();
    pt[v] = grid.axes[v][flat % n];
    flat /= n;
  }
  return pt;
}

// One Newton step on Re(f) from pt; returns the refined point.
std::array<double, kMaxVars> newton_refine(const GaussianPolynomial& f,
                                           const std::array<double, kMaxVars>& pt) {
  const int nv = f.num_vars();
  Eigen::VectorXd gradv(nv);
  Eigen::MatrixXd hess(nv, nv);
  std::vector<GaussianPolynomial> grad;
  grad.reserve(nv);
  for (int i = 0; i < nv; ++i) grad.push_back(f.differentiate(static_cast<Var>(i)));
  for (int i = 0; i < nv; ++i) {
    gradv(i) = grad[i].evaluate(pt).real();
    for (int j = i; j < nv; ++j) {
      double h = grad[i].differentiate(static_cast<Var>(j)).evaluate(pt).real();
      hess(i, j) = h;
      hess(j, i) = h;
    }
  }
  Eigen::VectorXd step = hess.colPivHouseholderQr().solve(-gradv);
  auto out = pt;
  for (int i = 0; i < nv; ++i) out[i] = pt[i] + step(i);
  return out;
}

}  // namespace

ExtremaResult extrema_scan(const GaussianPolynomial& f, const GridSpec& grid) {
  const int nv = f.num_vars();
  ExtremaResult res{-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    {},
                    {}};
  std::size_t slab_size = 1;
  for (std::size_t v = 1; v < grid.axes.size(); ++v) slab_size *= grid.axes[v].size();
  std::size_t best_max = 0, best_min = 0;
  stream_grid(f, grid, [&](std::size_t i0, const Complex* values, std::size_t count) {
    for (std::size_t r = 0; r < count; ++r) {
      double x = values[r].real();
      std::size_t flat = i0 * slab_size + r;
      if (x > res.max_value) {
        res.max_value = x;
        best_max = flat;
      }
      if (x < res.min_value) {
        res.min_value = x;
        best_min = flat;
      }
    }
  });
  res.argmax = grid_point(grid, best_max);
  res.argmin = grid_point(grid, best_min);

  auto try_refine = [&](std::array<double, kMaxVars>& arg, double& val, bool want_max) {
    auto cand = newton_refine(f, arg);
    for (int v = 0; v < nv; ++v) {
      if (cand[v] < grid.axes[v].front() || cand[v] > grid.axes[v].back()) return;
    }
    double fv = f.evaluate(cand).real();
    if ((want_max && fv > val) || (!want_max && fv < val)) {
      val = fv;
      arg = cand;
    }
  };
  try_refine(res.argmax, res.max_value, true);
  try_refine(res.argmin, res.min_value, false);
  return res;
}

std::size_t WignerGrid::total_points() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

double WignerGrid::value_at(const std::vector<std::size_t>& idx) const {
  std::size_t flat = 0;
  for (std::size_t v = 0; v < axes.size(); ++v) flat = flat * axes[v].size() + idx[v];
  return values[flat];
}

WignerGrid sample_to_wigner_grid(const GaussianPolynomial& f, const GridSpec& grid,
                                 const std::vector<std::string>& axis_names,
                                 nlohmann::json meta) {
  WignerGrid wg;
  wg.axis_names = axis_names;
  wg.axes = grid.axes;
  auto vals = evaluate_grid_dense(f, grid);
  double max_abs = 0.0, max_imag = 0.0;
  for (const auto& z : vals) {
    max_abs = std::max(max_abs, std::abs(z));
    max_imag = std::max(max_imag, std::abs(z.imag()));
  }
  if (max_abs > 0.0 && max_imag > 1e-8 * max_abs)
    throw std::runtime_error("sample_to_wigner_grid: non-real values (imag residual " +
                             std::to_string(max_imag / max_abs) + ")");
  wg.values.resize(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) wg.values[i] = vals[i].real();
  meta["imag_residual"] = max_abs > 0.0 ? max_imag / max_abs : 0.0;
  wg.meta = std::move(meta);
  return wg;
}

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_wigner_grid_csv(const WignerGrid& grid, const std::string& csv_path,
                           const std::string& sidecar_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  for (std::size_t v = 0; v < grid.axis_names.size(); ++v) csv << grid.axis_names[v] << ",";
  csv << "value\r\n";
  const std::size_t nv = grid.axes.size();
  std::vector<std::size_t> idx(nv, 0);
  for (std::size_t flat = 0; flat < grid.values.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t v = nv; v-- > 0;) {
      idx[v] = rem % grid.axes[v].size();
      rem /= grid.axes[v].size();
    }
    for (std::size_t v = 0; v < nv; ++v) csv << fmt17(grid.axes[v][idx[v]]) << ",";
    csv << fmt17(grid.values[flat]) << "\r\n";
  }
  csv.close();

  nlohmann::json sidecar;
  sidecar["axis_names"] = grid.axis_names;
  sidecar["axes"] = grid.axes;
  sidecar["meta"] = grid.meta;
  std::ofstream sc(sidecar_path, std::ios::binary);
  if (!sc) throw std::runtime_error("cannot open " + sidecar_path);
  sc << sidecar.dump(2) << "\n";
}

WignerGrid read_wigner_grid_csv(const std::string& csv_path, const std::string& sidecar_path) {
  std::ifstream sc(sidecar_path);
  if (!sc) throw std::runtime_error("cannot open " + sidecar_path);
  nlohmann::json sidecar = nlohmann::json::parse(sc);
  WignerGrid wg;
  wg.axis_names = sidecar.at("axis_names").get<std::vector<std::string>>();
  wg.axes = sidecar.at("axes").get<std::vector<std::vector<double>>>();
  wg.meta = sidecar.at("meta");

  std::ifstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  std::string line;
  std::getline(csv, line);  // header
  wg.values.reserve(wg.total_points());
  while (std::getline(csv, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto pos = line.rfind(',');
    wg.values.push_back(std::strtod(line.c_str() + pos + 1, nullptr));
  }
  if (wg.values.size() != wg.total_points())
    throw std::runtime_error("CSV row count does not match axes");
  return wg;
}

}  // namespace phasespace
