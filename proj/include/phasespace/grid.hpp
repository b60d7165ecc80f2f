// grid.hpp -- tensor-grid sampling of Gaussian-polynomial functions.
//
// Evaluation exploits separability: every supported envelope is diagonal, so
// a function factors into per-variable power tables contracted axis by axis.
// Full 4-D value sets are streamed in slabs over the outermost axis instead
// of being materialized.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasespace/poly.hpp"

namespace phasespace {

// Per-variable sample vectors (uniform or not).
struct GridSpec {
  std::vector<std::vector<double>> axes;  // one vector per active variable

  static GridSpec uniform(const std::vector<std::pair<double, double>>& box,
                          const std::vector<int>& points);
  std::size_t total_points() const;
};

// Compensated (Kahan) accumulator; reductions over large grids use this in a
// fixed index order so results do not depend on partitioning.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  void merge(const KahanSum& other) {
    add(other.sum);
    add(-other.carry);
  }
};

// Visitor receives one outermost-index slab of complex values at a time:
// slab[i1*n2*n3 + i2*n3 + i3] for 4 variables, slab[i1] for 2 variables.
// Deterministic: slabs are delivered in increasing outer index.
using SlabVisitor = std::function<void(std::size_t outer_index, const Complex* values,
                                       std::size_t count)>;

// Streams f over the tensor grid.  Requires every envelope to be diagonal.
// Thread count comes from the PHASESPACE_THREADS environment variable
// (default 1); results are identical for any thread count.
void stream_grid(const GaussianPolynomial& f, const GridSpec& grid, const SlabVisitor& visit);

// Dense evaluation for small grids (export paths).
std::vector<Complex> evaluate_grid_dense(const GaussianPolynomial& f, const GridSpec& grid);

struct ExtremaResult {
  double max_value;
  double min_value;
  std::array<double, kMaxVars> argmax;
  std::array<double, kMaxVars> argmin;
};

// Grid scan of Re(f) followed by one Newton refinement step per extremum on
// the analytic form (kept only when it improves the value).
ExtremaResult extrema_scan(const GaussianPolynomial& f, const GridSpec& grid);

// Sampled distribution on a rectangular phase-space grid plus metadata.
struct WignerGrid {
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axes;
  std::vector<double> values;  // row-major over axes
  nlohmann::json meta;

  std::size_t total_points() const;
  double value_at(const std::vector<std::size_t>& idx) const;
};

// Sample f on the grid; values are Re(f) after an imaginary-residual check
// (threshold 1e-8 relative; the residual is recorded in meta).
WignerGrid sample_to_wigner_grid(const GaussianPolynomial& f, const GridSpec& grid,
                                 const std::vector<std::string>& axis_names,
                                 nlohmann::json meta);

// RFC-4180 CSV with a header row (axis columns then "value"), 17 significant
// digits, plus a JSON sidecar holding axes and the meta block.  Round-trips
// bit-exactly.
void write_wigner_grid_csv(const WignerGrid& grid, const std::string& csv_path,
                           const std::string& sidecar_path);
WignerGrid read_wigner_grid_csv(const std::string& csv_path, const std::string& sidecar_path);

}  // namespace phasespace
