// phasespace_cli.cpp -- batch front-end regenerating the study tables and
// grids as CSV/JSON data files with a reproducibility manifest per run.
//
// Exit codes: 0 all self-checks pass, 1 a check failed, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phasespace/hydrogen.hpp"
#include "phasespace/manifest.hpp"
#include "phasespace/perturbation.hpp"
#include "phasespace/quadrature.hpp"
#include "phasespace/star.hpp"
#include "phasespace/wigner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phasespace;

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmtg(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct CheckList {
  json entries = json::array();
  bool all_ok = true;

  void add(const std::string& name, bool ok, const json& detail, bool informational = false) {
    entries.push_back(
        {{"name", name}, {"passed", ok}, {"informational", informational}, {"detail", detail}});
    if (!ok && !informational) all_ok = false;
  }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    out << json{{"all_passed", all_ok}, {"checks", entries}}.dump(2) << "\n";
  }
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

// table index n (even) <-> Fock label (n/2, n/2); the mapping is documented
// in the README as an interpretation choice.
FockLabel label_for_table_index(int n) {
  if (n < 0 || n % 2 != 0)
    throw CLI::ValidationError("--n", "table index must be an even nonnegative integer");
  return {n / 2, n / 2};
}

PerturbedState build_state(const HamiltonianSpec& spec, FockLabel base, int order) {
  if (order == 0) {
    PerturbedState st;
    st.order = 0;
    st.base = base;
    st.spec = spec;
    return st;
  }
  if (order == 1) return first_order_state(spec, base);
  if (order == 2) return second_order_state(spec, base);
  throw CLI::ValidationError("--order", "order must be 0, 1 or 2");
}

json load_reference_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) return json();
  return json::parse(in, nullptr, false);
}

struct CommonOpts {
  double lambda = 1.0;
  std::string epsilons = "0,0.28,0.5,1";
  int order = 1;
  int star_order = 2;
  int grid = 64;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string policy = "paper-faithful";
  std::string reference_tables = "data/reference_tables.json";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--lambda", o.lambda, "interaction strength multiplier");
  cmd->add_option("--order", o.order, "perturbation order (0, 1, 2)");
  cmd->add_option("--star-order", o.star_order, "star-product truncation order (diagnostics)");
  cmd->add_option("--grid", o.grid, "points per axis for grids and quadrature");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--format", o.format, "table format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--policy", o.policy, "degenerate-coupling policy")
      ->check(CLI::IsMember({"paper-faithful", "strict"}));
  cmd->add_option("--reference-tables", o.reference_tables,
                  "path to bundled reference values (diff reports only)");
}

HamiltonianSpec make_spec(const CommonOpts& o, double epsilon) {
  HamiltonianSpec spec;
  spec.lambda = o.lambda;
  spec.epsilon = epsilon;
  spec.star_order = o.star_order;
  spec.policy =
      o.policy == "strict" ? DegeneracyPolicy::Strict : DegeneracyPolicy::SkipAndRecord;
  return spec;
}

void write_rows(const fs::path& base_path, const std::string& format,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows, RunManifest& manifest) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json obj;
      for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = r[c];
      arr.push_back(obj);
    }
    fs::path p = base_path;
    p += ".json";
    std::ofstream out(p, std::ios::binary);
    out << arr.dump(2) << "\n";
    out.close();
    manifest.add_artifact(p.string());
  } else {
    fs::path p = base_path;
    p += ".csv";
    std::ofstream out(p, std::ios::binary);
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << columns[c] << (c + 1 < columns.size() ? "," : "");
    out << "\r\n";
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c)
        out << fmt17(r[c]) << (c + 1 < r.size() ? "," : "");
      out << "\r\n";
    }
    out.close();
    manifest.add_artifact(p.string());
  }
}

// ---------------------------------------------------------------------------

int cmd_wigner_grid(const CommonOpts& o, int n_index, int nx, int ny, double epsilon,
                    const std::string& slice) {
  fs::create_directories(o.out_dir);
  auto t0 = std::chrono::steady_clock::now();
  FockLabel base = (nx >= 0 && ny >= 0) ? FockLabel{nx, ny} : label_for_table_index(n_index);
  HamiltonianSpec spec = make_spec(o, epsilon);
  PerturbedState st = build_state(spec, base, o.order);
  GaussianPolynomial f = wigner_perturbed(st, o.star_order);
  CheckList checks;

  // embedded self-check: trapezoid normalization within 5e-3 of the exact
  // unit norm, always at the default quadrature resolution (--grid only
  // controls the exported slice)
  int hint = max_axis_index(st.coefficients());
  auto box = auto_box(f, hint);
  Complex grid_norm = integrate(f, Quadrature::trapezoid(64, box));
  checks.add("grid_normalization", std::abs(grid_norm.real() - 1.0) < 5e-3,
             {{"integral", grid_norm.real()}});

  // 2-D slice with the remaining variables fixed at zero
  std::vector<Var> free_vars;
  std::vector<Var> fixed_vars;
  if (slice == "qx,px") {
    free_vars = {Var::Qx, Var::Px};
    fixed_vars = {Var::Qy, Var::Py};
  } else if (slice == "qy,py") {
    free_vars = {Var::Qy, Var::Py};
    fixed_vars = {Var::Qx, Var::Px};
  } else {
    throw CLI::ValidationError("--slice", "supported slices: qx,px or qy,py");
  }
  GaussianPolynomial fslice = f.restricted_to_zero(fixed_vars);

  GridSpec slice_grid;
  {
    std::vector<std::pair<double, double>> b2;
    for (Var v : free_vars) b2.push_back(box[var_index(v)]);
    // the restricted function still lives on 4 variables; sample via dense
    // evaluation over the two free axes
    GridSpec g4;
    for (int v = 0; v < 4; ++v) {
      bool is_free = (v == var_index(free_vars[0]) || v == var_index(free_vars[1]));
      if (is_free) {
        std::vector<double> xs(o.grid);
        auto [lo, hi] = box[v];
        for (int i = 0; i < o.grid; ++i) xs[i] = lo + (hi - lo) * double(i) / double(o.grid - 1);
        g4.axes.push_back(std::move(xs));
      } else {
        g4.axes.push_back({0.0});
      }
    }
    slice_grid = g4;
  }
  // convergence of the literal order-K product: states are assembled through
  // the exact ladder product, and the K-truncated route is reported as the
  // approximation it is (sampled relative delta between orders K and K+1)
  double truncation_delta = 0.0;
  {
    GaussianPolynomial psi = GaussianPolynomial::zero(2);
    for (const auto& [m, cc] : st.coefficients()) psi += cc * ho_state(m);
    Complex norm2 = integrate(psi.conjugate().multiply(psi));
    auto fk = star_truncated(psi, psi.conjugate(), o.star_order, 1.0);
    auto fk1 = star_truncated(psi, psi.conjugate(), o.star_order + 1, 1.0);
    double scale = 0.0, dev = 0.0;
    for (double s : {0.0, 0.5, 1.0, 2.0}) {
      std::array<double, kMaxVars> pt{s, -s / 2, s / 3, s};
      Complex a = fk.evaluate(pt) / norm2;
      Complex b = fk1.evaluate(pt) / norm2;
      scale = std::max(scale, std::abs(a));
      dev = std::max(dev, std::abs(a - b));
    }
    truncation_delta = scale > 0 ? dev / scale : 0.0;
  }

  json meta{{"state", {{"nx", base.nx}, {"ny", base.ny}}},
            {"epsilon", epsilon},
            {"lambda", o.lambda},
            {"order", o.order},
            {"star_order", o.star_order},
            {"star_truncation_delta", truncation_delta},
            {"normalization", 1.0},
            {"slice", slice},
            {"fixed_at_zero", {var_name(fixed_vars[0]), var_name(fixed_vars[1])}},
            {"policy", o.policy},
            {"skipped_couplings", st.skipped.size()}};
  WignerGrid wg = sample_to_wigner_grid(fslice, slice_grid, {"q_x", "p_x", "q_y", "p_y"}, meta);

  std::string stem = "wigner_n" + std::to_string(base.nx) + "_" + std::to_string(base.ny) +
                     "_eps" + fmtg(epsilon) + "_order" + std::to_string(o.order);
  fs::path csv = fs::path(o.out_dir) / (stem + ".csv");
  fs::path sidecar = fs::path(o.out_dir) / (stem + ".meta.json");
  write_wigner_grid_csv(wg, csv.string(), sidecar.string());

  RunManifest manifest;
  manifest.command = "wigner-grid";
  manifest.parameters = {{"n", {base.nx, base.ny}},   {"epsilon", epsilon},
                         {"lambda", o.lambda},        {"order", o.order},
                         {"star_order", o.star_order}, {"grid", o.grid},
                         {"slice", slice},            {"policy", o.policy}};
  manifest.add_artifact(csv.string());
  manifest.add_artifact(sidecar.string());
  manifest.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  manifest.write((fs::path(o.out_dir) / (stem + ".manifest.json")).string());
  checks.write(fs::path(o.out_dir) / (stem + ".checks.json"));
  std::cout << (checks.all_ok ? "ok: " : "CHECK FAILURE: ") << csv.string() << "\n";
  return checks.all_ok ? 0 : 1;
}

int cmd_extrema_table(const CommonOpts& o, const std::string& n_list) {
  fs::create_directories(o.out_dir);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> ns = parse_ints(n_list);
  std::vector<double> eps = parse_doubles(o.epsilons);
  CheckList checks;
  std::vector<std::vector<double>> rows;
  std::map<std::pair<int, double>, std::pair<double, double>> computed;
  for (int n : ns) {
    FockLabel base = label_for_table_index(n);
    for (double e : eps) {
      HamiltonianSpec spec = make_spec(o, e);
      PerturbedState st = build_state(spec, base, o.order);
      GaussianPolynomial f = wigner_perturbed(st, o.star_order);
      ExtremaResult ex = wigner_extrema(f, o.grid, max_axis_index(st.coefficients()));
      rows.push_back({double(n), e, ex.max_value, ex.min_value});
      computed[{n, e}] = {ex.max_value, ex.min_value};
    }
  }
  RunManifest manifest;
  manifest.command = "extrema-table";
  manifest.parameters = {{"n", ns},           {"epsilon", eps},       {"lambda", o.lambda},
                         {"order", o.order},  {"grid", o.grid},       {"policy", o.policy},
                         {"star_order", o.star_order}};
  std::string stem = "extrema_order" + std::to_string(o.order);
  write_rows(fs::path(o.out_dir) / stem, o.format, {"n", "epsilon", "maximum", "minimum"}, rows,
             manifest);

  // normalization self-check: states are normalized by construction; verify
  // sign structure bookkeeping per row as informational output
  for (const auto& [key, mm] : computed) {
    checks.add("sign_structure_n" + std::to_string(key.first) + "_eps" + fmtg(key.second),
               key.first < 2 || (mm.first > 0.0 && mm.second < 0.0),
               {{"max", mm.first}, {"min", mm.second}}, /*informational=*/key.first < 2);
  }

  // diff report against the bundled reference values
  json ref = load_reference_tables(o.reference_tables);
  std::vector<std::vector<double>> diff_rows;
  if (ref.is_object()) {
    const char* section =
        o.order == 2 ? "wigner_extrema_second_order" : "wigner_extrema_first_order";
    if (ref.contains(section)) {
      for (const auto& [key, mm] : computed) {
        std::string nk = std::to_string(key.first);
        std::string ek = fmtg(key.second);
        if (!ref[section].contains(nk) || !ref[section][nk].contains(ek)) continue;
        double rmax = ref[section][nk][ek][0].get<double>();
        double rmin = ref[section][nk][ek][1].get<double>();
        diff_rows.push_back({double(key.first), key.second, mm.first, rmax,
                             std::abs(mm.first - rmax) / std::max(1e-30, std::abs(rmax)),
                             mm.second, rmin,
                             std::abs(mm.second - rmin) / std::max(1e-30, std::abs(rmin))});
      }
      write_rows(fs::path(o.out_dir) / (stem + "_diff"), o.format,
                 {"n", "epsilon", "max_computed", "max_reference", "max_rel_dev", "min_computed",
                  "min_reference", "min_rel_dev"},
                 diff_rows, manifest);
    }
  }
  // trend report (informational): monotonicity across the epsilon presets
  for (int n : ns) {
    bool max_nondec = true, min_nondec = true;
    for (std::size_t i = 1; i < eps.size(); ++i) {
      auto prev = computed[{n, eps[i - 1]}];
      auto cur = computed[{n, eps[i]}];
      if (cur.first < prev.first) max_nondec = false;
      if (std::abs(cur.second) < std::abs(prev.second)) min_nondec = false;
    }
    checks.add("trend_max_nondecreasing_n" + std::to_string(n), max_nondec, {}, true);
    checks.add("trend_absmin_nondecreasing_n" + std::to_string(n), min_nondec, {}, true);
  }

  manifest.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  manifest.write((fs::path(o.out_dir) / (stem + ".manifest.json")).string());
  checks.write(fs::path(o.out_dir) / (stem + ".checks.json"));
  std::cout << (checks.all_ok ? "ok: " : "CHECK FAILURE: ") << stem << "\n";
  return checks.all_ok ? 0 : 1;
}

int cmd_negativity(const CommonOpts& o, const std::string& system, const std::string& n_list) {
  fs::create_directories(o.out_dir);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> ns = parse_ints(n_list);
  std::vector<double> eps = parse_doubles(o.epsilons);
  CheckList checks;
  RunManifest manifest;
  manifest.command = "negativity";
  std::string stem = "negativity_" + system;
  std::vector<std::vector<double>> rows;
  std::map<std::pair<int, double>, double> etas;

  if (system == "hydrogen1d") {
    for (int n : ns) {
      HydrogenNegativity r = hydrogen_negativity(n, 1, std::max(o.grid * 64, 1025));
      rows.push_back({double(n), 0.0, r.eta, r.convergence_delta});
      etas[{n, 0.0}] = r.eta;
      checks.add("eta_floor_n" + std::to_string(n), r.eta >= -5e-3, {{"eta", r.eta}});
      checks.add("convergence_n" + std::to_string(n), r.convergence_delta < 5e-3,
                 {{"delta", r.convergence_delta}});
    }
    bool nondec = true;
    for (std::size_t i = 1; i < ns.size(); ++i)
      if (etas[{ns[i], 0.0}] < etas[{ns[i - 1], 0.0}] - 1e-12) nondec = false;
    checks.add("trend_eta_nondecreasing_in_n", nondec, {}, true);
  } else if (system == "henon-heiles") {
    for (int n : ns) {
      FockLabel base = label_for_table_index(n);
      // one grid per n across the epsilon sweep, so differences are not
      // contaminated by box resizing
      std::vector<GaussianPolynomial> fs;
      std::vector<std::pair<double, double>> shared_box;
      for (double e : eps) {
        HamiltonianSpec spec = make_spec(o, e);
        PerturbedState st = build_state(spec, base, o.order);
        fs.push_back(wigner_perturbed(st, o.star_order));
        auto b = auto_box(fs.back(), max_axis_index(st.coefficients()));
        if (shared_box.empty()) shared_box = b;
        for (std::size_t v = 0; v < b.size(); ++v) {
          shared_box[v].first = std::min(shared_box[v].first, b[v].first);
          shared_box[v].second = std::max(shared_box[v].second, b[v].second);
        }
      }
      for (std::size_t i = 0; i < eps.size(); ++i) {
        double e = eps[i];
        NegativityResult r = negativity(fs[i], o.grid, 0, &shared_box);
        rows.push_back({double(n), e, r.eta, r.convergence_delta});
        etas[{n, e}] = r.eta;
        checks.add("eta_floor_n" + std::to_string(n) + "_eps" + fmtg(e), r.eta >= -5e-3,
                   {{"eta", r.eta}});
      }
      bool increasing = true;
      for (std::size_t i = 1; i < eps.size(); ++i)
        if (etas[{n, eps[i]}] <= etas[{n, eps[i - 1]}]) increasing = false;
      checks.add("trend_eta_increasing_in_epsilon_n" + std::to_string(n), increasing, {}, true);
    }
  } else {
    throw CLI::ValidationError("--system", "system must be hydrogen1d or henon-heiles");
  }

  manifest.parameters = {{"system", system},  {"n", ns},          {"epsilon", eps},
                         {"lambda", o.lambda}, {"order", o.order}, {"grid", o.grid},
                         {"policy", o.policy}};
  write_rows(fs::path(o.out_dir) / stem, o.format, {"n", "epsilon", "eta", "convergence_delta"},
             rows, manifest);

  // diff report against bundled reference values
  json ref = load_reference_tables(o.reference_tables);
  if (ref.is_object()) {
    std::vector<std::vector<double>> diff_rows;
    if (system == "hydrogen1d" && ref.contains("negativity_hydrogen")) {
      for (const auto& [key, eta] : etas) {
        std::string nk = std::to_string(key.first);
        if (!ref["negativity_hydrogen"].contains(nk)) continue;
        double r = ref["negativity_hydrogen"][nk].get<double>();
        diff_rows.push_back({double(key.first), eta, r, std::abs(eta - r)});
      }
      write_rows(fs::path(o.out_dir) / (stem + "_diff"), o.format,
                 {"n", "eta_computed", "eta_reference", "abs_dev"}, diff_rows, manifest);
    } else if (system == "henon-heiles" && ref.contains("negativity_coupled_oscillator")) {
      for (const auto& [key, eta] : etas) {
        std::string ek = fmtg(key.second);
        std::string nk = std::to_string(key.first);
        const auto& sec = ref["negativity_coupled_oscillator"];
        if (!sec.contains(ek) || !sec[ek].contains(nk)) continue;
        double r = sec[ek][nk].get<double>();
        diff_rows.push_back({double(key.first), key.second, eta, r, std::abs(eta - r)});
      }
      write_rows(fs::path(o.out_dir) / (stem + "_diff"), o.format,
                 {"n", "epsilon", "eta_computed", "eta_reference", "abs_dev"}, diff_rows,
                 manifest);
    }
  }

  manifest.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  manifest.write((fs::path(o.out_dir) / (stem + ".manifest.json")).string());
  checks.write(fs::path(o.out_dir) / (stem + ".checks.json"));
  std::cout << (checks.all_ok ? "ok: " : "CHECK FAILURE: ") << stem << "\n";
  return checks.all_ok ? 0 : 1;
}

int cmd_hydrogen(const CommonOpts& o, int n) {
  fs::create_directories(o.out_dir);
  auto t0 = std::chrono::steady_clock::now();
  CheckList checks;
  json report;

  json energies = json::array();
  bool energy_ok = true;
  for (int k = 1; k <= 9; ++k) {
    double ev = hydrogen_energy_ev(k);
    double target = -13.6 / double(k * k);
    double rel = std::abs(ev - target) / std::abs(target);
    if (rel > 1e-3) energy_ok = false;
    energies.push_back({{"n", k},
                        {"hartree", hydrogen_energy_hartree(k)},
                        {"ev", ev},
                        {"target_ev", target},
                        {"rel_dev", rel}});
  }
  checks.add("energy_spectrum", energy_ok, energies);

  double a0 = bohr_radius_estimate();
  checks.add("bohr_radius", std::abs(a0 - 1.0) <= 1e-3, {{"argmax", a0}});

  // shape of the ground-state distribution: (q-1)^2 exp(-2(q-1)) on [0, 10]
  HydrogenWigner w = hydrogen_wigner(1, o.star_order);
  double scale_num = 0.0, scale_den = 0.0;
  const int pts = 1001;
  std::vector<double> fv(pts), gv(pts);
  for (int i = 0; i < pts; ++i) {
    double q = 10.0 * double(i) / double(pts - 1);
    fv[i] = w.f.evaluate({q, 0, 0, 0}).real();
    double u = q - 1.0;
    gv[i] = u * u * std::exp(-2.0 * u);
    scale_num += fv[i] * gv[i];
    scale_den += fv[i] * fv[i];
  }
  double s = scale_den > 0 ? scale_num / scale_den : 0.0;
  double gmax = 0.0, linf = 0.0;
  for (int i = 0; i < pts; ++i) {
    gmax = std::max(gmax, std::abs(gv[i]));
    linf = std::max(linf, std::abs(s * fv[i] - gv[i]));
  }
  double shape_residual = linf / gmax;
  checks.add("ground_wigner_shape", shape_residual <= 1e-10, {{"linf_relative", shape_residual}});

  HydrogenNegativity eta1 = hydrogen_negativity(1);
  checks.add("eta_ground_zero", std::abs(eta1.eta) <= 5e-3,
             {{"eta", eta1.eta}, {"delta", eta1.convergence_delta}});

  double resid = hydrogen_eigen_residual(n);
  checks.add("eigen_residual_n" + std::to_string(n), resid <= 1e-8, {{"residual", resid}});

  report["requested_n"] = n;
  report["energy_hartree"] = hydrogen_energy_hartree(n);
  report["energy_ev"] = hydrogen_energy_ev(n);
  report["bohr_radius"] = a0;
  report["shape_residual"] = shape_residual;
  report["eta_n1"] = eta1.eta;

  RadialDensity rd = radial_density(n);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rd.q.size(); i += 4) rows.push_back({rd.q[i], rd.sigma[i]});
  RunManifest manifest;
  manifest.command = "hydrogen";
  manifest.parameters = {{"n", n}, {"grid", o.grid}};
  write_rows(fs::path(o.out_dir) / ("hydrogen_density_n" + std::to_string(n)), o.format,
             {"q", "sigma"}, rows, manifest);

  fs::path rpt = fs::path(o.out_dir) / "hydrogen_report.json";
  {
    std::ofstream out(rpt, std::ios::binary);
    out << report.dump(2) << "\n";
  }
  manifest.add_artifact(rpt.string());
  manifest.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  manifest.write((fs::path(o.out_dir) / "hydrogen.manifest.json").string());
  checks.write(fs::path(o.out_dir) / "hydrogen.checks.json");
  std::cout << (checks.all_ok ? "ok: hydrogen report" : "CHECK FAILURE: hydrogen report") << "\n";
  return checks.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space quantum mechanics: tables and grids"};
  app.require_subcommand(1);

  CommonOpts o;
  int n_index = 0, nx = -1, ny = -1, hydro_n = 1;
  double eps_single = 0.0;
  std::string slice = "qx,px";
  std::string system = "henon-heiles";
  std::string n_list = "0,2,4,6,8";

  CLI::App* wg = app.add_subcommand("wigner-grid", "sample a distribution on a 2-D slice");
  add_common(wg, o);
  wg->add_option("--n", n_index, "table index (even; maps to (n/2, n/2))");
  wg->add_option("--nx", nx, "explicit x quantum number");
  wg->add_option("--ny", ny, "explicit y quantum number");
  wg->add_option("--epsilon", eps_single, "scaled energy for this grid");
  wg->add_option("--slice", slice, "free variables of the exported plane");

  CLI::App* ex = app.add_subcommand("extrema-table", "tabulate max/min over the support box");
  add_common(ex, o);
  ex->add_option("--n", n_list, "comma-separated table indices");
  ex->add_option("--epsilon", o.epsilons, "comma-separated scaled-energy values");

  CLI::App* ng = app.add_subcommand("negativity", "tabulate the negativity indicator");
  add_common(ng, o);
  ng->add_option("--system", system, "hydrogen1d or henon-heiles");
  ng->add_option("--n", n_list, "comma-separated indices (principal numbers for hydrogen1d)");
  ng->add_option("--epsilon", o.epsilons, "comma-separated scaled-energy values");

  CLI::App* hy = app.add_subcommand("hydrogen", "energies, Bohr radius and shape checks");
  add_common(hy, o);
  hy->add_option("--n", hydro_n, "principal quantum number for the report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (wg->parsed()) return cmd_wigner_grid(o, n_index, nx, ny, eps_single, slice);
    if (ex->parsed()) return cmd_extrema_table(o, n_list);
    if (ng->parsed()) {
      if (system == "hydrogen1d" && ng->count("--n") == 0) n_list = "1,2,3,4,5,6,7,8,9";
      return cmd_negativity(o, system, n_list);
    }
    if (hy->parsed()) return cmd_hydrogen(o, hydro_n);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
