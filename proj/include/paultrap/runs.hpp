#pragma once

// Experiment drivers behind the command-line tool. Each driver turns a
// RunConfig into a Document (header metadata plus numeric tables) that can
// be rendered as CSV or JSON; run_verify produces the check report.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "paultrap/classical.hpp"
#include "paultrap/pde.hpp"
#include "paultrap/run_config.hpp"
#include "paultrap/signal.hpp"
#include "paultrap/wavetrain.hpp"

#ifndef PAULTRAP_VERSION
#define PAULTRAP_VERSION "1.0.0"
#endif

namespace paultrap {

inline constexpr const char* kVersion = PAULTRAP_VERSION;

/// Everything derived from a configuration before any output is produced.
struct RunContext {
  RunConfig config;
  PolarTrack track;
  TrainSpec spec;

  double c0() const { return track.c0(); }
};

inline Trajectory classical_trajectory(const RunConfig& c) {
  const auto intervals = static_cast<std::size_t>(std::max<long long>(2, std::llround(c.time.t_end / c.solver.rk4_step)));
  const UniformGrid grid = make_time_grid_intervals(c.time.t_end, intervals);
  if (c.solver.method == SolverMethod::Picard) return picard_iterate(c.params(), c.init, c.solver.iterations, grid);
  return solve_classical(c.params(), c.init, grid);
}

inline RunContext prepare(const RunConfig& config) {
  validate(config);
  PolarTrack track(classical_trajectory(config));
  TrainSpec spec(config.n, effective_b0(config, track.c0()), track.c0());
  return RunContext{config, std::move(track), spec};
}

/// Spatial grid for snapshot output and the normalization checks.
inline UniformGrid space_grid(const RunContext& ctx, const TrainSpec& spec) {
  const auto& s = ctx.config.space;
  if (s.policy == SpacePolicy::Explicit) return build_space_grid(s.center, s.half_width, *s.points);
  return auto_space_grid(ctx.track, spec, s.points);
}

/// Grid around the train at one instant with more than 16 points per
/// oscillation of the highest index in use.
inline UniformGrid resolved_local_grid(const TrainFrame& frame) {
  std::size_t count = 2048;
  while (!resolves_oscillations(frame, local_space_grid(frame, count))) count *= 2;
  return local_space_grid(frame, count);
}

struct Table {
  std::string name;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Document {
  std::string command;
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  std::vector<Table> tables;
};

inline Document make_document(const RunContext& ctx, const std::string& command) {
  Document doc;
  doc.command = command;
  doc.header["tool"] = "paultrap";
  doc.header["version"] = kVersion;
  doc.header["command"] = command;
  doc.header["config"] = to_json(ctx.config);
  doc.header["c0"] = ctx.c0();
  doc.header["b0_used"] = ctx.spec.b0();
  if (auto w = ctx.track.params().stability_warning()) doc.header["warning"] = *w;
  return doc;
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header comment lines, then each table as a header row and data rows.
/// Consecutive tables with identical columns share one header row.
inline void write_csv(std::ostream& os, const Document& doc) {
  for (const auto& item : doc.header.items()) {
    os << "# " << item.key() << ": ";
    if (item.value().is_string()) {
      os << item.value().get<std::string>();
    } else if (item.value().is_number_float()) {
      os << format_number(item.value().get<double>());
    } else {
      os << item.value().dump();
    }
    os << '\n';
  }
  for (const auto& t : doc.tables) {
    if (!t.meta.empty()) os << "# " << t.name << ": " << t.meta.dump() << '\n';
  }
  const std::vector<std::string>* previous = nullptr;
  for (const auto& t : doc.tables) {
    if (previous == nullptr || *previous != t.columns) {
      if (previous != nullptr) os << '\n';
      for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
      os << '\n';
      previous = &t.columns;
    }
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
      os << '\n';
    }
  }
}

inline nlohmann::ordered_json document_json(const Document& doc) {
  nlohmann::ordered_json j = doc.header;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : doc.tables) {
    nlohmann::ordered_json tj;
    tj["name"] = t.name;
    tj["meta"] = t.meta;
    tj["columns"] = t.columns;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      auto col = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) col.push_back(row[c]);
      data[t.columns[c]] = std::move(col);
    }
    tj["data"] = std::move(data);
    j["tables"].push_back(std::move(tj));
  }
  return j;
}

inline void write_document(std::ostream& os, const Document& doc, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_csv(os, doc);
  } else {
    os << document_json(doc).dump(1) << '\n';
  }
}

/// t, phi1, phi2, rho, theta, rho', theta' and the relative first-integral
/// residual at every classical sample.
inline Document run_classical(const RunContext& ctx) {
  Document doc = make_document(ctx, "classical");
  Table t;
  t.name = "trajectory";
  t.columns = {"t", "phi1", "phi2", "rho", "theta", "drho", "dtheta", "c0_residual"};
  const auto& traj = ctx.track.trajectory();
  const auto& polar = ctx.track.polar();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj[i];
    const auto& p = polar[i];
    t.rows.push_back({s.t, s.phi1, s.phi2, p.rho, p.theta, p.drho, p.dtheta, (first_integral(s) - ctx.c0()) / ctx.c0()});
  }
  t.meta["max_relative_c0_drift"] = traj.max_relative_c0_drift();
  doc.tables.push_back(std::move(t));
  return doc;
}

struct Snapshot {
  FieldGrid field;
  std::size_t nodes = 0;
  std::size_t maxima = 0;
  double center = 0.0;
  bool resolved = true;
};

inline Snapshot take_snapshot(const RunContext& ctx, const UniformGrid& grid, double t) {
  const TrainFrame frame = frame_at(ctx.track, ctx.spec, t);
  Snapshot s{psi_on_grid(frame, grid), 0, 0, 0.0, true};
  s.nodes = count_nodes(frame, grid);
  s.maxima = count_density_maxima(s.field);
  s.center = center_orbit(ctx.track, ctx.spec, t);
  s.resolved = resolves_oscillations(frame, grid);
  return s;
}

/// Density and wavefunction on the run's space grid at each requested time.
inline Document run_snapshot(const RunContext& ctx) {
  Document doc = make_document(ctx, "snapshot");
  const UniformGrid grid = space_grid(ctx, ctx.spec);
  doc.header["grid"] = {{"start", grid.start()}, {"step", grid.step()}, {"points", grid.size()}};
  for (double t : ctx.config.times) {
    const Snapshot s = take_snapshot(ctx, grid, t);
    Table tab;
    tab.name = "snapshot";
    tab.meta = {{"t", t},
                {"norm", s.field.norm},
                {"norm_deficit", s.field.norm_deficit},
                {"node_count", s.nodes},
                {"density_maxima", s.maxima},
                {"x_c", s.center},
                {"resolved", s.resolved}};
    tab.columns = {"t", "x", "density", "re_psi", "im_psi"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Complex v = s.field.values[i];
      tab.rows.push_back({t, grid[i], std::norm(v), v.real(), v.imag()});
    }
    doc.tables.push_back(std::move(tab));
  }
  return doc;
}

/// Center orbit, width function and mean energy along the run.
inline Document run_series(const RunContext& ctx) {
  Document doc = make_document(ctx, "series");
  Table tab;
  tab.name = "series";
  tab.columns = {"t", "x_c", "rho", "energy"};
  const auto& polar = ctx.track.polar();
  for (std::size_t i = 0; i < polar.size(); i += ctx.config.time.output_stride) {
    const double t = polar[i].t;
    const TrainFrame frame(polar[i], ctx.spec);
    const double energy = mean_energy(ctx.track, ctx.spec, t, resolved_local_grid(frame));
    tab.rows.push_back({t, center_of(frame), polar[i].rho, energy});
  }
  doc.tables.push_back(std::move(tab));
  return doc;
}

// ---------------------------------------------------------------------------
// verification suite

struct Check {
  Check() = default;
  explicit Check(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  nlohmann::ordered_json header;
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = header;
    j["passed"] = passed();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      j["checks"].push_back(
          {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}, {"detail", c.detail}});
    }
    return j;
  }
};

/// Observed order log2(coarse / fine) of a quantity under step halving.
inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

/// Residuals already at roundoff cannot show an order; they pass outright.
inline constexpr double kResidualFloor = 1e-8;

inline std::vector<double> sample_times(double t_end, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = t_end * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

namespace detail {

inline Check order_check(const std::string& name, double coarse, double fine) {
  Check c{name};
  c.tolerance = 1.9;
  if (coarse < kResidualFloor && fine < kResidualFloor) {
    c.passed = true;
    c.value = fine;
    c.detail = "residual at roundoff level on both grids";
    return c;
  }
  c.value = observed_order(coarse, fine);
  c.passed = c.value >= c.tolerance;
  c.detail = "residual " + format_number(coarse) + " -> " + format_number(fine);
  return c;
}

template <class F>
Check guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    Check c{name};
    c.passed = false;
    c.value = std::nan("");
    c.detail = e.what();
    return c;
  }
}

inline PolarTrack rk4_track(const RunConfig& c, double step) {
  return PolarTrack(solve_classical(c.params(), c.init, make_time_grid_intervals(
                                                            c.time.t_end, static_cast<std::size_t>(std::llround(c.time.t_end / step)))));
}

}  // namespace detail

/// Distance between Picard iterate k and the fine RK4 oracle for k = 0..max.
inline std::vector<double> picard_distances(const RunConfig& c, int max_iterations, double oracle_step = 1e-4) {
  const PolarTrack oracle = detail::rk4_track(c, oracle_step);
  const UniformGrid grid = make_time_grid_intervals(
      c.time.t_end, static_cast<std::size_t>(std::max<long long>(2, std::llround(c.time.t_end / c.solver.rk4_step))));
  std::vector<double> out;
  for (int k = 0; k <= max_iterations; ++k) out.push_back(sup_distance(picard_iterate(c.params(), c.init, k, grid), oracle));
  return out;
}

/// Split-step evolution of the analytic train from t = 0 through each
/// checkpoint on the oracle grid; returns the density distances to the
/// analytic train for each refinement level.
struct PdeComparison {
  std::vector<double> times;
  std::size_t points = 0;
  double xi_margin = 0.0;
  std::vector<double> dt;                      // per refinement, largest step used
  std::vector<std::vector<double>> distances;  // [refinement][checkpoint]
  std::vector<double> seconds;                 // wall time per refinement
};

inline PdeComparison compare_with_pde(const PolarTrack& track, const TrainSpec& spec, const std::vector<double>& times,
                                      std::size_t refinements, std::optional<std::size_t> points = {}) {
  PdeComparison out;
  out.times = times;
  const std::size_t count = points ? *points : pde_grid_count(track, spec, hermite_tail_margin(spec.n()));
  const PdeGrid pg = pde_space_grid(track, spec, count);
  out.points = count;
  out.xi_margin = pg.xi_margin;
  const auto& params = track.params();
  const FieldGrid psi0 = psi_on_grid(frame_at(track, spec, 0.0), pg.grid);
  std::vector<FieldGrid> exact;
  for (double t : times) exact.push_back(psi_on_grid(frame_at(track, spec, t), pg.grid));
  const double max_dt = std::min(0.01, 0.99 * max_guarded_dt(params, pg.grid));
  for (std::size_t r = 0; r < refinements; ++r) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t factor = std::size_t{1} << r;
    const auto evolved = evolve_checkpoints(psi0, params, pg.grid, times, max_dt, factor);
    std::vector<double> d;
    for (std::size_t i = 0; i < times.size(); ++i) d.push_back(l2_density_distance(evolved[i], exact[i]));
    out.distances.push_back(std::move(d));
    out.dt.push_back(max_dt / static_cast<double>(factor));
    out.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return out;
}

inline std::vector<double> pde_checkpoints(double t_end) {
  std::vector<double> out;
  for (double t : {0.5 * std::numbers::pi, std::numbers::pi, 2.0 * std::numbers::pi}) {
    if (t <= t_end * (1.0 + 1e-12)) out.push_back(std::min(t, t_end));
  }
  return out;
}

/// tdse_residual of the analytic train at time t on a local grid of `points`
/// points with time spacing dt.
inline double analytic_tdse_residual(const PolarTrack& track, const TrainSpec& spec, double t, double dt,
                                     std::size_t points) {
  const TrainFrame middle = frame_at(track, spec, t);
  const UniformGrid grid = local_space_grid(middle, points);
  std::array<FieldGrid, 3> fields{psi_on_grid(frame_at(track, spec, t - dt), grid), psi_on_grid(middle, grid),
                                  psi_on_grid(frame_at(track, spec, t + dt), grid)};
  return tdse_residual(fields, track.params());
}

struct ResidualSteps {
  double dt = 0.0;
  std::size_t points = 0;
};

/// Coarsest (dt, points) pair of a residual convergence study at time t:
/// the wavenumber and the angular rate of psi over the occupied region, both
/// from closed forms, are resolved to 0.4 rad per cell and 0.1 rad per step.
inline ResidualSteps residual_study_steps(const PolarTrack& track, const TrainSpec& spec, double t) {
  const TrainFrame f = frame_at(track, spec, t);
  const double sc = std::sqrt(spec.c0());
  const double spread = std::sqrt(2.0 * spec.n() + 1.0);
  const double xc = center_of(f);
  const double reach = f.rho / sc * (spread + 6.0);
  const double hermite_k = spread * sc / f.rho;
  const PhaseRate rate = phase_rate(f, track.params().spring(t));
  double k = 0.0, omega = 0.0;
  for (double x : {xc - reach, xc, xc + reach}) {
    k = std::max(k, std::abs(phase_gradient(f, x)) + hermite_k);
    const double dxi = -sc * x * f.drho / (f.rho * f.rho) + spec.b0() / sc * std::sin(f.theta) * f.dtheta;
    omega = std::max(omega, std::abs(rate.at(x)) + spread * std::abs(dxi) + std::abs(f.drho / f.rho));
  }
  const UniformGrid probe = local_space_grid(f, 256);
  std::size_t points = 256;
  while (probe.step() * 256.0 / static_cast<double>(points) * k > 0.4) points *= 2;
  return {std::min(2e-2, 0.1 / omega), points};
}

/// Largest rate among theta', |rho'/rho| and sqrt(k) over the trajectory.
inline double classical_rate(const PolarTrack& track) {
  double rate = std::sqrt(track.params().max_spring());
  for (const auto& p : track.polar()) rate = std::max({rate, p.dtheta, std::abs(p.drho / p.rho)});
  return rate;
}

/// Coarse step of a classical-grid convergence study: 0.02 rad per step at
/// the fastest rate, and no larger than 2e-2.
inline double convergence_step(const PolarTrack& track) { return std::min(2e-2, 0.02 / classical_rate(track)); }

/// largest n with n >= 1 used by the invariant checks
inline constexpr int kNormIndexMax = 10;
inline constexpr int kOrthoIndexMax = 8;
inline constexpr int kEnergyIndexMax = 6;

inline VerifyReport run_verify(const RunContext& ctx, bool include_pde = true) {
  const RunConfig& cfg = ctx.config;
  const PolarTrack& track = ctx.track;
  const TrainSpec& spec = ctx.spec;
  VerifyReport report;
  report.header = make_document(ctx, "verify").header;
  auto add = [&](Check c) { report.checks.push_back(std::move(c)); };

  const PolarTrack rk4 = detail::rk4_track(cfg, cfg.solver.rk4_step);
  add(detail::guarded("classical.first_integral_drift", [&] {
    Check c{"classical.first_integral_drift"};
    c.value = rk4.trajectory().max_relative_c0_drift();
    c.tolerance = 1e-8;
    c.passed = c.value < c.tolerance;
    return c;
  }));

  add(detail::guarded("classical.picard_vs_rk4", [&] {
    Check c{"classical.picard_vs_rk4"};
    const int iterations = std::max(cfg.solver.iterations, 4);
    c.value = picard_distances(cfg, iterations).back();
    c.tolerance = 1e-6;
    c.passed = c.value < c.tolerance;
    c.detail = std::to_string(iterations) + " iterations against RK4 at step 1e-4";
    return c;
  }));

  // Convergence studies use their own pair of steps so that truncation error
  // dominates roundoff on both.
  const double study_step = convergence_step(rk4);
  const PolarTrack coarse = detail::rk4_track(cfg, study_step);
  const PolarTrack fine = detail::rk4_track(cfg, 0.5 * study_step);
  add(detail::guarded("classical.polar_equations_order", [&] {
    const auto a = polar_residuals(coarse.trajectory(), coarse.polar());
    const auto b = polar_residuals(fine.trajectory(), fine.polar());
    return detail::order_check("classical.polar_equations_order", std::max(a.theta_equation, a.rho_equation),
                               std::max(b.theta_equation, b.rho_equation));
  }));
  add(detail::guarded("train.coefficient_equations_order", [&] {
    const TrainSpec sc(spec.n(), spec.b0(), coarse.c0());
    const TrainSpec sf(spec.n(), spec.b0(), fine.c0());
    return detail::order_check("train.coefficient_equations_order", coefficient_residuals(coarse, sc).max(), coefficient_residuals(fine, sf).max());
  }));

  add(detail::guarded("train.e_consistency", [&] {
    Check c{"train.e_consistency"};
    for (const auto& p : rk4.polar()) {
      const double a = std::sqrt(rk4.c0()) / p.rho;
      const double b = std::sqrt(p.dtheta);
      c.value = std::max(c.value, std::abs(a - b) / b);
    }
    c.tolerance = 1e-8;
    c.passed = c.value < c.tolerance;
    return c;
  }));

  add(detail::guarded("train.center_identity", [&] {
    Check c{"train.center_identity"};
    const double scale = 1.0 + std::abs(spec.b0()) / std::sqrt(spec.c0());
    for (const auto& p : track.polar()) {
      const TrainFrame f(p, spec);
      c.value = std::max(c.value, std::abs(xi_of(f, center_of(f))) / scale);
    }
    c.tolerance = 1e-12;
    c.passed = c.value < c.tolerance;
    return c;
  }));

  const auto times = sample_times(cfg.time.t_end, 10);
  const int norm_max = std::max(kNormIndexMax, spec.n());
  add(detail::guarded("train.normalization", [&] {
    Check c{"train.normalization"};
    const UniformGrid grid = space_grid(ctx, spec.with_n(norm_max));
    c.tolerance = 1e-6;
    std::size_t deficits = 0;
    for (double t : times) {
      for (int m = 0; m <= norm_max; ++m) {
        const auto field = psi_on_grid(frame_at(track, spec.with_n(m), t), grid, c.tolerance);
        c.value = std::max(c.value, std::abs(field.norm - 1.0));
        deficits += field.norm_deficit ? 1 : 0;
      }
    }
    c.passed = c.value < c.tolerance;
    c.detail = "n <= " + std::to_string(norm_max) + " on " + std::to_string(grid.size()) + " points";
    if (deficits) c.detail += "; NormDeficit in " + std::to_string(deficits) + " fields";
    return c;
  }));

  add(detail::guarded("train.orthogonality", [&] {
    Check c{"train.orthogonality"};
    const UniformGrid grid = space_grid(ctx, spec.with_n(kOrthoIndexMax));
    for (double t : times) {
      std::vector<FieldGrid> fields;
      for (int m = 0; m <= kOrthoIndexMax; ++m) fields.push_back(psi_on_grid(frame_at(track, spec.with_n(m), t), grid));
      for (int m = 0; m <= kOrthoIndexMax; ++m) {
        for (int k = m + 1; k <= kOrthoIndexMax; ++k) c.value = std::max(c.value, std::abs(overlap(fields[m], fields[k])));
      }
    }
    c.tolerance = 1e-6;
    c.passed = c.value < c.tolerance;
    return c;
  }));

  add(detail::guarded("train.node_count", [&] {
    Check c{"train.node_count"};
    const UniformGrid grid = space_grid(ctx, spec);
    std::size_t wrong = 0;
    for (double t : times) {
      const TrainFrame f = frame_at(track, spec, t);
      if (!resolves_oscillations(f, grid)) {
        throw Error(Errc::InvalidCount, "grid has fewer than 16 points per oscillation at t=" + format_number(t));
      }
      if (count_nodes(f, grid) != static_cast<std::size_t>(spec.n())) ++wrong;
    }
    c.value = static_cast<double>(wrong);
    c.passed = wrong == 0;
    c.detail = "times with a node count other than n = " + std::to_string(spec.n());
    return c;
  }));

  add(detail::guarded("train.energy_affinity", [&] {
    Check c{"train.energy_affinity"};
    for (double t : times) {
      const UniformGrid grid = resolved_local_grid(frame_at(track, spec.with_n(kEnergyIndexMax + 1), t));
      std::vector<double> e;
      for (int m = 0; m <= kEnergyIndexMax + 1; ++m) e.push_back(mean_energy(track, spec.with_n(m), t, grid));
      const double gap = e[1] - e[0];
      for (int m = 1; m <= kEnergyIndexMax; ++m) c.value = std::max(c.value, std::abs((e[m + 1] - e[m]) - gap) / std::abs(gap));
    }
    c.tolerance = 1e-6;
    c.passed = c.value < c.tolerance;
    return c;
  }));

  if (spec.b0() == 0.0) {
    add(detail::guarded("train.brown_parity", [&] {
      Check c{"train.brown_parity"};
      const UniformGrid grid = build_space_grid(0.0, 1.0, 1024);
      for (double t : times) {
        const TrainFrame f = frame_at(track, spec, t);
        c.value = std::max(c.value, std::abs(center_of(f)));
        const double sign = spec.n() % 2 == 0 ? 1.0 : -1.0;
        const double half = support_half_width(f.rho, spec.c0(), spec.n());
        for (std::size_t i = 1; i < grid.size(); ++i) {
          const double x = grid[i] * half;
          c.value = std::max(c.value, std::abs(amplitude(f, x) - sign * amplitude(f, -x)));
        }
      }
      c.tolerance = 0.0;
      c.passed = c.value == 0.0;
      c.detail = "x_c and parity defect of R_n (exact)";
      return c;
    }));
  }

  add(detail::guarded("pde.tdse_residual_order", [&] {
    const double t = 0.5 * cfg.time.t_end;
    const ResidualSteps steps = residual_study_steps(track, spec, t);
    const double dt = steps.dt;
    const std::size_t points = steps.points;
    return detail::order_check("pde.tdse_residual_order", analytic_tdse_residual(track, spec, t, dt, points),
                               analytic_tdse_residual(track, spec, t, 0.5 * dt, 2 * points));
  }));

  if (include_pde) {
    const auto checkpoints = pde_checkpoints(cfg.time.t_end);
    add(detail::guarded("pde.split_step_agreement", [&] {
      Check c{"pde.split_step_agreement"};
      const auto cmp = compare_with_pde(track, spec, checkpoints, 1);
      for (double d : cmp.distances[0]) c.value = std::max(c.value, d);
      c.tolerance = 1e-3;
      c.passed = c.value < c.tolerance;
      c.detail = std::to_string(cmp.points) + " points, dt " + format_number(cmp.dt[0]);
      return c;
    }));
  }
  return report;
}

/// Picard convergence table and split-step refinement study.
inline Document run_oracle_compare(const RunContext& ctx) {
  Document doc = make_document(ctx, "oracle-compare");
  Table picard;
  picard.name = "picard";
  picard.columns = {"iterations", "sup_distance_to_rk4"};
  const auto d = picard_distances(ctx.config, std::max(ctx.config.solver.iterations, 4));
  for (std::size_t k = 0; k < d.size(); ++k) picard.rows.push_back({static_cast<double>(k), d[k]});
  picard.meta["oracle_step"] = 1e-4;
  doc.tables.push_back(std::move(picard));

  Table pde;
  pde.name = "pde";
  pde.columns = {"t", "dt", "distance", "distance_half_dt", "ratio"};
  const auto cmp = compare_with_pde(ctx.track, ctx.spec, pde_checkpoints(ctx.config.time.t_end), 2, ctx.config.space.points);
  for (std::size_t i = 0; i < cmp.times.size(); ++i) {
    pde.rows.push_back(
        {cmp.times[i], cmp.dt[0], cmp.distances[0][i], cmp.distances[1][i], cmp.distances[0][i] / cmp.distances[1][i]});
  }
  pde.meta = {{"points", cmp.points}, {"xi_margin", cmp.xi_margin}};
  doc.tables.push_back(std::move(pde));
  return doc;
}

}  // namespace paultrap
