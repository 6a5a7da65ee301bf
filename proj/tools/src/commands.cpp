#include "hgamma/tools/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include "hgamma/cc_metric.hpp"
#include "hgamma/energies.hpp"
#include "hgamma/errors.hpp"
#include "hgamma/horizontal_calculus.hpp"
#include "hgamma/recovery.hpp"
#include "hgamma/tools/field_io.hpp"

namespace hgamma::tools {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

HPoint point_of(const std::vector<double>& x) {
  return HPoint(std::vector<double>(x.begin(), x.end() - 1), x.back());
}

// Ladder entries whose parameters violate the regime become rows with a note.
json for_ladder(const RunConfig& cfg, const std::function<json(const ProfileParams&, const EnergyParams&)>& row) {
  json rows = json::array();
  for (double eps : cfg.eps_ladder) {
    const auto e = EnergyParams::from_kappa(eps, cfg.kappa, cfg.sigma);
    const auto p = ProfileParams::from(e);
    json r{{"epsilon", eps}, {"log_lambda", e.log_lambda}};
    try {
      p.validate();
      r.update(row(p, e));
    } catch (const DomainError& ex) {
      r["skipped"] = ex.what();
    }
    rows.push_back(r);
  }
  return rows;
}

json distance(const RunConfig& cfg) {
  const HPoint P = point_of(cfg.p), Q = point_of(cfg.q);
  const double exact = exact_cc_distance(group_mul(group_inv(P), Q));
  const CcDistance d(LatticeSpec::covering_ball(cfg.n, std::max(1.1 * exact, 4 * cfg.h), cfg.h));
  const double lattice = d(P, Q);
  const double refined = d.refined(P, Q, 4);
  auto rel = [exact](double x) { return exact > 0 ? std::abs(x - exact) / exact : std::abs(x); };
  return {{"exact", exact},
          {"lattice", lattice},
          {"refined", refined},
          {"lattice_relative_error", rel(lattice)},
          {"refined_relative_error", rel(refined)}};
}

json eikonal(const RunConfig& cfg) {
  const auto spec = LatticeSpec::covering_ball(cfg.n, cfg.radius, cfg.h);
  const auto target = cfg.source == "origin" ? TargetSet::at(HPoint::identity(cfg.n))
                                             : TargetSet::hyperplane(cfg.axis, cfg.offset);
  const auto field = distance_field(target, spec);
  const auto s = eikonal_residual(field);
  return {{"source", target.describe()}, {"nodes", spec.node_count()}, {"median", s.median},
          {"p90", s.p90},                {"max", s.max},                {"samples", s.samples}};
}

std::vector<double> tube_radii(const LatticeSpec& spec) {
  const double lo = 2.4 * spec.h, hi = 0.95 * spec.eta_half() / 4;
  if (!(hi > lo)) throw DomainError("lattice too coarse for Minkowski radii; decrease h or increase radius");
  std::vector<double> r;
  for (int i = 0; i < 4; ++i) r.push_back(lo + (hi - lo) * i / 3.0);
  return r;
}

json perimeter(const RunConfig& cfg) {
  const auto sc = make_sweep_config(cfg);
  const auto E = make_geometry(cfg);
  json per = json::object();
  json samples = json::array();
  for (auto m : {PerimeterMethod::SurfaceIntegral, PerimeterMethod::SmoothedTv, PerimeterMethod::Minkowski}) {
    const std::string name = to_string(m);
    if (cfg.method != "all" && cfg.method != name) continue;
    PerimeterReport r;
    if (m == PerimeterMethod::Minkowski) {
      r = minkowski_content(E, sc.lattice, tube_radii(sc.lattice), sc.window);
      for (const auto& [rad, v] : r.samples) samples.push_back({rad, v});
    } else {
      r = h_perimeter(E, sc.lattice, sc.window, m);
    }
    per[name] = r.perimeter;
  }
  json out{{"geometry", E.describe()}, {"window_volume", sc.window.volume()}, {"perimeter", per}};
  if (!samples.empty()) out["minkowski_samples"] = samples;
  return out;
}

json coarea(const RunConfig& cfg) {
  const auto sc = make_sweep_config(cfg);
  const ScalarField f = cfg.field == "eta1"
                            ? sample_field(sc.lattice, [](const HPoint& p) { return p.eta[0]; })
                            : ScalarField(sc.lattice, analytic_signed_distance(make_geometry(cfg), sc.lattice).values);
  const auto r = coarea_check(f, sc.window, cfg.levels);
  return {{"field", cfg.field}, {"levels", r.levels}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"relative_gap", r.relative_gap}};
}

json volume_exponent(const RunConfig& cfg) {
  if (cfg.radii.empty()) throw ConfigError("radii is empty");
  const double rmax = *std::max_element(cfg.radii.begin(), cfg.radii.end());
  const auto v = ball_volume_exponent(LatticeSpec::covering_ball(cfg.n, rmax, cfg.h), cfg.radii);
  return {{"fitted_slope", v.fitted_slope},
          {"homogeneous_dimension", 2 * cfg.n + 2},
          {"radii", v.radii},
          {"volumes", v.volumes}};
}

json trace_check(const RunConfig& cfg) {
  const double pi = std::numbers::pi;
  const int m = cfg.grid;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), C(0.0, 6.0), P(0.0, 2 * pi);
  auto ratio_of = [m](const std::function<double(double, double)>& f) {
    std::vector<double> u(static_cast<std::size_t>(m) * m);
    for (int iz = 0; iz < m; ++iz)
      for (int is = 0; is < m; ++is) u[static_cast<std::size_t>(iz) * m + is] = f(is / double(m - 1), iz / double(m - 1));
    return trace_ratio(u, m, m);
  };
  std::vector<double> ratios;
  for (int trial = 0; trial < cfg.samples; ++trial) {
    double a[4], phi[4], c[4];
    for (int k = 0; k < 4; ++k) {
      a[k] = U(rng);
      phi[k] = P(rng);
      c[k] = C(rng);
    }
    ratios.push_back(ratio_of([&](double s, double z) {
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += a[k] * std::cos((k + 1) * pi * s + phi[k]) * std::exp(-c[k] * z);
      return v;
    }));
  }
  // Harmonic extensions of single modes come closest to the constant.
  double harmonic = 0.0;
  for (int k = 1; k <= 4; ++k)
    harmonic = std::max(harmonic, ratio_of([k, pi](double s, double z) { return std::cos(k * pi * s) * std::exp(-k * pi * z); }));
  double sum = 0.0;
  for (double r : ratios) sum += r;
  return {{"constant", 2 * pi},
          {"grid", m},
          {"samples", cfg.samples},
          {"max_ratio", *std::max_element(ratios.begin(), ratios.end())},
          {"mean_ratio", sum / ratios.size()},
          {"harmonic_ratio", harmonic},
          {"ratios", ratios}};
}

json g1d(const RunConfig& cfg) {
  return {{"rows", for_ladder(cfg, [&](const ProfileParams& p, const EnergyParams& e) {
             const double r0 = e.inner_radius();
             std::vector<double> s{-r0, r0};
             for (int i = 0; i < cfg.samples; ++i) {
               const double x = -cfg.sigma + 2 * cfg.sigma * i / std::max(1, cfg.samples - 1);
               if (std::abs(x) > r0) s.push_back(x);
             }
             s.push_back(cfg.sigma);
             s.push_back(-cfg.sigma);
             std::sort(s.begin(), s.end());
             s.erase(std::unique(s.begin(), s.end()), s.end());
             std::vector<double> v;
             for (double x : s) v.push_back(profile(x, 0.0, p));
             const double G = energy_G_piecewise(s, v, e);
             return json{{"G", G}, {"line_tension", e.line_tension()}, {"ratio", G / e.line_tension()}};
           })}};
}

json profile_bounds(const RunConfig& cfg) {
  return {{"rows", for_ladder(cfg, [&](const ProfileParams& p, const EnergyParams&) {
             const auto b = profile_gradient_bounds(p, cfg.samples);
             return json{{"first_inner", b.first_inner},   {"first_outer", b.first_outer},
                         {"second_inner", b.second_inner}, {"second_outer", b.second_outer},
                         {"max_fd_error", b.max_fd_error}, {"samples", b.samples}};
           })}};
}

json lemma_check(const RunConfig& cfg) {
  return {{"rows", for_ladder(cfg, [](const ProfileParams& p, const EnergyParams&) {
             const auto r = lemma_calculation(p);
             return json{{"inner_energy", r.inner_energy},
                         {"annulus_energy", r.annulus_energy},
                         {"boundary_inner", r.boundary_inner},
                         {"boundary_outer", r.boundary_outer},
                         {"inner_target", r.inner_target},
                         {"log_scale", r.log_scale},
                         {"inner_ratio", r.inner_ratio},
                         {"annulus_ratio", r.annulus_ratio},
                         {"boundary_inner_ratio", r.boundary_inner_ratio},
                         {"boundary_outer_ratio", r.boundary_outer_ratio}};
           })}};
}

struct Recovery {
  SweepConfig sweep;
  EnergyParams energy;
  CylinderField field;
};

Recovery recovery_field(const RunConfig& cfg) {
  auto sc = make_sweep_config(cfg);
  sc.validate();
  const auto e = EnergyParams::from_kappa(cfg.single_epsilon(), cfg.kappa, cfg.sigma);
  const auto p = ProfileParams::from(e);
  p.validate();
  const auto rho = analytic_signed_distance(sc.geometry, sc.lattice);
  return {sc, e, build_recovery(rho, p, uniform_levels(cfg.height, cfg.z_levels))};
}

json phase_counts(const CylinderField& f) {
  const Lattice lat(f.spec);
  std::size_t zero = 0, one = 0, mixed = 0;
  const auto trace = f.trace();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.node(i).k != 0) continue;
    if (trace[i] == 0.0)
      ++zero;
    else if (trace[i] == 1.0)
      ++one;
    else
      ++mixed;
  }
  return {{"zero", zero}, {"one", one}, {"mixed", mixed}};
}

json files_json(const std::vector<fs::path>& files) {
  json out = json::array();
  for (const auto& f : files) out.push_back(f.string());
  return out;
}

json recover(const RunConfig& cfg) {
  const auto rec = recovery_field(cfg);
  auto sc = rec.sweep;
  sc.ladder = {cfg.single_epsilon()};
  sc.optimizer.enabled = false;
  const auto rep = gamma_sweep(sc);
  const auto& row = rep.rows.front();
  const auto files = dump_field(rec.field, cfg.out_dir, "recovery", cfg.format);
  return {{"epsilon", row.epsilon},     {"lambda", row.lambda},       {"E_recovery", row.E_recovery},
          {"target", row.target},       {"ratio", row.ratio_rec},     {"trace_gap", row.trace_gap},
          {"perimeter", rep.perimeter}, {"trace_t0", phase_counts(rec.field)}, {"files", files_json(files)}};
}

json energy(const RunConfig& cfg) {
  const auto rec = recovery_field(cfg);
  const auto parts =
      energy_E(rec.field, rec.energy, CylinderRegion{rec.sweep.window, 0.0, cfg.height}, rec.sweep.window);
  return {{"epsilon", rec.energy.epsilon}, {"z_levels", cfg.z_levels}, {"bulk", parts.bulk},
          {"boundary", parts.boundary},    {"total", parts.total}};
}

json sweep(const RunConfig& cfg) {
  const auto rep = gamma_sweep(make_sweep_config(cfg));
  const fs::path csv = fs::path(cfg.out_dir) / "sweep.csv";
  fs::create_directories(cfg.out_dir);
  std::ofstream(csv) << rep.to_csv();
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row{{"epsilon", r.epsilon},       {"lambda", r.lambda},       {"E_recovery", r.E_recovery},
             {"E_min", r.E_min},           {"target", r.target},       {"ratio_rec", r.ratio_rec},
             {"ratio_min", r.ratio_min},   {"trace_gap", r.trace_gap}, {"seconds", r.seconds}};
    if (r.skipped) row["skipped"] = r.note;
    rows.push_back(row);
  }
  return {{"perimeter", rep.perimeter},
          {"target", rep.target},
          {"ratio_decreasing", rep.ratio_decreasing},
          {"trace_gap_decreasing", rep.trace_gap_decreasing},
          {"rows", rows},
          {"files", files_json({csv})}};
}

json minimize(const RunConfig& cfg) {
  auto sc = make_sweep_config(cfg);
  sc.optimizer.enabled = true;
  const double eps = cfg.single_epsilon();
  const auto m = minimize_E(sc, eps);
  std::vector<fs::path> files;
  if (cfg.format == "csv" || cfg.format == "both") {
    files.push_back(fs::path(cfg.out_dir) / "minimize_field.csv");
    fs::create_directories(cfg.out_dir);
    std::ofstream out(files.back());
    out << "s,z,value\n";
    char buf[96];
    for (int i = 0; i <= m.grid.nx; ++i)
      for (int j = 0; j <= m.grid.nth; ++j) {
        const auto k = m.grid.index(i, j);
        if (!m.grid.active[k]) continue;
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", m.grid.s(i, j), m.grid.z(i, j), m.values[k]);
        out << buf;
      }
  }
  return {{"epsilon", eps},
          {"energy", m.energy},
          {"initial_energy", m.initial_energy},
          {"iterations", m.iterations},
          {"converged", m.converged},
          {"history", m.history},
          {"files", files_json(files)}};
}

}  // namespace

JumpGeometry make_geometry(const RunConfig& cfg) {
  if (cfg.geometry == "half-space") return JumpGeometry::half_space(cfg.axis, cfg.offset);
  if (cfg.geometry == "ball") return JumpGeometry::cc_ball(HPoint::identity(cfg.n), cfg.ball_radius);
  if (cfg.geometry == "empty") return JumpGeometry::empty();
  throw ConfigError("unknown geometry '" + cfg.geometry + "'");
}

SweepConfig make_sweep_config(const RunConfig& cfg) {
  auto sc = SweepConfig::standard(cfg.n, cfg.radius, cfg.h);
  sc.kappa = cfg.kappa;
  sc.ladder = cfg.eps_ladder;
  sc.geometry = make_geometry(cfg);
  sc.height = cfg.height;
  sc.sigma = cfg.sigma;
  sc.perimeter_samples = cfg.perimeter_samples;
  sc.optimizer.enabled = cfg.minimize;
  sc.optimizer.step = cfg.step;
  sc.optimizer.max_iters = cfg.max_iters;
  sc.optimizer.tolerance = cfg.tolerance;
  sc.optimizer.angular_cells = cfg.angular_cells;
  sc.optimizer.warm_start = cfg.warm_start;
  sc.optimizer.init_noise = cfg.init_noise;
  sc.seed = cfg.seed;
  sc.timing = cfg.timing;
  return sc;
}

json run_command(const RunConfig& cfg) {
  static const std::map<std::string, json (*)(const RunConfig&)> table{
      {"distance", distance},       {"eikonal", eikonal},         {"perimeter", perimeter},
      {"coarea", coarea},           {"volume-exponent", volume_exponent}, {"trace-check", trace_check},
      {"g1d", g1d},                 {"profile", profile_bounds},  {"lemma-check", lemma_check},
      {"recover", recover},         {"energy", energy},           {"sweep", sweep},
      {"minimize", minimize}};
  const auto it = table.find(cfg.command);
  if (it == table.end()) throw ConfigError("unknown command '" + cfg.command + "'\n" + usage());
  return it->second(cfg);
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_config(argc, argv);
    json doc{{"command", cfg.command}, {"config", to_json(cfg)}, {"result", run_command(cfg)}};
    const fs::path path = fs::path(cfg.out_dir) / (cfg.command + ".json");
    fs::create_directories(cfg.out_dir);
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write " + path.string());
    file << doc.dump(2) << '\n';
    out << doc["result"].dump(2) << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hgamma::tools
