#include "hgamma/gamma_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hgamma/errors.hpp"
#include "hgamma/horizontal_calculus.hpp"

namespace hgamma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool strictly_decreasing(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace

SweepConfig SweepConfig::standard(int n, double radius, double h) {
  if (!(radius > 0.0) || !(h > 0.0)) throw ConfigError("radius and h must be positive");
  SweepConfig c;
  const double eh = 0.5 * radius;
  const double th = radius * radius / 16.0;
  c.lattice = LatticeSpec::box(n, h, eh + 2.0 * h, th + 0.5 * eh * h + h * h);
  std::vector<double> lo(static_cast<std::size_t>(2 * n + 1), -eh), hi(static_cast<std::size_t>(2 * n + 1), eh);
  lo.back() = -th;
  hi.back() = th;
  c.window = Window::box(lo, hi);
  return c;
}

void SweepConfig::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive");
  if (ladder.empty()) throw ConfigError("epsilon ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) throw ConfigError("ladder entries must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) throw ConfigError("epsilon ladder must be strictly decreasing");
  }
  lattice.validate();
  if (lattice.n != 1) throw ConfigError("the sweep needs n = 1");
  if (static_cast<int>(window.lo.size()) != lattice.dims()) throw ConfigError("window dimension does not match lattice");
  if (!(height > 0.0)) throw ConfigError("cylinder height must be positive");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(sigma < lattice.eta_half())) throw DomainError("collar width sigma exceeds the lattice window");
  if (perimeter_samples < 2) throw ConfigError("need at least two perimeter samples");
  if (optimizer.enabled) {
    if (!(optimizer.step > 0.0) || optimizer.max_iters < 1 || !(optimizer.tolerance >= 0.0) ||
        optimizer.angular_cells < 4)
      throw ConfigError("invalid optimizer settings");
  }
}

double PerimeterProfile::operator()(double x) const {
  if (s.empty()) return 0.0;
  if (x <= s.front()) return perimeter.front();
  if (x >= s.back()) return perimeter.back();
  const auto it = std::upper_bound(s.begin(), s.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - s.begin()) - 1;
  const double a = (x - s[k]) / (s[k + 1] - s[k]);
  return (1.0 - a) * perimeter[k] + a * perimeter[k + 1];
}

PerimeterProfile perimeter_profile(const SignedDistanceField& rho, const Window& window, double sigma, int samples) {
  if (samples < 2) throw ConfigError("need at least two perimeter samples");
  const ScalarField f(rho.spec, rho.values);
  PerimeterProfile out;
  for (int k = 0; k < samples; ++k) {
    const double s = -sigma + 2.0 * sigma * k / (samples - 1);
    out.s.push_back(s);
    out.perimeter.push_back(level_set_perimeter(f, s, window));
  }
  return out;
}

const std::vector<std::string>& SweepReport::columns() {
  static const std::vector<std::string> c{"epsilon", "lambda", "E_recovery", "E_min", "target",
                                          "ratio_rec", "ratio_min", "trace_gap", "seconds"};
  return c;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  const auto& c = columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "\n";
  auto num = [](double x) {
    if (std::isnan(x)) return std::string("nan");
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    os << num(r.epsilon) << "," << num(r.lambda) << "," << num(r.E_recovery) << "," << num(r.E_min) << ","
       << num(r.target) << "," << num(r.ratio_rec) << "," << num(r.ratio_min) << "," << num(r.trace_gap) << ","
       << num(r.seconds) << "\n";
  }
  return os.str();
}

namespace {

// Largest |rho| over window nodes: the s extent of the slices.
double slice_extent(const SignedDistanceField& rho, const Window& window) {
  const Lattice lat(rho.spec);
  double m = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (window.contains(lat.coords(i))) m = std::max(m, std::abs(rho.values[i]));
  return m;
}

double ratio(double e, double target) { return target > 0.0 ? e / target : 0.0; }

}  // namespace

SweepReport gamma_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepReport rep;
  const bool empty = cfg.geometry.kind == JumpGeometry::Kind::Empty;
  PerimeterProfile prof;
  double extent = 0.0;
  if (!empty) {
    const auto rho = analytic_signed_distance(cfg.geometry, cfg.lattice);
    prof = perimeter_profile(rho, cfg.window, cfg.sigma, cfg.perimeter_samples);
    extent = slice_extent(rho, cfg.window);
    rep.perimeter = h_perimeter(cfg.geometry, cfg.lattice, cfg.window).perimeter;
  }
  rep.target = cfg.kappa / std::numbers::pi * rep.perimeter;

  std::vector<double> ratios, gaps;
  for (double eps : cfg.ladder) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.epsilon = eps;
    const auto e = EnergyParams::from_kappa(eps, cfg.kappa, cfg.sigma);
    row.lambda = e.lambda();
    row.target = rep.target;
    const auto p = ProfileParams::from(e);
    try {
      p.validate();
    } catch (const DomainError& err) {
      row.skipped = true;
      row.note = err.what();
      row.E_recovery = row.E_min = row.ratio_rec = row.ratio_min = row.trace_gap = kNaN;
      rep.rows.push_back(row);
      continue;
    }
    if (empty) {
      row.E_recovery = 0.0;
      row.trace_gap = 0.0;
      row.E_min = cfg.optimizer.enabled ? 0.0 : kNaN;
    } else {
      const auto E = recovery_energy(prof, cfg.height, p);
      row.E_recovery = E.total;
      row.trace_gap = E.trace_gap;
      row.E_min = cfg.optimizer.enabled ? minimize_E(cfg, eps, prof, extent).energy : kNaN;
    }
    row.ratio_rec = ratio(row.E_recovery, row.target);
    row.ratio_min = std::isnan(row.E_min) ? kNaN : ratio(row.E_min, row.target);
    if (cfg.timing) row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ratios.push_back(row.ratio_rec);
    gaps.push_back(row.trace_gap);
    rep.rows.push_back(row);
  }
  rep.ratio_decreasing = strictly_decreasing(ratios);
  rep.trace_gap_decreasing = strictly_decreasing(gaps);
  return rep;
}

double LogPolarGrid::s(int i, int j) const {
  return std::exp(x_min + i * step) * std::cos(std::numbers::pi * j / nth);
}

double LogPolarGrid::z(int i, int j) const {
  if (j == 0 || j == nth) return 0.0;
  return std::exp(x_min + i * step) * std::sin(std::numbers::pi * j / nth);
}

namespace {

struct Edge {
  std::size_t a, b;
  double w;
};

struct TraceTerm {
  std::size_t node;
  double c;  // lambda * P(s) * ds
};

struct Problem {
  std::vector<Edge> edges;
  std::vector<TraceTerm> trace;
  std::vector<char> free;
  double eps = 0.0;

  double energy(const std::vector<double>& u) const {
    double bulk = 0.0;
    for (const auto& e : edges) {
      const double d = u[e.a] - u[e.b];
      bulk += e.w * d * d;
    }
    double pot = 0.0;
    const DoubleWell V;
    for (const auto& t : trace) pot += t.c * V(u[t.node]);
    return eps * bulk + pot;
  }

  void gradient(const std::vector<double>& u, std::vector<double>& g) const {
    std::fill(g.begin(), g.end(), 0.0);
    for (const auto& e : edges) {
      const double d = 2.0 * eps * e.w * (u[e.a] - u[e.b]);
      g[e.a] += d;
      g[e.b] -= d;
    }
    const DoubleWell V;
    for (const auto& t : trace) g[t.node] += t.c * V.deriv(u[t.node]);
  }
};

}  // namespace

MinimizeResult minimize_E(const SweepConfig& cfg, double epsilon) {
  cfg.validate();
  if (cfg.geometry.kind == JumpGeometry::Kind::Empty) throw DomainError("minimize_E needs a nonempty jump set");
  const auto rho = analytic_signed_distance(cfg.geometry, cfg.lattice);
  const auto prof = perimeter_profile(rho, cfg.window, cfg.sigma, cfg.perimeter_samples);
  return minimize_E(cfg, epsilon, prof, slice_extent(rho, cfg.window));
}

MinimizeResult minimize_E(const SweepConfig& cfg, double epsilon, const PerimeterProfile& perimeter, double extent) {
  const auto e = EnergyParams::from_kappa(epsilon, cfg.kappa, cfg.sigma);
  const auto p = ProfileParams::from(e);
  p.validate();
  if (!(extent > cfg.sigma)) throw DomainError("window does not reach past the collar");
  const auto& opt = cfg.optimizer;
  const double pi = std::numbers::pi;
  const double Z = cfg.height;

  LogPolarGrid g;
  g.nth = opt.angular_cells;
  g.step = pi / g.nth;
  g.x_min = p.log_inner_radius() - 4.0;
  const double x_max = std::log(std::hypot(extent, Z));
  g.nx = static_cast<int>(std::ceil((x_max - g.x_min) / g.step));
  const std::size_t N = static_cast<std::size_t>(g.nx + 1) * (g.nth + 1);
  g.active.assign(N, 0);
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nth; ++j) {
      const double s = g.s(i, j), z = g.z(i, j);
      g.active[g.index(i, j)] = std::abs(s) <= extent * (1 + 1e-12) && z <= Z * (1 + 1e-12);
    }

  Problem prob;
  prob.eps = epsilon;
  prob.free.assign(N, 0);
  std::vector<double> u(N, 0.0);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nth; ++j) {
      const std::size_t k = g.index(i, j);
      if (!g.active[k]) continue;
      const double s = g.s(i, j), z = g.z(i, j);
      const bool edge = j == 0 || j == g.nth;
      const bool pinned = edge && std::abs(s) >= cfg.sigma;
      if (pinned) {
        u[k] = s > 0.0 ? 1.0 : 0.0;
        continue;
      }
      prob.free[k] = 1;
      u[k] = opt.warm_start ? recovery_value(s, z, p) : 0.5;
      if (opt.init_noise > 0.0) u[k] = std::clamp(u[k] + opt.init_noise * noise(rng), 0.0, 1.0);
    }

  // Conformal weights: in (x, th) the Dirichlet energy is int (U_x^2 + U_th^2) dx dth.
  const double xh = 0.5 * g.step;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nth; ++j) {
      const std::size_t k = g.index(i, j);
      if (!g.active[k]) continue;
      const double th = pi * j / g.nth;
      if (i < g.nx && g.active[g.index(i + 1, j)]) {
        const double sm = std::exp(g.x_min + i * g.step + xh) * std::cos(th);
        const double w = (j == 0 || j == g.nth) ? 0.5 : 1.0;
        prob.edges.push_back({k, g.index(i + 1, j), w * perimeter(sm)});
      }
      if (j < g.nth && g.active[g.index(i, j + 1)]) {
        const double sm = std::exp(g.x_min + i * g.step) * std::cos(th + 0.5 * g.step);
        const double w = (i == 0 || i == g.nx) ? 0.5 : 1.0;
        prob.edges.push_back({k, g.index(i, j + 1), w * perimeter(sm)});
      }
      if (j == 0 || j == g.nth) {
        const double x = g.x_min + i * g.step;
        const double w = i == 0 ? 0.5 : 1.0;
        const double P = perimeter(g.s(i, j));
        if (P > 0.0) prob.trace.push_back({k, std::exp(p.log_lambda + x + std::log(w * g.step * P))});
      }
    }

  // Jacobi preconditioner from the quadratic part plus the largest well curvature.
  std::vector<double> diag(N, 0.0);
  for (const auto& ed : prob.edges) {
    diag[ed.a] += 2.0 * epsilon * ed.w;
    diag[ed.b] += 2.0 * epsilon * ed.w;
  }
  for (const auto& t : prob.trace) diag[t.node] += 2.0 * t.c;

  MinimizeResult res;
  res.grid = g;
  double E = prob.energy(u);
  res.initial_energy = E;
  res.history.push_back(E);
  double tau = opt.step;
  std::vector<double> grad(N), trial(N);
  for (int it = 0; it < opt.max_iters; ++it) {
    prob.gradient(u, grad);
    double E_new = 0.0;
    int halvings = 0;
    for (;;) {
      for (std::size_t k = 0; k < N; ++k)
        trial[k] = prob.free[k] && diag[k] > 0.0 ? std::clamp(u[k] - tau * grad[k] / diag[k], 0.0, 1.0) : u[k];
      E_new = prob.energy(trial);
      if (E_new <= E) break;
      if (++halvings > 10) throw InternalError("minimize_E: energy increased after 10 step halvings");
      tau *= 0.5;
    }
    u.swap(trial);
    const double drop = E - E_new;
    E = E_new;
    res.history.push_back(E);
    res.iterations = it + 1;
    if (drop <= opt.tolerance * std::abs(E)) {
      res.converged = true;
      break;
    }
  }
  res.energy = E;
  res.values = std::move(u);
  return res;
}

CompactnessReport compactness_probe(const std::vector<ScalarField>& traces, const Window& window) {
  CompactnessReport rep;
  for (const auto& f : traces) {
    f.validate();
    if (!(f.spec == traces.front().spec)) throw ConfigError("traces live on different lattices");
    const Lattice lat(f.spec);
    std::vector<double> m(f.values.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(std::abs(f.values[i]), std::abs(1.0 - f.values[i]));
    rep.gaps.push_back(integrate_field(lat, m, window));
  }
  rep.decreasing = rep.gaps.size() >= 2;
  for (std::size_t i = 1; i < rep.gaps.size(); ++i)
    if (rep.gaps[i] > rep.gaps[i - 1]) rep.decreasing = false;
  return rep;
}

}  // namespace hgamma
