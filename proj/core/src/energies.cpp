#include "hgamma/energies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "hgamma/errors.hpp"

namespace hgamma {

namespace {

using Gauss8 = boost::math::quadrature::gauss<double, 8>;

// Fold s into [0, 1] by reflecting about 0 and 1.
double fold(double s, double* sign) {
  double r = std::fmod(std::abs(s), 2.0);
  double sg = s < 0.0 ? -1.0 : 1.0;
  if (r > 1.0) {
    r = 2.0 - r;
    sg = -sg;
  }
  if (sign) *sign = sg;
  return r;
}

}  // namespace

double DoubleWell::value(double s) const {
  const double r = fold(s, nullptr);
  return r * r * (1.0 - r) * (1.0 - r);
}

double DoubleWell::deriv(double s) const {
  double sg = 1.0;
  const double r = fold(s, &sg);
  return sg * 2.0 * r * (1.0 - r) * (1.0 - 2.0 * r);
}

EnergyParams EnergyParams::from_kappa(double epsilon, double kappa, double sigma) {
  EnergyParams p;
  p.epsilon = epsilon;
  p.kappa = kappa;
  p.log_lambda = kappa / epsilon;
  p.t_eps = epsilon;
  p.sigma = sigma;
  p.validate();
  return p;
}

double EnergyParams::lambda() const { return std::exp(log_lambda); }
double EnergyParams::line_tension() const { return kappa / std::numbers::pi; }
double EnergyParams::inner_radius() const { return std::exp(log_inner_radius()); }
double EnergyParams::log_inner_radius() const { return std::log(epsilon) - log_lambda; }

double EnergyParams::scale_by_lambda(double x) const {
  if (x < 0.0) throw DomainError("scale_by_lambda needs a nonnegative argument");
  if (x == 0.0) return 0.0;
  return std::exp(log_lambda + std::log(x));
}

void EnergyParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (!std::isfinite(log_lambda)) throw ConfigError("log lambda must be finite");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive");
  if (!(t_eps > 0.0)) throw ConfigError("t_eps must be positive");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
}

CylinderField::CylinderField(LatticeSpec s, std::vector<double> levels)
    : spec(s), z(std::move(levels)), values(spec.node_count() * z.size(), 0.0) {}

std::span<const double> CylinderField::level(std::size_t l) const {
  return std::span<const double>(values).subspan(l * nodes(), nodes());
}

std::vector<double> CylinderField::trace() const {
  auto t = level(0);
  return {t.begin(), t.end()};
}

void CylinderField::validate() const {
  spec.validate();
  if (z.size() < 2) throw ConfigError("cylinder field needs at least two z levels");
  if (z.front() != 0.0) throw ConfigError("first z level must be 0");
  for (std::size_t l = 1; l < z.size(); ++l)
    if (!(z[l] > z[l - 1])) throw ConfigError("z levels must increase");
  if (values.size() != spec.node_count() * z.size()) throw ConfigError("cylinder field has wrong size");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("cylinder field is not finite");
}

std::vector<double> uniform_levels(double height, int intervals) {
  if (!(height > 0.0) || intervals < 1) throw ConfigError("uniform_levels needs positive height and intervals");
  std::vector<double> z(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) z[static_cast<std::size_t>(i)] = height * i / intervals;
  return z;
}

namespace {

void check_inside(const Window& w, const LatticeSpec& s, const char* what) {
  if (static_cast<int>(w.lo.size()) != s.dims() || w.hi.size() != w.lo.size())
    throw ConfigError(std::string(what) + " has the wrong dimension");
  const double tol = 1e-9 * s.h;
  for (int a = 0; a < s.dims(); ++a) {
    const double half = a == s.dims() - 1 ? s.t_half() : s.eta_half();
    const auto i = static_cast<std::size_t>(a);
    const bool lo_ok = std::isinf(w.lo[i]) || w.lo[i] >= -half - tol;
    const bool hi_ok = std::isinf(w.hi[i]) || w.hi[i] <= half + tol;
    if (!lo_ok || !hi_ok) throw DomainError(std::string(what) + " leaves the lattice box on axis " + std::to_string(a));
  }
}

double overlap(double a, double b, double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); }

}  // namespace

EnergyParts energy_E(const CylinderField& u, const EnergyParams& p, const CylinderRegion& A, const Window& A_boundary) {
  u.validate();
  p.validate();
  check_inside(A.base, u.spec, "region");
  check_inside(A_boundary, u.spec, "boundary region");
  const double ztol = 1e-12 * std::max(1.0, u.z.back());
  if (!(A.z_lo <= A.z_hi) || A.z_lo < -ztol || A.z_hi > u.z.back() + ztol)
    throw DomainError("region z range leaves the cylinder");

  const Lattice lat(u.spec);
  const std::size_t N = lat.size();
  const std::size_t L = u.z.size();
  const int n = u.spec.n;
  const double h = u.spec.h;

  // Level weights: level l owns the half intervals next to it.
  std::vector<double> zw(L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    const double a = l == 0 ? u.z[0] : 0.5 * (u.z[l - 1] + u.z[l]);
    const double b = l + 1 == L ? u.z[l] : 0.5 * (u.z[l] + u.z[l + 1]);
    zw[l] = overlap(a, b, A.z_lo, A.z_hi);
  }

  const std::vector<double> nw = trapezoid_weights(lat, A.base);
  std::vector<std::vector<int>> steps;
  for (int i = 0; i < 2 * n; ++i) {
    std::vector<int> a(static_cast<std::size_t>(2 * n), 0);
    a[static_cast<std::size_t>(i)] = 1;
    steps.push_back(a);
    a[static_cast<std::size_t>(i)] = -1;
    steps.push_back(a);
  }

  double horiz = 0.0;
  double vert = 0.0;
  std::vector<std::size_t> nb(steps.size());
  for (std::size_t idx = 0; idx < N; ++idx) {
    if (nw[idx] == 0.0) continue;
    bool have_nb = false;
    for (std::size_t l = 0; l < L; ++l) {
      if (zw[l] == 0.0) continue;
      if (!have_nb) {
        for (std::size_t k = 0; k < steps.size(); ++k) {
          nb[k] = lat.shifted(idx, steps[k]);
          if (nb[k] == Lattice::npos) throw DomainError("horizontal stencil leaves the lattice box");
        }
        have_nb = true;
      }
      const double c = u.at(idx, l);
      double g2 = 0.0;
      for (std::size_t k = 0; k < steps.size(); k += 2) {
        const double fwd = (u.at(nb[k], l) - c) / h;
        const double bwd = (c - u.at(nb[k + 1], l)) / h;
        g2 += 0.5 * (fwd * fwd + bwd * bwd);
      }
      horiz += nw[idx] * zw[l] * g2;
    }
    for (std::size_t l = 0; l + 1 < L; ++l) {
      const double len = overlap(u.z[l], u.z[l + 1], A.z_lo, A.z_hi);
      if (len == 0.0) continue;
      const double dz = u.z[l + 1] - u.z[l];
      const double d = (u.at(idx, l + 1) - u.at(idx, l)) / dz;
      vert += nw[idx] * len * d * d;
    }
  }

  const std::vector<double> bw = trapezoid_weights(lat, A_boundary);
  double pot = 0.0;
  for (std::size_t idx = 0; idx < N; ++idx)
    if (bw[idx] != 0.0) pot += bw[idx] * p.well(u.at(idx, 0));

  EnergyParts out;
  out.bulk = p.epsilon * (horiz + vert);
  out.boundary = p.scale_by_lambda(pot);
  out.total = out.bulk + out.boundary;
  return out;
}

namespace {

// int_0^1 u log(alpha + u) du
double J(double alpha) {
  if (alpha == 0.0) return -0.25;
  if (alpha > 2.0)
    return 0.5 * std::log(alpha) + Gauss8::integrate([alpha](double x) { return x * std::log1p(x / alpha); }, 0.0, 1.0);
  return 0.5 * (1.0 - alpha * alpha) * std::log1p(alpha) - 0.25 + 0.5 * alpha + 0.5 * alpha * alpha * std::log(alpha);
}

// int_0^1 log(alpha + u) du
double M(double alpha) {
  if (alpha == 0.0) return -1.0;
  if (alpha > 2.0) return std::log(alpha) + Gauss8::integrate([alpha](double x) { return std::log1p(x / alpha); }, 0.0, 1.0);
  return (1.0 + alpha) * std::log1p(alpha) - alpha * std::log(alpha) - 1.0;
}

double Phi(double x) { return x <= 0.0 ? 0.0 : 0.5 * x * x * std::log(x) - 0.75 * x * x; }
double F1(double x) { return x <= 0.0 ? 0.0 : x * std::log(x) - x; }

// int int log(b - a) over [a0, a1] x [b0, b1] with a1 <= b0.
double log_diff_integral(double a0, double a1, double b0, double b1) {
  const double da = a1 - a0;
  const double db = b1 - b0;
  const double S = std::max(da, db);
  if (std::min(da, db) > 1e-3 * S) {
    const double x0 = (b0 - a0) / S, x1 = (b1 - a0) / S, x2 = (b0 - a1) / S, x3 = (b1 - a1) / S;
    return da * db * std::log(S) + S * S * (Phi(x1) - Phi(x3) - Phi(x0) + Phi(x2));
  }
  if (da <= db)
    return Gauss8::integrate([&](double a) { return F1(b1 - a) - F1(b0 - a); }, a0, a1);
  return Gauss8::integrate([&](double b) { return F1(b - a0) - F1(b - a1); }, b0, b1);
}

// int int_{cell_k x cell_m} Psi for cell_k left of or equal to cell_m.
double cell_pair(double L, double U, double k0, double k1, double m0, double m1) {
  const double dk = k1 - k0;
  const double dm = m1 - m0;
  const double logI = std::log(U - L);
  if (k0 == m0) {
    const double A = dk * dk * (std::log(dk) + 2.0 * J((k0 - L) / dk));
    const double B = dk * dk * (std::log(dk) + 2.0 * J((U - k1) / dk));
    const double D = dk * dk * (std::log(dk) - 1.5);
    return 2.0 * (A + B - D - dk * dk * logI);
  }
  const double gap = m0 - k1;
  if (gap >= 4.0 * std::max(dk, dm)) {
    return Gauss8::integrate(
        [&](double a) {
          return Gauss8::integrate(
              [&](double b) { return std::log((b - L) * (U - a) / ((b - a) * (U - L))); }, m0, m1);
        },
        k0, k1) * 2.0;
  }
  const double A = dk * dm * (std::log(dm) + M((m0 - L) / dm));
  const double B = dk * dm * (std::log(dk) + M((U - k1) / dk));
  const double D = log_diff_integral(k0, k1, m0, m1);
  return 2.0 * (A + B - D - dk * dm * logI);
}

void check_breakpoints(std::span<const double> s, std::span<const double> v) {
  if (s.size() != v.size()) throw ConfigError("breakpoints and values differ in length");
  if (s.size() < 2) throw ConfigError("need at least two breakpoints");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(v[i])) throw DomainError("non-finite sample");
    if (i > 0 && !(s[i] > s[i - 1])) throw ConfigError("breakpoints must increase");
  }
}

}  // namespace

double fractional_seminorm(std::span<const double> s, std::span<const double> v) {
  check_breakpoints(s, v);
  const double L = s.front();
  const double U = s.back();
  std::vector<std::size_t> active;
  std::vector<double> slope;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double g = (v[k + 1] - v[k]) / (s[k + 1] - s[k]);
    if (g != 0.0) {
      active.push_back(k);
      slope.push_back(g);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::size_t k = active[i];
    total += slope[i] * slope[i] * cell_pair(L, U, s[k], s[k + 1], s[k], s[k + 1]);
    double row = 0.0;
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      const std::size_t m = active[j];
      row += slope[j] * cell_pair(L, U, s[k], s[k + 1], s[m], s[m + 1]);
    }
    total += 2.0 * slope[i] * row;
  }
  return std::max(0.0, total);
}

double energy_G_piecewise(std::span<const double> s, std::span<const double> v, const EnergyParams& p) {
  p.validate();
  const double kernel = fractional_seminorm(s, v);
  double pot = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double v0 = v[k], v1 = v[k + 1];
    pot += Gauss8::integrate([&](double x) { return p.well(v0 + (v1 - v0) * x); }, 0.0, 1.0) * (s[k + 1] - s[k]);
  }
  return p.epsilon / (2.0 * std::numbers::pi) * kernel + p.scale_by_lambda(pot);
}

double energy_G(std::span<const double> v, double lo, double hi, const EnergyParams& p) {
  if (v.size() < 16) throw ConfigError("energy_G needs at least 16 samples");
  if (!(hi > lo)) throw ConfigError("energy_G needs lo < hi");
  std::vector<double> s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    s[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(v.size() - 1);
  return energy_G_piecewise(s, v, p);
}

double trace_ratio(std::span<const double> u, int nx, int nz) {
  if (nx < 2 || nz < 2) throw ConfigError("trace_ratio needs at least a 2 x 2 grid");
  if (u.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz))
    throw ConfigError("trace_ratio grid size mismatch");
  const double hx = 1.0 / (nx - 1);
  const double hz = 1.0 / (nz - 1);
  auto at = [&](int is, int iz) { return u[static_cast<std::size_t>(iz) * nx + is]; };
  double dir = 0.0;
  for (int iz = 0; iz + 1 < nz; ++iz)
    for (int is = 0; is + 1 < nx; ++is) {
      const double A = at(is + 1, iz) - at(is, iz);
      const double B = at(is + 1, iz + 1) - at(is, iz + 1);
      const double C = at(is, iz + 1) - at(is, iz);
      const double D = at(is + 1, iz + 1) - at(is + 1, iz);
      dir += (hz / hx) * (A * A + A * B + B * B) / 3.0 + (hx / hz) * (C * C + C * D + D * D) / 3.0;
    }
  if (dir <= 0.0) return 0.0;
  std::vector<double> s(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) s[static_cast<std::size_t>(i)] = i * hx;
  return fractional_seminorm(s, u.first(static_cast<std::size_t>(nx))) / dir;
}

}  // namespace hgamma
