#include "hgamma/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hgamma/errors.hpp"

namespace hgamma {

namespace {

constexpr double pi = std::numbers::pi;
using Gauss20 = boost::math::quadrature::gauss<double, 20>;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
double gk(F f, double a, double b, double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  return GK::integrate(f, a, b, 12, tol);
}

// int_a^b f(z) dz over z = e^y.
template <class F>
double gk_log(F f, double a, double b, double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  return gk([&](double y) {
    const double z = std::exp(y);
    return f(z) * z;
  }, std::log(a), std::log(b), tol);
}

// int_0^top f(z) dz for an integrand with the profile's scales: smooth on
// [0, zc] (inner disk), then decaying like 1 / (s^2 + z^2).
template <class F>
double column(F f, double s, double top, double r0) {
  const double as = std::abs(s);
  const double zc = as < r0 ? std::sqrt(r0 * r0 - s * s) : 0.0;
  double out = gk(f, 0.0, std::min(zc, top));
  if (top <= zc) return out;
  const double knee = std::max(as, zc);
  out += gk(f, zc, std::min(knee, top));
  if (top > knee) out += gk_log(f, std::max(knee, 1e-300), top);
  return out;
}

double sq(double x) { return x * x; }

}  // namespace

ProfileParams ProfileParams::from(const EnergyParams& e) {
  ProfileParams p;
  p.epsilon = e.epsilon;
  p.log_lambda = e.log_lambda;
  p.t_eps = e.t_eps;
  p.sigma = e.sigma;
  return p;
}

double ProfileParams::log_inner_radius() const { return std::log(epsilon) - log_lambda; }
double ProfileParams::inner_radius() const { return std::exp(log_inner_radius()); }

void ProfileParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(log_lambda)) throw ConfigError("profile needs eps > 0 and finite log lambda");
  if (!(t_eps > 0.0) || !(sigma > t_eps)) throw DomainError("profile needs 0 < t_eps < sigma");
  if (!(log_inner_radius() < std::log(t_eps))) throw DomainError("profile needs eps / lambda < t_eps");
  if (log_inner_radius() < -300.0) throw DomainError("inner radius eps / lambda underflows");
}

double profile(double s, double z, const ProfileParams& p) {
  if (z < 0.0) throw DomainError("profile needs z >= 0");
  const double r = std::hypot(s, z);
  const double th = std::atan2(z, s);
  const double r0 = p.inner_radius();
  if (r <= r0) return std::clamp(0.5 + 0.5 * (r / r0) * (1.0 - 2.0 * th / pi), 0.0, 1.0);
  return 1.0 - th / pi;
}

std::array<double, 2> profile_gradient(double s, double z, const ProfileParams& p) {
  if (z < 0.0) throw DomainError("profile needs z >= 0");
  const double r = std::hypot(s, z);
  const double r0 = p.inner_radius();
  if (r == 0.0) return {0.5 / r0, -1.0 / (pi * r0)};
  if (r <= r0) {
    const double th = std::atan2(z, s);
    const double a = 1.0 - 2.0 * th / pi;
    const double k = 0.5 / r0;
    return {k * (a * s / r + (2.0 / pi) * z / r), k * (a * z / r - (2.0 / pi) * s / r)};
  }
  const double r2 = r * r;
  return {z / (pi * r2), -s / (pi * r2)};
}

GradientBounds profile_gradient_bounds(const ProfileParams& p, int samples) {
  p.validate();
  if (samples < 4) throw ConfigError("profile_gradient_bounds needs at least 4 samples");
  const double r0 = p.inner_radius();
  const double lo = p.log_inner_radius() - std::log(100.0);
  const double hi = std::log(p.sigma);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  GradientBounds out;
  for (int i = 0; i < samples; ++i) {
    const double r = std::exp(lo + (hi - lo) * (i + 0.5) / samples);
    const double th = pi * std::fmod(0.05 + golden * i, 1.0);
    const double s = r * std::cos(th), z = r * std::sin(th);
    const auto g = profile_gradient(s, z, p);
    const double gn = std::hypot(g[0], g[1]);
    const bool inner = r <= r0;

    // Central differences stay inside one regime.
    const double d = 1e-4 * std::min(r, std::abs(r - r0)) + 1e-300;
    const bool safe = std::abs(r - r0) > 20.0 * d && z > 2.0 * d;
    if (safe) {
      const double fs = (profile(s + d, z, p) - profile(s - d, z, p)) / (2 * d);
      const double fz = (profile(s, z + d, p) - profile(s, z - d, p)) / (2 * d);
      out.max_fd_error = std::max(out.max_fd_error, std::hypot(fs - g[0], fz - g[1]) / gn);
      const auto gsp = profile_gradient(s + d, z, p), gsm = profile_gradient(s - d, z, p);
      const auto gzp = profile_gradient(s, z + d, p), gzm = profile_gradient(s, z - d, p);
      const double hss = (gsp[0] - gsm[0]) / (2 * d), hsz = (gsp[1] - gsm[1]) / (2 * d);
      const double hzs = (gzp[0] - gzm[0]) / (2 * d), hzz = (gzp[1] - gzm[1]) / (2 * d);
      const double hn = std::sqrt(hss * hss + hsz * hsz + hzs * hzs + hzz * hzz);
      if (inner)
        out.second_inner = std::max(out.second_inner, hn * r * r0);
      else
        out.second_outer = std::max(out.second_outer, hn * r * r);
    }
    if (inner)
      out.first_inner = std::max(out.first_inner, gn * r0);
    else
      out.first_outer = std::max(out.first_outer, gn * r);
    ++out.samples;
  }
  return out;
}

LemmaReport lemma_calculation(const ProfileParams& p) {
  p.validate();
  const double r0 = p.inner_radius();
  const double lr0 = p.log_inner_radius();
  // (|grad w| r)^2 or (|grad w| r0)^2 at polar (r, th).
  auto scaled = [&](double r, double th, double scale) {
    const auto g = profile_gradient(r * std::cos(th), r * std::sin(th), p);
    return sq(g[0] * scale) + sq(g[1] * scale);
  };
  // eps int_0^pi int_0^r0 |grad w|^2 r dr dth with r = r0 x.
  const double disk = Gauss20::integrate(
      [&](double th) {
        return Gauss20::integrate([&](double x) { return scaled(r0 * x, th, r0) * x; }, 0.0, 1.0);
      },
      0.0, pi);
  // eps int int |grad w|^2 r^2 d(log r) dth over a ring.
  auto ring = [&](double la, double lb) {
    return Gauss20::integrate(
        [&](double th) {
          return gk([&](double y) {
            const double r = std::exp(y);
            return scaled(r, th, r);
          }, la, lb, 1e-12);
        },
        0.0, pi);
  };
  LemmaReport out;
  out.inner_energy = p.epsilon * (disk + ring(lr0, std::log(p.t_eps)));
  out.annulus_energy = p.epsilon * ring(std::log(p.t_eps), std::log(p.sigma));

  DoubleWell V;
  // lambda int_{-r0}^{r0} V(w(s, 0)) ds = eps int_{-1}^{1} V(w(r0 x, 0)) dx.
  const double core = Gauss20::integrate([&](double x) { return V(profile(r0 * x, 0.0, p)); }, -1.0, 0.0) +
                      Gauss20::integrate([&](double x) { return V(profile(r0 * x, 0.0, p)); }, 0.0, 1.0);
  out.boundary_inner = p.epsilon * core;
  double outer = 0.0;
  for (double sign : {-1.0, 1.0})
    outer += gk([&](double y) {
      const double s = std::exp(y);
      return V(profile(sign * s, 0.0, p)) * s;
    }, lr0, std::log(p.sigma));
  out.boundary_outer = outer > 0.0 ? std::exp(p.log_lambda + std::log(outer)) : 0.0;

  out.log_scale = p.epsilon * (p.log_lambda - std::log(p.epsilon));
  out.inner_target = out.log_scale / pi;
  out.inner_ratio = out.inner_energy / out.inner_target;
  out.annulus_ratio = out.annulus_energy / out.log_scale;
  out.boundary_inner_ratio = out.boundary_inner / p.epsilon;
  out.boundary_outer_ratio = out.boundary_outer / p.epsilon;
  return out;
}

namespace {

double well_term(double value, const ProfileParams& p) {
  const double v = DoubleWell{}(value);
  return v > 0.0 ? std::exp(p.log_lambda + std::log(v)) : 0.0;
}

double grad_sq(double s, double z, const ProfileParams& p) {
  const auto g = profile_gradient(s, z, p);
  return g[0] * g[0] + g[1] * g[1];
}

}  // namespace

double h_profile(double s, const ProfileParams& p) {
  p.validate();
  const double t = p.t_eps;
  if (std::abs(s) > t * (1.0 + 1e-12)) throw DomainError("h_profile needs |s| <= t_eps");
  const double top = std::sqrt(std::max(0.0, t * t - s * s));
  const double r0 = p.inner_radius();
  const double bulk = column([&](double z) { return grad_sq(s, z, p); }, s, top, r0);
  return p.epsilon * bulk + well_term(profile(s, 0.0, p), p);
}

double integrate_h(const ProfileParams& p) {
  p.validate();
  const double r0 = p.inner_radius();
  // h is even: twice the integral over [0, t], split at r0 and taken in log s beyond.
  const double core =
      r0 * gk([&](double phi) { return h_profile(r0 * std::cos(phi), p) * std::sin(phi); }, 0.0, 0.5 * pi, 1e-9);
  const double tail = gk([&](double y) {
    const double s = std::exp(y);
    return h_profile(std::min(s, p.t_eps), p) * s;
  }, p.log_inner_radius(), std::log(p.t_eps), 1e-9);
  return 2.0 * (core + tail);
}

double recovery_value(double s, double z, const ProfileParams& p) {
  const double as = std::abs(s);
  const double phase = s > 0.0 ? 1.0 : 0.0;
  if (as >= p.sigma) return phase;
  const double w = profile(s, z, p);
  if (as <= p.t_eps) return w;
  const double b = (as - p.t_eps) / (p.sigma - p.t_eps);
  return (1.0 - b) * w + b * phase;
}

std::array<double, 2> recovery_gradient(double s, double z, const ProfileParams& p) {
  const double as = std::abs(s);
  if (as >= p.sigma) return {0.0, 0.0};
  const auto g = profile_gradient(s, z, p);
  if (as <= p.t_eps) return g;
  const double phase = s > 0.0 ? 1.0 : 0.0;
  const double b = (as - p.t_eps) / (p.sigma - p.t_eps);
  const double db = (s > 0.0 ? 1.0 : -1.0) / (p.sigma - p.t_eps);
  return {(1.0 - b) * g[0] + db * (phase - profile(s, z, p)), (1.0 - b) * g[1]};
}

CylinderField build_recovery(const SignedDistanceField& rho, const ProfileParams& p, std::vector<double> levels) {
  p.validate();
  if (!(p.sigma < rho.spec.eta_half())) throw DomainError("collar width sigma exceeds the lattice window");
  CylinderField u(rho.spec, std::move(levels));
  if (u.values.size() != rho.values.size() * u.z.size()) throw ConfigError("distance field does not match lattice");
  for (std::size_t l = 0; l < u.z.size(); ++l)
    for (std::size_t i = 0; i < rho.values.size(); ++i) u.at(i, l) = recovery_value(rho.values[i], u.z[l], p);
  u.validate();
  return u;
}

SliceEnergy slice_energy(double s, double height, const ProfileParams& p) {
  SliceEnergy out;
  if (std::abs(s) >= p.sigma || !(height > 0.0)) return out;
  const double r0 = p.inner_radius();
  const double bulk = column([&](double z) {
    const auto g = recovery_gradient(s, z, p);
    return g[0] * g[0] + g[1] * g[1];
  }, s, height, r0);
  out.bulk = p.epsilon * bulk;
  out.boundary = well_term(recovery_value(s, 0.0, p), p);
  return out;
}

RecoveryEnergy recovery_energy(const std::function<double(double)>& perimeter, double height,
                               const ProfileParams& p) {
  p.validate();
  if (!(height > 0.0)) throw ConfigError("cylinder height must be positive");
  const double r0 = p.inner_radius();
  const double lr0 = p.log_inner_radius();
  RecoveryEnergy out;
  const double tol = 1e-8;
  for (double sign : {-1.0, 1.0}) {
    // Core |s| < r0 with s = r0 cos(phi); the inner disk edge sqrt(r0^2 - s^2) is smooth in phi.
    auto core = [&](auto f) {
      return r0 * gk([&](double phi) {
        const double s = sign * r0 * std::cos(phi);
        return f(s) * std::sin(phi);
      }, 0.0, 0.5 * pi, tol);
    };
    out.bulk += core([&](double s) { return perimeter(s) * slice_energy(s, height, p).bulk; });
    out.boundary += core([&](double s) { return perimeter(s) * slice_energy(s, height, p).boundary; });
    out.trace_gap += core([&](double s) {
      return perimeter(s) * std::abs(recovery_value(s, 0.0, p) - (s > 0.0 ? 1.0 : 0.0));
    });
    // r0 < |s| < sigma in log |s|, split at t_eps where the blend starts.
    auto logpiece = [&](double a, double b) {
      return gk([&](double y) {
        const double s = sign * std::exp(y);
        return perimeter(s) * slice_energy(s, height, p).bulk * std::exp(y);
      }, a, b, tol);
    };
    out.bulk += logpiece(lr0, std::log(p.t_eps)) + logpiece(std::log(p.t_eps), std::log(p.sigma));
  }
  out.total = out.bulk + out.boundary;
  return out;
}

double tube_volume_Z(const SignedDistanceField& rho, double t, const Window& window) {
  if (t == 0.0) return 0.0;
  if (!(t >= rho.spec.h)) throw DomainError("tube radius below the lattice resolution");
  const Lattice lat(rho.spec);
  return band_volume(lat, rho.values, window, -t, t, 8);
}

double tube_delta(const SignedDistanceField& rho, double t, double perimeter, const Window& window) {
  return tube_volume_Z(rho, t, window) / t - 2.0 * perimeter;
}

}  // namespace hgamma
