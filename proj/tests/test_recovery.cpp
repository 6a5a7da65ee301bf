#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hgamma/errors.hpp"
#include "hgamma/horizontal_calculus.hpp"
#include "hgamma/recovery.hpp"
#include "oracles.hpp"

using namespace hgamma;

namespace {

const double pi = std::numbers::pi;

ProfileParams params(double eps, double kappa, double sigma = 0.5) {
  return ProfileParams::from(EnergyParams::from_kappa(eps, kappa, sigma));
}

}  // namespace

TEST_CASE("profile values") {
  const auto p = params(0.1, 1.0);
  const double r0 = p.inner_radius();
  CHECK(r0 == doctest::Approx(0.1 * std::exp(-10.0)));
  CHECK(profile(3 * r0, 0.0, p) == 1.0);
  CHECK(profile(0.2, 0.0, p) == 1.0);
  CHECK(profile(-3 * r0, 0.0, p) == 0.0);
  CHECK(profile(0.0, 0.3, p) == doctest::Approx(0.5));
  // Inner regime is the linear ramp 1/2 + r / (2 r0) on the ray th = 0.
  CHECK(profile(0.5 * r0, 0.0, p) == doctest::Approx(0.75));
  CHECK(profile(-0.5 * r0, 0.0, p) == doctest::Approx(0.25));
  CHECK_THROWS_AS(profile(0.1, -1e-3, p), DomainError);

  for (double r : {0.3 * r0, r0, 7 * r0, 0.01, 0.4}) {
    double prev = 2.0;
    for (int k = 0; k <= 16; ++k) {
      const double th = pi * k / 16;
      const double s = r * std::cos(th), z = r * std::sin(th);
      const double w = profile(s, z, p);
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
      CHECK(w <= prev + 1e-15);
      prev = w;
      CHECK(profile(-s, z, p) == doctest::Approx(1.0 - w).epsilon(1e-12));
    }
  }
  // Continuity across r = r0.
  for (double th : {0.1, 1.0, 2.5})
    CHECK(profile(r0 * (1 - 1e-9) * std::cos(th), r0 * (1 - 1e-9) * std::sin(th), p) ==
          doctest::Approx(profile(r0 * (1 + 1e-9) * std::cos(th), r0 * (1 + 1e-9) * std::sin(th), p)));
}

TEST_CASE("profile gradient") {
  const auto p = params(0.05, 1.0);
  const double r0 = p.inner_radius();
  // Outer regime: |grad w| = 1 / (pi r).
  for (double th : {0.0, 0.7, 2.0, pi}) {
    const double r = 2 * r0;
    const auto g = profile_gradient(r * std::cos(th), r * std::sin(th), p);
    CHECK(std::hypot(g[0], g[1]) * r == doctest::Approx(1.0 / pi));
    CHECK(std::abs(g[0]) * r <= 1.0);
  }
  // Finite differences away from r = r0.
  for (double r : {0.2 * r0, 0.6 * r0, 3 * r0, 1e-3, 0.3})
    for (double th : {0.3, 1.2, 2.8}) {
      const double s = r * std::cos(th), z = r * std::sin(th), d = 1e-6 * r;
      const auto g = profile_gradient(s, z, p);
      const double fs = (profile(s + d, z, p) - profile(s - d, z, p)) / (2 * d);
      const double fz = (profile(s, z + d, p) - profile(s, z - d, p)) / (2 * d);
      const double scale = std::hypot(g[0], g[1]);
      CHECK(std::abs(fs - g[0]) <= 1e-4 * scale);
      CHECK(std::abs(fz - g[1]) <= 1e-4 * scale);
    }

  const auto b = profile_gradient_bounds(p, 500);
  CHECK(b.samples == 500);
  CHECK(b.first_outer == doctest::Approx(1.0 / pi).epsilon(1e-9));
  // Inner |grad w| r0 = sqrt((1 - 2 th / pi)^2 / 4 + 1 / pi^2) <= sqrt(1/4 + 1/pi^2).
  CHECK(b.first_inner <= std::sqrt(0.25 + 1 / (pi * pi)) + 1e-12);
  CHECK(b.first_inner > 0.3);
  // Outer Hessian has Frobenius norm sqrt(2) / (pi r^2).
  CHECK(b.second_outer == doctest::Approx(std::sqrt(2.0) / pi).epsilon(1e-3));
  CHECK(b.second_inner > 0.0);
  CHECK(b.max_fd_error < 1e-4);
}

TEST_CASE("lemma integrals match closed forms") {
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto p = params(eps, 1.0);
    const auto L = lemma_calculation(p);
    const double log_t_r0 = std::log(p.t_eps) - p.log_inner_radius();
    CHECK(L.inner_energy == doctest::Approx(eps * (pi / 24 + 1 / (2 * pi) + log_t_r0 / pi)).epsilon(1e-9));
    CHECK(L.annulus_energy == doctest::Approx(eps / pi * std::log(p.sigma / p.t_eps)).epsilon(1e-9));
    CHECK(L.boundary_inner == doctest::Approx(eps / 15.0).epsilon(1e-9));
    CHECK(L.boundary_outer == 0.0);
    CHECK(L.inner_target == doctest::Approx(eps / pi * (1.0 / eps - std::log(eps))));
  }
}

TEST_CASE("lemma asymptotics along the ladder") {
  double prev_inner = 0.0, prev_ann = 1.0;
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto L = lemma_calculation(params(eps, 1.0));
    CHECK(std::abs(1.0 - L.inner_ratio) < std::abs(1.0 - prev_inner));
    CHECK(L.annulus_ratio < prev_ann);
    CHECK(L.boundary_inner <= 0.2 * eps);
    CHECK(L.boundary_outer <= 0.2 * eps);
    prev_inner = L.inner_ratio;
    prev_ann = L.annulus_ratio;
  }
  CHECK(std::abs(prev_inner - 1.0) < 0.1);
  CHECK(prev_ann < 0.15);
  // The inner estimate does not see sigma.
  CHECK(lemma_calculation(params(0.05, 1.0, 0.3)).inner_ratio ==
        doctest::Approx(lemma_calculation(params(0.05, 1.0, 0.8)).inner_ratio).epsilon(1e-10));
}

TEST_CASE("regime violations") {
  auto p = params(0.1, 1.0);
  p.log_lambda = -5.0;
  CHECK_THROWS_AS(lemma_calculation(p), DomainError);
  auto q = params(0.1, 1.0);
  q.sigma = 0.05;
  CHECK_THROWS_AS(h_profile(0.0, q), DomainError);
  CHECK_THROWS_AS(h_profile(0.2, params(0.1, 1.0)), DomainError);
}

TEST_CASE("sliced energy h") {
  const auto p = params(0.05, 1.0);
  const double t = p.t_eps, r0 = p.inner_radius();
  CHECK(h_profile(t, p) == 0.0);
  CHECK(h_profile(-t, p) == 0.0);
  for (double s : {0.3 * r0, 2 * r0, 1e-6, 0.01, 0.049}) {
    CHECK(h_profile(s, p) == doctest::Approx(h_profile(-s, p)).epsilon(1e-10));
  }
  // Outside the inner disk the column is int dz / (pi^2 (s^2 + z^2)).
  for (double s : {5 * r0, 1e-8, 0.02}) {
    const double top = std::sqrt(t * t - s * s);
    CHECK(h_profile(s, p) == doctest::Approx(p.epsilon / (pi * pi) * std::atan(top / s) / s).epsilon(1e-9));
  }
  // |s| > r0 by an independent log-s quadrature of the closed form; |s| < r0
  // holds the inner half disk, the boundary term eps / 15 and the sector
  // {|s| < r0 < r < t} worth (2 / pi^2) int_0^1 asin(u) / u du = log(2) / pi.
  const double tail = oracle::gauss(
      [&](double y) {
        const double s = std::exp(y);
        return p.epsilon / (pi * pi) * std::atan(std::sqrt(t * t - s * s) / s);
      },
      p.log_inner_radius(), std::log(t), 400);
  const double total = integrate_h(p);
  const double core = p.epsilon * (pi / 24 + 1 / (2 * pi) + 1.0 / 15.0 + std::log(2.0) / pi);
  CHECK(total == doctest::Approx(2 * tail + core).epsilon(1e-7));

  const auto small = params(0.025, 1.0);
  CHECK(integrate_h(small) == doctest::Approx(1.0 / pi).epsilon(0.1));
}

TEST_CASE("profile trace attains the line tension") {
  const double eps = 0.025, kappa = pi;
  const auto e = EnergyParams::from_kappa(eps, kappa);
  const double r0 = e.inner_radius();
  const std::vector<double> s{-1.0, -r0, r0, 1.0};
  std::vector<double> v;
  const auto p = ProfileParams::from(e);
  for (double x : s) v.push_back(profile(x, 0.0, p));
  CHECK(v == std::vector<double>{0.0, 0.0, 1.0, 1.0});
  const double G = energy_G_piecewise(s, v, e);
  CHECK(G == doctest::Approx(eps / (2 * pi) * oracle::ramp_G_kernel(1.0, 1.0, r0) + eps / 15.0).epsilon(1e-9));
  CHECK(G == doctest::Approx(kappa / pi).epsilon(0.1));
}

TEST_CASE("collar field") {
  const auto p = params(0.05, pi, 0.4);
  for (double z : {0.0, 0.1}) {
    CHECK(recovery_value(0.41, z, p) == 1.0);
    CHECK(recovery_value(-0.41, z, p) == 0.0);
    CHECK(recovery_value(0.03, z, p) == profile(0.03, z, p));
  }
  // Trace equals the phase everywhere outside the inner disk.
  for (double s : {0.001, 0.05, 0.2, 0.39}) {
    CHECK(recovery_value(s, 0.0, p) == 1.0);
    CHECK(recovery_value(-s, 0.0, p) == 0.0);
  }
  // Gradient against finite differences inside the blend.
  for (double s : {0.1, -0.2, 0.3})
    for (double z : {0.01, 0.2}) {
      const double d = 1e-7;
      const auto g = recovery_gradient(s, z, p);
      CHECK(g[0] == doctest::Approx((recovery_value(s + d, z, p) - recovery_value(s - d, z, p)) / (2 * d)).epsilon(1e-5));
      CHECK(g[1] == doctest::Approx((recovery_value(s, z + d, p) - recovery_value(s, z - d, p)) / (2 * d)).epsilon(1e-5));
    }
}

TEST_CASE("slice energies") {
  const auto p = params(0.05, pi);
  const double Z = 0.25;
  for (double s : {1e-10, 0.001, 0.04}) {
    const auto e = slice_energy(s, Z, p);
    CHECK(e.boundary == 0.0);
    CHECK(e.bulk == doctest::Approx(p.epsilon / (pi * pi) * std::atan(Z / s) / s).epsilon(1e-9));
  }
  // Blend region against an independent quadrature of finite-difference gradients.
  for (double s : {0.07, -0.3}) {
    auto dens = [&](double z) {
      const double d = 1e-6;
      const double us = (recovery_value(s + d, z, p) - recovery_value(s - d, z, p)) / (2 * d);
      const double zz = std::max(z, d);
      const double uz = (recovery_value(s, zz + d, p) - recovery_value(s, zz - d, p)) / (2 * d);
      return us * us + uz * uz;
    };
    const double ref = p.epsilon * oracle::gauss(dens, 0.0, Z, 200);
    CHECK(slice_energy(s, Z, p).bulk == doctest::Approx(ref).epsilon(1e-4));
  }
  CHECK(slice_energy(0.6, Z, p).bulk == 0.0);
}

TEST_CASE("recovery energy on a flat interface") {
  const double Z = 0.25;
  double prev = 10.0;
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto p = params(eps, pi);
    const auto E = recovery_energy([](double) { return 1.0; }, Z, p);
    CHECK(E.boundary == doctest::Approx(eps / 15.0).epsilon(1e-7));
    CHECK(E.trace_gap == doctest::Approx(0.5 * p.inner_radius()).epsilon(1e-7));
    CHECK(E.total > 1.0);
    CHECK(E.total < prev);
    prev = E.total;
  }
  CHECK(prev < 1.05);
  // The energy scales with the perimeter.
  const auto p = params(0.05, pi);
  const auto one = recovery_energy([](double) { return 1.0; }, Z, p);
  const auto three = recovery_energy([](double) { return 3.0; }, Z, p);
  CHECK(three.total == doctest::Approx(3.0 * one.total).epsilon(1e-9));
}

TEST_CASE("build_recovery on the lattice") {
  const auto spec = LatticeSpec::box(1, 0.05, 0.75, 0.2);
  const auto rho = analytic_signed_distance(JumpGeometry::half_space(1, 0.0), spec);
  const auto p = params(0.1, pi, 0.4);
  const auto u = build_recovery(rho, p, uniform_levels(0.2, 4));
  const Lattice lat(spec);
  for (std::size_t i = 0; i < lat.size(); i += 97) {
    const double eta1 = lat.point(i).eta[0];
    if (eta1 < -0.4) CHECK(u.at(i, 0) == 1.0);
    if (eta1 > 0.4) CHECK(u.at(i, 0) == 0.0);
    for (std::size_t l = 0; l < u.z.size(); ++l) CHECK(u.at(i, l) == recovery_value(-eta1, u.z[l], p));
  }
  auto wide = p;
  wide.sigma = 0.8;
  CHECK_THROWS_AS(build_recovery(rho, wide, uniform_levels(0.2, 4)), DomainError);
}

TEST_CASE("tube volume of a vertical plane") {
  const auto spec = LatticeSpec::box(1, 0.05, 0.75, 0.3);
  const auto rho = analytic_signed_distance(JumpGeometry::half_space(1, 0.0), spec);
  const Window w = Window::box({-0.6, -0.5, -0.2}, {0.6, 0.5, 0.2});
  const double area = 1.0 * 0.4;
  CHECK(tube_volume_Z(rho, 0.0, w) == 0.0);
  for (double t : {0.4, 0.2, 0.1}) CHECK(tube_volume_Z(rho, t, w) / (2 * t) == doctest::Approx(area).epsilon(0.05));
  CHECK_THROWS_AS(tube_volume_Z(rho, 0.01, w), DomainError);
}

TEST_CASE("tube volume of a CC ball") {
  const double R = 0.6;
  const auto spec = LatticeSpec::covering_ball(1, 1.05, 0.05);
  const auto rho = analytic_signed_distance(JumpGeometry::cc_ball(HPoint::identity(1), R), spec);
  const double L = oracle::cc_sphere_perimeter(R);
  const Window w = Window::whole(spec);
  double prev = 1e9;
  for (double t : {0.4, 0.2, 0.1}) {
    const double d = std::abs(tube_delta(rho, t, L, w));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(tube_volume_Z(rho, 0.1, w) / 0.2 == doctest::Approx(L).epsilon(0.05));
}
