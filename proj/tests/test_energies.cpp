#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hgamma/energies.hpp"
#include "hgamma/errors.hpp"
#include "oracles.hpp"

using namespace hgamma;

namespace {

const double pi = std::numbers::pi;

LatticeSpec small_spec() { return LatticeSpec::box(1, 0.1, 0.6, 0.3); }

Window base_window() { return Window::box({-0.3, -0.3, -0.1}, {0.3, 0.3, 0.1}); }

CylinderField fill(const LatticeSpec& s, int levels, const std::function<double(const HPoint&, double)>& f) {
  CylinderField u(s, uniform_levels(0.5, levels));
  const Lattice lat(s);
  for (std::size_t l = 0; l < u.z.size(); ++l)
    for (std::size_t i = 0; i < lat.size(); ++i) u.at(i, l) = f(lat.point(i), u.z[l]);
  return u;
}

CylinderField random_field(std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  return fill(small_spec(), 5, [&](const HPoint&, double) { return U(rng); });
}

std::vector<double> ramp(const std::vector<double>& s, double d) {
  std::vector<double> v;
  for (double x : s) v.push_back(std::clamp(0.5 + x / (2.0 * d), 0.0, 1.0));
  return v;
}

}  // namespace

TEST_CASE("double well values and derivative") {
  DoubleWell V;
  CHECK(V(0.0) == 0.0);
  CHECK(V(1.0) == 0.0);
  CHECK(V(0.5) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  for (int i = 1; i < 50; ++i) CHECK(V(i / 50.0) > 0.0);
  for (double s : {-0.7, -0.2, 0.1, 0.33, 0.5, 0.81, 1.25, 1.9}) {
    const double e = 1e-5;
    const double fd = (V(s + e) - V(s - e)) / (2 * e);
    CHECK(std::abs(V.deriv(s) - fd) < 1e-6);
  }
  CHECK(V(-0.2) == doctest::Approx(V(0.2)));
  CHECK(V(1.3) == doctest::Approx(V(0.7)));
  CHECK(V(1.0 - 0.37) == doctest::Approx(V(0.37)));
  CHECK(DoubleWell::integral() == doctest::Approx(oracle::gauss([&](double s) { return V(s); }, 0, 1)));
}

TEST_CASE("energy parameters in the log scale") {
  const auto p = EnergyParams::from_kappa(0.01, pi);
  CHECK(p.log_lambda == doctest::Approx(100 * pi));
  CHECK(p.line_tension() == doctest::Approx(1.0));
  CHECK(p.log_inner_radius() == doctest::Approx(std::log(0.01) - 100 * pi));
  CHECK(p.t_eps == 0.01);
  // lambda itself is ~1e136 but lambda * x stays finite.
  CHECK(p.scale_by_lambda(1e-140) == doctest::Approx(std::exp(100 * pi - 140 * std::log(10.0))));
  CHECK(p.scale_by_lambda(0.0) == 0.0);
  CHECK_THROWS_AS(EnergyParams::from_kappa(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(EnergyParams::from_kappa(0.1, -1.0), ConfigError);
}

TEST_CASE("energy_E on constant and affine fields") {
  const auto p = EnergyParams::from_kappa(0.2, 1.0);
  const CylinderRegion A{base_window(), 0.0, 0.5};
  const Window Ab = base_window();
  const double base_vol = 0.6 * 0.6 * 0.2;

  auto zero = fill(small_spec(), 4, [](const HPoint&, double) { return 0.0; });
  CHECK(energy_E(zero, p, A, Ab).total == 0.0);

  auto half = fill(small_spec(), 4, [](const HPoint&, double) { return 0.5; });
  const auto e = energy_E(half, p, A, Ab);
  CHECK(e.bulk == 0.0);
  CHECK(e.boundary == doctest::Approx(p.lambda() * base_vol / 16.0).epsilon(1e-12));

  // W_1 eta_1 = 1, W_2 eta_1 = 0, d_z z = 1.
  auto aff = fill(small_spec(), 4, [](const HPoint& q, double z) { return 0.3 * q.eta[0] + 0.7 * z; });
  const auto ea = energy_E(aff, p, A, Window::box({0, 0, 0}, {0, 0, 0}));
  CHECK(ea.boundary == 0.0);
  CHECK(ea.bulk == doctest::Approx(0.2 * (0.09 + 0.49) * base_vol * 0.5).epsilon(1e-12));

  // u = t: W_1 t = -eta_2 / 2, W_2 t = eta_1 / 2, so the density is |eta|^2 / 4.
  auto tf = fill(small_spec(), 2, [](const HPoint& q, double) { return q.t; });
  const double exact = 0.2 * 0.5 * 0.2 * (2.0 * 0.6 * std::pow(0.3, 3) * 2.0 / 3.0) / 4.0;
  CHECK(energy_E(tf, p, A, Ab).bulk == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("energy_E is additive over regions") {
  const auto p = EnergyParams::from_kappa(0.1, 2.0);
  const auto u = random_field(7, 0.0, 1.0);
  const CylinderRegion A{base_window(), 0.0, 0.5};
  const auto whole = energy_E(u, p, A, base_window());
  for (double cut : {0.0, 0.07}) {
    const Window left = Window::box({-0.3, -0.3, -0.1}, {cut, 0.3, 0.1});
    const Window right = Window::box({cut, -0.3, -0.1}, {0.3, 0.3, 0.1});
    const auto a = energy_E(u, p, {left, 0.0, 0.5}, left);
    const auto b = energy_E(u, p, {right, 0.0, 0.5}, right);
    CHECK(a.total + b.total == doctest::Approx(whole.total).epsilon(1e-12));
  }
  for (double zc : {0.25, 0.31}) {
    const auto a = energy_E(u, p, {base_window(), 0.0, zc}, base_window());
    const auto b = energy_E(u, p, {base_window(), zc, 0.5}, Window::box({0, 0, 0}, {0, 0, 0}));
    CHECK(a.total + b.total == doctest::Approx(whole.total).epsilon(1e-12));
  }
}

TEST_CASE("energy_E symmetry and truncation") {
  const auto p = EnergyParams::from_kappa(0.1, 1.0);
  const CylinderRegion A{base_window(), 0.0, 0.5};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto u = random_field(seed, -0.5, 1.5);
    auto flipped = u;
    for (double& x : flipped.values) x = 1.0 - x;
    const auto e = energy_E(u, p, A, base_window());
    CHECK(energy_E(flipped, p, A, base_window()).total == doctest::Approx(e.total).epsilon(1e-12));
    auto clamped = u;
    for (double& x : clamped.values) x = std::clamp(x, 0.0, 1.0);
    CHECK(energy_E(clamped, p, A, base_window()).total <= e.total);
  }
}

TEST_CASE("energy_E rejects regions outside the lattice") {
  const auto p = EnergyParams::from_kappa(0.1, 1.0);
  const auto u = random_field(4, 0.0, 1.0);
  const Window big = Window::box({-0.9, -0.3, -0.1}, {0.3, 0.3, 0.1});
  CHECK_THROWS_AS(energy_E(u, p, {big, 0.0, 0.5}, base_window()), DomainError);
  CHECK_THROWS_AS(energy_E(u, p, {base_window(), 0.0, 0.9}, base_window()), DomainError);
  // The whole box has nodes whose W stencil leaves it.
  const Window all = Window::whole(small_spec());
  CHECK_THROWS_AS(energy_E(u, p, {all, 0.0, 0.5}, base_window()), DomainError);
}

TEST_CASE("fractional kernel of a ramp matches the closed form") {
  for (double d : {0.3, 0.05, 1e-3}) {
    const std::vector<double> s{-1.0, -d, d, 1.0};
    const auto v = ramp(s, d);
    CHECK(fractional_seminorm(s, v) == doctest::Approx(oracle::ramp_G_kernel(1.0, 1.0, d)).epsilon(1e-10));
  }
  // Asymmetric interval, ramp split into several cells.
  std::vector<double> s{-0.4, -0.1, -0.05, 0.0, 0.02, 0.1, 1.3};
  const auto v = ramp(s, 0.1);
  CHECK(fractional_seminorm(s, v) == doctest::Approx(oracle::ramp_G_kernel(0.4, 1.3, 0.1)).epsilon(1e-10));
  // Extreme scale separation.
  const double d = 1e-40;
  const std::vector<double> t{-1.0, -d, d, 1.0};
  CHECK(fractional_seminorm(t, ramp(t, d)) == doctest::Approx(oracle::ramp_G_kernel(1.0, 1.0, d)).epsilon(1e-10));
  // Narrower ramps cost more.
  double prev = 0.0;
  for (double w : {0.5, 0.2, 0.1, 0.05}) {
    const std::vector<double> q{-1.0, -w, w, 1.0};
    const double k = fractional_seminorm(q, ramp(q, w));
    CHECK(k > prev);
    prev = k;
  }
}

TEST_CASE("fractional kernel matches brute force quadrature") {
  auto f = [](double x) { return std::sin(3.0 * x) + 0.5 * x * x; };
  std::vector<double> s, v;
  for (int i = 0; i <= 40; ++i) {
    s.push_back(-1.0 + 2.0 * std::pow(i / 40.0, 1.3));
    v.push_back(f(s.back()));
  }
  auto interp = [&](double x) {
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - s.begin()), 1, s.size() - 1) - 1;
    const double a = (x - s[k]) / (s[k + 1] - s[k]);
    return v[k] + a * (v[k + 1] - v[k]);
  };
  const double brute = oracle::fractional_brute(interp, s.front(), s.back(), 400);
  CHECK(fractional_seminorm(s, v) == doctest::Approx(brute).epsilon(1e-4));
}

TEST_CASE("energy_G basics") {
  const auto p = EnergyParams::from_kappa(0.1, 1.0);
  std::vector<double> c(32, 1.0);
  CHECK(energy_G(c, 0.0, 1.0, p) == 0.0);
  std::vector<double> halfv(32, 0.5);
  CHECK(energy_G(halfv, 0.0, 2.0, p) == doctest::Approx(p.lambda() * 2.0 / 16.0));
  CHECK_THROWS_AS(energy_G(std::vector<double>(15, 0.0), 0.0, 1.0, p), ConfigError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> v(64);
  for (double& x : v) x = U(rng);
  auto p2 = p;
  p2.epsilon *= 2.0;
  p2.log_lambda = -800.0;  // potential term underflows to 0
  auto p1 = p;
  p1.log_lambda = -800.0;
  const double g1 = energy_G(v, 0.0, 1.0, p1);
  CHECK(g1 > 0.0);
  CHECK(energy_G(v, 0.0, 1.0, p2) == doctest::Approx(2.0 * g1).epsilon(1e-14));
}

TEST_CASE("trace ratio") {
  CHECK(trace_ratio(std::vector<double>(16, 3.0), 4, 4) == 0.0);
  const int n = 33;
  std::vector<double> lin(n * n);
  for (int iz = 0; iz < n; ++iz)
    for (int is = 0; is < n; ++is) lin[iz * n + is] = is / double(n - 1);
  // Both sides equal 1 for u = s.
  CHECK(trace_ratio(lin, n, n) == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0), C(0.0, 6.0), P(0.0, 2 * pi);
  double worst = 0.0;
  const int m = 49;
  for (int trial = 0; trial < 50; ++trial) {
    double a[4], phi[4], c[4];
    for (int k = 0; k < 4; ++k) {
      a[k] = U(rng);
      phi[k] = P(rng);
      c[k] = C(rng);
    }
    std::vector<double> u(m * m);
    for (int iz = 0; iz < m; ++iz)
      for (int is = 0; is < m; ++is) {
        const double s = is / double(m - 1), z = iz / double(m - 1);
        double val = 0.0;
        for (int k = 0; k < 4; ++k) val += a[k] * std::cos((k + 1) * pi * s + phi[k]) * std::exp(-c[k] * z);
        u[iz * m + is] = val;
      }
    worst = std::max(worst, trace_ratio(u, m, m));
  }
  CHECK(worst > 0.0);
  CHECK(worst <= 2 * pi * 1.05);
  CHECK_THROWS_AS(trace_ratio(lin, n, n - 1), ConfigError);
}
