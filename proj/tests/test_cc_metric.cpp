#include <random>

#include "doctest.h"
#include "hgamma/cc_metric.hpp"
#include "hgamma/errors.hpp"
#include "oracles.hpp"

using namespace hgamma;

namespace {

const LatticeSpec& unit_spec() {
  static const LatticeSpec s = LatticeSpec::covering_ball(1, 1.2, 0.05);
  return s;
}

const CcDistance& unit_metric() {
  static const CcDistance d(unit_spec());
  return d;
}

}  // namespace

TEST_CASE("lattice graph distance bounds the exact distance from above") {
  const auto& d = unit_metric();
  const Lattice& lat = d.lattice();
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.size(); i += 7) {
    const double g = d.field().values[i];
    if (g > 1.0) continue;
    const HPoint p = lat.point(i);
    const double ex = oracle::cc_distance_origin(p.eta, p.t);
    CHECK(g >= ex - 1e-12);
    worst = std::max(worst, g - ex);
  }
  CHECK(worst < 0.2);
}

TEST_CASE("cc_distance examples") {
  const auto& d = unit_metric();
  CHECK(d(HPoint::identity(1), HPoint({1, 0}, 0)) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(d(HPoint::identity(1), HPoint::identity(1)) == 0.0);
  CHECK_THROWS_AS(d(HPoint::identity(1), HPoint({5, 0}, 0)), DomainError);

  // Vertical constant, frozen at h = 0.05 with covering radius 1.2; the exact
  // value is 2 sqrt(pi) and the commutator square gives 4.
  const double cT = d(HPoint::identity(1), HPoint({0, 0}, 0.01)) / 0.1;
  CHECK(cT > 2.0 * std::sqrt(M_PI));
  CHECK(cT <= 4.0);
  CHECK(cT == doctest::Approx(1.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("metric properties") {
  const auto& d = unit_metric();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.25, 0.25), ut(-0.01, 0.01);
  for (int k = 0; k < 100; ++k) {
    const HPoint p({u(rng), u(rng)}, ut(rng)), q({u(rng), u(rng)}, ut(rng)), r({u(rng), u(rng)}, ut(rng));
    CHECK(d(p, q) == doctest::Approx(d(q, p)).epsilon(0.1).scale(0.1));
    CHECK(d(p, r) <= d(p, q) + d(q, r) + 2 * unit_spec().h);
    const HPoint g({u(rng), u(rng)}, ut(rng));
    CHECK(d(group_mul(g, p), group_mul(g, q)) == doctest::Approx(d(p, q)).epsilon(1e-12));
  }
  // Lattice elements: symmetry and the triangle inequality hold exactly.
  const Lattice& lat = d.lattice();
  const HPoint a = lat.point(lat.index({{3, -2}, 5})), b = lat.point(lat.index({{-1, 4}, -7}));
  CHECK(d(a, b) == doctest::Approx(d(b, a)).epsilon(1e-12));
}

TEST_CASE("vertical distance follows the square-root law") {
  const auto& d = unit_metric();
  const double a = d.from_origin(HPoint({0, 0}, 0.04)) / 0.2;
  const double b = d.from_origin(HPoint({0, 0}, 0.09)) / 0.3;
  CHECK(a == doctest::Approx(b).epsilon(0.05));
}

TEST_CASE("refine_by_dilation") {
  const auto& d = unit_metric();
  const HPoint o = HPoint::identity(1);
  CHECK(d.refined(o, HPoint({0.01, 0}, 0), 4) == doctest::Approx(0.01).epsilon(0.02));
  const HPoint diag({0.01, 0.01}, 0);
  const double plain = d(o, diag), refined = d.refined(o, diag, 6);
  CHECK(std::abs(plain - refined) > 1e-3);
  CHECK(refined == doctest::Approx(std::sqrt(2e-4)).epsilon(0.02));
  CHECK(d.refined(diag, diag, 3) == 0.0);
  CHECK_THROWS_AS(d.refined(o, diag, 0), ConfigError);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int k = 0; k < 20; ++k) {
    const HPoint q({u(rng), u(rng)}, 0.05 * u(rng));
    const double r1 = d.refined(o, q, 5), r2 = d.refined(o, dilate(2.0, q), 5);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.01));
  }
}

TEST_CASE("horizontal factorization") {
  auto lands = [](const HPoint& target) {
    const auto moves = horizontal_factorize(target);
    for (const auto& m : moves) CHECK(m.field.is_horizontal());
    return coordinate_gap(compose_moves(moves, HPoint::identity(target.n())), target);
  };
  const auto sq = horizontal_factorize(HPoint({0, 0}, 1));
  REQUIRE(sq.size() == 4);
  CHECK(sq[0].field.index == 1);
  CHECK(sq[0].duration == 1.0);
  CHECK(sq[1].field.index == 2);
  CHECK(sq[2].duration == -1.0);
  CHECK(sq[3].duration == -1.0);
  CHECK(lands(HPoint({0, 0}, 1)) < 1e-15);

  const auto one = horizontal_factorize(HPoint({1, 0}, 0));
  REQUIRE(one.size() == 1);
  CHECK(one[0].duration == 1.0);

  const auto two = horizontal_factorize(HPoint({1, 1}, 0.5));
  REQUIRE(two.size() == 2);
  CHECK(two[1].field.index == 2);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 100; ++k) {
    const HPoint g({u(rng), u(rng), u(rng), u(rng)}, u(rng));
    CHECK(lands(g) < 1e-12);
    const auto moves = horizontal_factorize(g);
    double norm = 0.0;
    for (double x : g.eta) norm += std::abs(x);
    CHECK(total_duration(moves) <= norm + 4.0 * std::sqrt(std::abs(g.t) + 0.5 * norm * norm) + 1e-12);
  }
}

TEST_CASE("distance fields") {
  const auto& spec = unit_spec();
  const auto& d = unit_metric();
  const auto pf = distance_field(TargetSet::at(HPoint::identity(1)), spec);
  const Lattice lat(spec);
  for (std::size_t i = 0; i < lat.size(); i += 1013) CHECK(pf.values[i] == d.field().values[i]);

  const auto hf = distance_field(TargetSet::hyperplane(1, 0.0), spec);
  for (double s : {-0.8, -0.3, 0.4, 1.0}) CHECK(lat.interpolate(hf.values, HPoint({s, 0.2}, 0)) == doctest::Approx(std::abs(s)).epsilon(1e-9));

  const auto all = distance_field(TargetSet::everything(), spec);
  CHECK(std::all_of(all.values.begin(), all.values.end(), [](double x) { return x == 0.0; }));

  CHECK_THROWS_AS(distance_field(TargetSet::hyperplane(1, 9.0), spec), DomainError);
  CHECK_THROWS_AS(distance_field(TargetSet::nodes(std::vector<char>(lat.size(), 0)), spec), DomainError);
}

TEST_CASE("signed distance") {
  const LatticeSpec spec = LatticeSpec::covering_ball(1, 1.0, 0.05);
  const Lattice lat(spec);
  const auto E = JumpGeometry::half_space(1, 0.0);
  const auto rho = signed_distance(E, spec);
  for (double s : {0.2, 0.55, 0.9}) {
    CHECK(lat.interpolate(rho.values, HPoint({-s, 0.1}, 0.01)) == doctest::Approx(s).epsilon(1e-9));
    CHECK(lat.interpolate(rho.values, HPoint({s, -0.3}, 0)) == doctest::Approx(-s).epsilon(1e-9));
  }
  CHECK(lat.interpolate(rho.values, HPoint({0.0, 0.4}, 0.02)) == 0.0);

  const auto rc = signed_distance(E.complemented(), spec);
  for (std::size_t i = 0; i < lat.size(); ++i) REQUIRE(rc.values[i] == -rho.values[i]);

  CHECK_THROWS_AS(signed_distance(JumpGeometry::half_space(1, 5.0), spec), DomainError);
  CHECK_THROWS_AS(signed_distance(JumpGeometry::empty(), spec), DomainError);
}

TEST_CASE("eikonal residual") {
  const auto& spec = unit_spec();
  const Lattice lat(spec);
  std::vector<double> f(lat.size()), g(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    f[i] = 1.0 + lat.point(i).eta[0];
    g[i] = 2.0 * f[i];
  }
  const auto sf = eikonal_residual(spec, f, 0.0);
  CHECK(sf.max < 1e-12);
  const auto sg = eikonal_residual(spec, g, 0.0);
  CHECK(sg.median == doctest::Approx(1.0));
  CHECK(sg.max == doctest::Approx(1.0));

  const auto so = eikonal_residual(spec, unit_metric().field().values, 2.0 * spec.h, 0.9);
  CHECK(so.median <= 0.05);
  const auto sh = eikonal_residual(distance_field(TargetSet::hyperplane(1, 0.0), spec));
  CHECK(sh.median <= 0.05);
  CHECK_THROWS_AS(eikonal_residual(spec, f, 100.0), ConfigError);
}
