#include <random>

#include "doctest.h"
#include "hgamma/errors.hpp"
#include "hgamma/heisenberg.hpp"
#include "oracles.hpp"

using namespace hgamma;

namespace {

HPoint random_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> eta(2 * n);
  for (auto& x : eta) x = u(rng);
  return HPoint(eta, u(rng));
}

}  // namespace

TEST_CASE("group law examples") {
  const HPoint p = group_mul(HPoint({1, 0}, 0), HPoint({0, 1}, 0));
  CHECK(p.eta[0] == 1.0);
  CHECK(p.eta[1] == 1.0);
  CHECK(p.t == 0.5);

  const HPoint q({0.3, -1.2}, 0.7);
  CHECK(group_mul(q, HPoint::identity(1)) == q);
  CHECK(coordinate_gap(group_mul(q, group_inv(q)), HPoint::identity(1)) == 0.0);
  CHECK_THROWS_AS(group_mul(q, HPoint::identity(2)), ConfigError);
}

TEST_CASE("dilations") {
  const HPoint d = dilate(2.0, HPoint({1, 1}, 1));
  CHECK(d == HPoint({2, 2}, 4));
  const HPoint q({0.3, -1.2}, 0.7);
  CHECK(dilate(1.0, q) == q);
  CHECK(dilate(2.0, dilate(3.0, HPoint({1, 0}, 1))) == HPoint({6, 0}, 36));
  CHECK_THROWS_AS(dilate(0.0, q), DomainError);
  CHECK_THROWS_AS(dilate(-1.0, q), DomainError);
}

TEST_CASE("frame coefficients") {
  const auto c = frame_coefficients(FrameVector::w(1), HPoint({0.0, 0.8}, 3.0));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == doctest::Approx(-0.4));
  const auto v = frame_coefficients(FrameVector::vertical(), HPoint({0.5, 0.8}, 3.0));
  CHECK(v == std::vector<double>{0, 0, 1});
  CHECK_THROWS_AS(frame_coefficients(FrameVector::w(3), HPoint::identity(1)), ConfigError);
  CHECK_THROWS_AS(frame_coefficients(FrameVector::w(0), HPoint::identity(1)), ConfigError);
}

TEST_CASE("flows") {
  CHECK(flow(FrameVector::w(1), 1.0, HPoint::identity(1)) == HPoint({1, 0}, 0));
  CHECK(coordinate_gap(flow(FrameVector::w(2), 1.0, HPoint({1, 0}, 0)), HPoint({1, 1}, 0.5)) < 1e-15);
  CHECK(flow(FrameVector::vertical(), 0.25, HPoint::identity(1)) == HPoint({0, 0}, 0.25));

  // Closed-form flows agree with numerical integration of the vector field.
  std::mt19937_64 rng(7);
  for (int n : {1, 2}) {
    for (int i = 1; i <= 2 * n; ++i) {
      const HPoint p = random_point(rng, n);
      const FrameVector v = FrameVector::w(i);
      auto F = [&](const std::vector<double>& y) {
        HPoint q(std::vector<double>(y.begin(), y.end() - 1), y.back());
        return frame_coefficients(v, q);
      };
      std::vector<double> y = p.eta;
      y.push_back(p.t);
      const auto yn = oracle::rk4(F, y, 0.9, 200);
      const HPoint exact = flow(v, 0.9, p);
      for (int j = 0; j < 2 * n; ++j) CHECK(exact.eta[j] == doctest::Approx(yn[j]).epsilon(1e-12));
      CHECK(exact.t == doctest::Approx(yn.back()).epsilon(1e-12));
    }
  }
}

TEST_CASE("square path lands on the vertical axis") {
  for (double s : {0.1, 0.5, 1.0, 2.5}) {
    HPoint p = HPoint::identity(1);
    p = flow(FrameVector::w(1), s, p);
    p = flow(FrameVector::w(2), s, p);
    p = flow(FrameVector::w(1), -s, p);
    p = flow(FrameVector::w(2), -s, p);
    CHECK(coordinate_gap(p, HPoint({0, 0}, s * s)) < 1e-14);
  }
}

TEST_CASE("algebraic identities on random samples") {
  std::mt19937_64 rng(42);
  for (int n : {1, 3}) {
    for (int k = 0; k < 200; ++k) {
      const HPoint p = random_point(rng, n), q = random_point(rng, n), r = random_point(rng, n);
      CHECK(coordinate_gap(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r))) < 1e-12);
      CHECK(coordinate_gap(dilate(1.7, group_mul(p, q)), group_mul(dilate(1.7, p), dilate(1.7, q))) < 1e-12);
      const FrameVector v = FrameVector::w(1 + k % (2 * n));
      CHECK(coordinate_gap(flow(v, 0.3, flow(v, -1.1, p)), flow(v, -0.8, p)) < 1e-12);
    }
  }
}

TEST_CASE("group config") {
  GroupConfig g{2};
  CHECK(g.homogeneous_dim() == 6);
  CHECK(g.horizontal_dim() == 4);
  CHECK_THROWS_AS(GroupConfig{0}.validate(), ConfigError);
  CHECK_THROWS_AS(HPoint({1.0, 2.0, 3.0}, 0.0), ConfigError);
}
