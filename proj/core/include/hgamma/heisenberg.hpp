#pragma once

// Heisenberg group H^n in exponential coordinates p = (eta, t), eta in R^{2n}.
//
//   p * q = (eta + eta', t + t' + 1/2 sum_j (eta_j eta'_{j+n} - eta_{j+n} eta'_j))
//   delta_r(p) = (r eta, r^2 t)
//   W_i = d/deta_i - 1/2 eta_{i+n} d/dt,  W_{i+n} = d/deta_{i+n} + 1/2 eta_i d/dt,  T = d/dt
//
// Frame indices are 1-based (W_1 .. W_2n) to match the usual notation.

#include <cstddef>
#include <vector>

namespace hgamma {

struct GroupConfig {
  int n = 1;

  int horizontal_dim() const { return 2 * n; }
  int homogeneous_dim() const { return 2 * n + 2; }
  void validate() const;
};

struct HPoint {
  std::vector<double> eta;
  double t = 0.0;

  HPoint() = default;
  HPoint(std::vector<double> eta_, double t_);

  static HPoint identity(int n);

  int n() const { return static_cast<int>(eta.size() / 2); }
  bool is_finite() const;
};

bool operator==(const HPoint& a, const HPoint& b);

struct FrameVector {
  enum class Kind { W, T };
  Kind kind = Kind::W;
  int index = 1;  // 1..2n for W, ignored for T

  static FrameVector w(int i) { return {Kind::W, i}; }
  static FrameVector vertical() { return {Kind::T, 0}; }

  bool is_horizontal() const { return kind == Kind::W; }
  void validate(int n) const;
};

HPoint group_mul(const HPoint& p, const HPoint& q);
HPoint group_inv(const HPoint& p);
HPoint dilate(double r, const HPoint& p);

// Coordinate components (d/deta_1 .. d/deta_2n, d/dt) of the field at p.
std::vector<double> frame_coefficients(const FrameVector& v, const HPoint& p);

// exp(sV)(p), i.e. right multiplication by exp(sV); exact because the flows are affine.
HPoint flow(const FrameVector& v, double s, const HPoint& p);

// Max-norm distance between coordinates, used by tests and tolerance checks.
double coordinate_gap(const HPoint& a, const HPoint& b);

}  // namespace hgamma
