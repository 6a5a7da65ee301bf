#include "hgamma/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgamma/errors.hpp"

namespace hgamma {

void GroupConfig::validate() const {
  if (n < 1) throw ConfigError("group dimension n must be positive, got " + std::to_string(n));
}

HPoint::HPoint(std::vector<double> eta_, double t_) : eta(std::move(eta_)), t(t_) {
  if (eta.empty() || eta.size() % 2 != 0)
    throw ConfigError("HPoint needs an even, nonzero number of horizontal coordinates");
}

HPoint HPoint::identity(int n) {
  GroupConfig{n}.validate();
  return HPoint(std::vector<double>(static_cast<std::size_t>(2 * n), 0.0), 0.0);
}

bool HPoint::is_finite() const {
  return std::isfinite(t) && std::all_of(eta.begin(), eta.end(), [](double x) { return std::isfinite(x); });
}

bool operator==(const HPoint& a, const HPoint& b) { return a.t == b.t && a.eta == b.eta; }

void FrameVector::validate(int n) const {
  if (kind == Kind::W && (index < 1 || index > 2 * n))
    throw ConfigError("frame index " + std::to_string(index) + " outside [1, " + std::to_string(2 * n) + "]");
}

namespace {

void require_same_dim(const HPoint& p, const HPoint& q) {
  if (p.eta.size() != q.eta.size())
    throw ConfigError("dimension mismatch: H^" + std::to_string(p.n()) + " vs H^" + std::to_string(q.n()));
}

}  // namespace

HPoint group_mul(const HPoint& p, const HPoint& q) {
  require_same_dim(p, q);
  const int n = p.n();
  HPoint out = p;
  double twist = 0.0;
  for (int j = 0; j < n; ++j) twist += p.eta[j] * q.eta[j + n] - p.eta[j + n] * q.eta[j];
  for (std::size_t i = 0; i < out.eta.size(); ++i) out.eta[i] += q.eta[i];
  out.t = p.t + q.t + 0.5 * twist;
  return out;
}

HPoint group_inv(const HPoint& p) {
  HPoint out = p;
  for (auto& x : out.eta) x = -x;
  out.t = -p.t;
  return out;
}

HPoint dilate(double r, const HPoint& p) {
  if (!(r > 0.0)) throw DomainError("dilation factor must be positive");
  HPoint out = p;
  for (auto& x : out.eta) x *= r;
  out.t = r * r * p.t;
  return out;
}

std::vector<double> frame_coefficients(const FrameVector& v, const HPoint& p) {
  const int n = p.n();
  v.validate(n);
  std::vector<double> c(static_cast<std::size_t>(2 * n + 1), 0.0);
  if (v.kind == FrameVector::Kind::T) {
    c[2 * n] = 1.0;
    return c;
  }
  const int i = v.index - 1;
  c[i] = 1.0;
  c[2 * n] = i < n ? -0.5 * p.eta[i + n] : 0.5 * p.eta[i - n];
  return c;
}

HPoint flow(const FrameVector& v, double s, const HPoint& p) {
  const int n = p.n();
  v.validate(n);
  HPoint out = p;
  if (v.kind == FrameVector::Kind::T) {
    out.t += s;
    return out;
  }
  const int i = v.index - 1;
  // The conjugate coordinate is constant along the flow, so t moves linearly.
  out.t += i < n ? -0.5 * p.eta[i + n] * s : 0.5 * p.eta[i - n] * s;
  out.eta[i] += s;
  return out;
}

double coordinate_gap(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b);
  double g = std::abs(a.t - b.t);
  for (std::size_t i = 0; i < a.eta.size(); ++i) g = std::max(g, std::abs(a.eta[i] - b.eta[i]));
  return g;
}

}  // namespace hgamma
