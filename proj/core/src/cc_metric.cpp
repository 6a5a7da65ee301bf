#include "hgamma/cc_metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "hgamma/errors.hpp"

namespace hgamma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PackedMove {
  std::array<int, 14> a{};
  std::ptrdiff_t linear = 0;
  double length = 0.0;
};

std::vector<PackedMove> pack_moves(const Lattice& lat) {
  std::vector<PackedMove> out;
  for (const auto& m : horizontal_moves(lat.spec())) {
    PackedMove p;
    for (std::size_t j = 0; j < m.a.size(); ++j) {
      p.a[j] = m.a[j];
      p.linear += static_cast<std::ptrdiff_t>(m.a[j]) * static_cast<std::ptrdiff_t>(lat.stride(static_cast<int>(j)));
    }
    p.length = m.length;
    out.push_back(p);
  }
  return out;
}

// Calls visit(neighbor, move) for every in-box neighbor of idx.
template <typename Visit>
void for_each_neighbor(const Lattice& lat, const std::vector<PackedMove>& moves, std::size_t idx, Visit&& visit) {
  const LatticeSpec& s = lat.spec();
  const int n = s.n;
  std::array<int, 14> ii{};
  std::size_t rem = idx;
  for (int j = 0; j < 2 * n; ++j) {
    ii[j] = static_cast<int>(rem / lat.stride(j)) - s.eta_cells;
    rem %= lat.stride(j);
  }
  const long k = static_cast<long>(rem) - s.t_cells;
  for (const auto& m : moves) {
    bool ok = true;
    for (int j = 0; j < 2 * n && ok; ++j) {
      const int ni = ii[j] + m.a[j];
      ok = ni >= -s.eta_cells && ni <= s.eta_cells;
    }
    if (!ok) continue;
    long twist = 0;
    for (int j = 0; j < n; ++j) twist += static_cast<long>(ii[j]) * m.a[j + n] - static_cast<long>(ii[j + n]) * m.a[j];
    const long dk = twist;
    if (k + dk < -s.t_cells || k + dk > s.t_cells) continue;
    visit(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + m.linear + dk), m);
  }
}

std::size_t nearest_node(const Lattice& lat, const HPoint& p) {
  if (!lat.covers(p)) throw DomainError("point outside the sampled window");
  const auto f = lat.fractional(p);
  NodeIndex ix;
  const auto& s = lat.spec();
  for (int a = 0; a < 2 * s.n; ++a) ix.eta.push_back(static_cast<int>(std::lround(f[a])) - s.eta_cells);
  ix.k = static_cast<int>(std::lround(f.back())) - s.t_cells;
  return lat.index(ix);
}

}  // namespace

TargetSet TargetSet::at(HPoint p) {
  TargetSet t;
  t.kind = Kind::Point;
  t.point = std::move(p);
  return t;
}

TargetSet TargetSet::hyperplane(int axis, double offset) {
  if (axis < 1) throw ConfigError("hyperplane axis is 1-based");
  TargetSet t;
  t.kind = Kind::Hyperplane;
  t.axis = axis;
  t.offset = offset;
  return t;
}

TargetSet TargetSet::nodes(std::vector<char> mask) {
  TargetSet t;
  t.kind = Kind::Nodes;
  t.mask = std::move(mask);
  return t;
}

TargetSet TargetSet::everything() {
  TargetSet t;
  t.kind = Kind::Everything;
  return t;
}

std::string TargetSet::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Point: {
      os << "point (";
      for (double x : point.eta) os << x << ",";
      os << point.t << ")";
      break;
    }
    case Kind::Hyperplane: os << "hyperplane eta_" << axis << " = " << offset; break;
    case Kind::Nodes: os << "node set"; break;
    case Kind::Everything: os << "whole window"; break;
  }
  return os.str();
}

std::vector<double> lattice_shortest_paths(const Lattice& lat,
                                           const std::vector<std::pair<std::size_t, double>>& seeds) {
  if (seeds.empty()) throw DomainError("shortest paths need at least one source node");
  const auto moves = pack_moves(lat);
  std::vector<double> dist(lat.size(), kInf);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (const auto& [idx, d0] : seeds) {
    if (idx >= lat.size()) throw InternalError("seed index outside lattice");
    if (d0 < dist[idx]) {
      dist[idx] = d0;
      queue.emplace(d0, static_cast<std::uint32_t>(idx));
    }
  }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for_each_neighbor(lat, moves, u, [&](std::size_t v, const PackedMove& m) {
      const double nd = d + m.length;
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, static_cast<std::uint32_t>(v));
      }
    });
  }
  return dist;
}

DistanceField distance_field(const TargetSet& target, const LatticeSpec& spec) {
  Lattice lat(spec);
  std::vector<std::pair<std::size_t, double>> seeds;
  switch (target.kind) {
    case TargetSet::Kind::Point:
      seeds.emplace_back(nearest_node(lat, target.point), 0.0);
      break;
    case TargetSet::Kind::Hyperplane: {
      if (target.axis > 2 * spec.n) throw ConfigError("hyperplane axis outside [1, 2n]");
      const int a = target.axis - 1;
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const NodeIndex ix = lat.node(i);
        const double gap = std::abs(ix.eta[a] * spec.h - target.offset);
        if (gap < spec.h) seeds.emplace_back(i, gap);
      }
      break;
    }
    case TargetSet::Kind::Nodes:
      if (target.mask.size() != lat.size()) throw ConfigError("target mask size does not match lattice");
      for (std::size_t i = 0; i < lat.size(); ++i)
        if (target.mask[i]) seeds.emplace_back(i, 0.0);
      break;
    case TargetSet::Kind::Everything:
      return {spec, std::vector<double>(lat.size(), 0.0), target.describe()};
  }
  if (seeds.empty()) throw DomainError("target set has no nodes inside the window");
  return {spec, lattice_shortest_paths(lat, seeds), target.describe()};
}

ScalarField level_function(const JumpGeometry& geom, const LatticeSpec& spec) {
  Lattice lat(spec);
  std::vector<double> phi(lat.size());
  switch (geom.kind) {
    case JumpGeometry::Kind::Empty:
      std::fill(phi.begin(), phi.end(), 1.0);
      break;
    case JumpGeometry::Kind::HalfSpace: {
      if (geom.axis > 2 * spec.n) throw ConfigError("half-space axis outside [1, 2n]");
      const int a = geom.axis - 1;
      for (std::size_t i = 0; i < lat.size(); ++i) phi[i] = lat.node(i).eta[a] * spec.h - geom.offset;
      break;
    }
    case JumpGeometry::Kind::CcBall: {
      if (geom.center.n() != spec.n) throw ConfigError("ball center dimension does not match lattice");
      const HPoint inv = group_inv(geom.center);
      for (std::size_t i = 0; i < lat.size(); ++i)
        phi[i] = exact_cc_distance(group_mul(inv, lat.point(i))) - geom.radius;
      break;
    }
    case JumpGeometry::Kind::LevelSet:
      if (!(geom.level->spec == spec)) throw ConfigError("level-set field lives on a different lattice");
      phi = geom.level->values;
      break;
  }
  if (geom.complement)
    for (auto& x : phi) x = -x;
  return ScalarField(spec, std::move(phi));
}

SignedDistanceField analytic_signed_distance(const JumpGeometry& geom, const LatticeSpec& spec) {
  if (geom.kind != JumpGeometry::Kind::HalfSpace && geom.kind != JumpGeometry::Kind::CcBall)
    return signed_distance(geom, spec);
  ScalarField phi = level_function(geom, spec);
  for (auto& x : phi.values) x = -x;
  return {spec, std::move(phi.values), "closed-form signed distance to boundary of " + geom.describe()};
}

SignedDistanceField signed_distance(const JumpGeometry& geom, const LatticeSpec& spec) {
  Lattice lat(spec);
  const ScalarField phi = level_function(geom, spec);
  const auto moves = pack_moves(lat);
  std::vector<double> seed(lat.size(), kInf);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double a = phi.values[i];
    if (a == 0.0) {
      seed[i] = 0.0;
      continue;
    }
    for_each_neighbor(lat, moves, i, [&](std::size_t j, const PackedMove& m) {
      const double b = phi.values[j];
      if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
        const double theta = a / (a - b);
        seed[i] = std::min(seed[i], theta * m.length);
      }
    });
  }
  std::vector<std::pair<std::size_t, double>> seeds;
  for (std::size_t i = 0; i < seed.size(); ++i)
    if (seed[i] < kInf) seeds.emplace_back(i, seed[i]);
  if (seeds.empty()) throw DomainError("boundary of " + geom.describe() + " does not meet the window");
  auto dist = lattice_shortest_paths(lat, seeds);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (phi.values[i] < 0.0) continue;
    dist[i] = phi.values[i] > 0.0 ? -dist[i] : 0.0;
  }
  return {spec, std::move(dist), "signed distance to boundary of " + geom.describe()};
}

CcDistance::CcDistance(const LatticeSpec& spec)
    : lat_(spec), field_(distance_field(TargetSet::at(HPoint::identity(spec.n)), spec)) {}

double CcDistance::covered_radius() const {
  const auto& s = lat_.spec();
  return std::min(s.eta_half() - s.h, std::sqrt(2.0 * M_PI * s.t_half()));
}

double CcDistance::from_origin(const HPoint& g) const { return lat_.interpolate(field_.values, g); }

double CcDistance::operator()(const HPoint& p, const HPoint& q) const {
  return from_origin(group_mul(group_inv(p), q));
}

double CcDistance::refined(const HPoint& p, const HPoint& q, int levels) const {
  if (levels < 1) throw ConfigError("refinement needs levels >= 1");
  const HPoint g = group_mul(group_inv(p), q);
  const double plain = from_origin(g);
  if (plain == 0.0 && g == HPoint::identity(g.n())) return 0.0;
  // Keep the dilated point well inside the ball the box can represent.
  const double budget = 0.85 * covered_radius();
  double r = std::ldexp(1.0, levels);
  if (plain > 0.0) r = std::min(r, budget / plain);
  r = std::max(r, 1.0);
  HPoint scaled = dilate(r, g);
  while (r > 1.0 && !lat_.covers(scaled)) {
    r = std::max(1.0, 0.5 * r);
    scaled = dilate(r, g);
  }
  return from_origin(scaled) / r;
}

double cc_distance(const HPoint& p, const HPoint& q, const LatticeSpec& spec) { return CcDistance(spec)(p, q); }

double refine_by_dilation(const HPoint& p, const HPoint& q, const LatticeSpec& spec, int levels) {
  return CcDistance(spec).refined(p, q, levels);
}

double exact_cc_distance(const HPoint& g) {
  double e2 = 0.0;
  for (double x : g.eta) e2 += x * x;
  const double t = std::abs(g.t);
  if (t == 0.0) return std::sqrt(e2);
  if (e2 == 0.0) return 2.0 * std::sqrt(M_PI * t);
  const double q = t / e2;
  auto mu = [](double th) {
    if (th < 1e-4) return th / 12.0 + th * th * th / 720.0;
    const double s = std::sin(0.5 * th);
    return (th - std::sin(th)) / (8.0 * s * s);
  };
  // mu(th) >= th / 12, so the root lies below 12 q; the arc cannot turn past 2 pi.
  const double hi = std::min(12.0 * q * (1.0 + 1e-12) + 1e-300, 2.0 * M_PI);
  boost::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve([&](double th) { return mu(th) - q; }, 0.0, hi,
                                                        boost::math::tools::eps_tolerance<double>(50), iters);
  const double th = 0.5 * (a + b);
  const double s = std::sin(0.5 * th);
  return std::sqrt(e2) * (th < 1e-8 ? 1.0 : 0.5 * th / s);
}

HorizontalMoveList horizontal_factorize(const HPoint& target) {
  const int n = target.n();
  HorizontalMoveList moves;
  HPoint at = HPoint::identity(n);
  for (int i = 1; i <= 2 * n; ++i) {
    const double s = target.eta[i - 1];
    if (s == 0.0) continue;
    moves.push_back({FrameVector::w(i), s});
    at = flow(FrameVector::w(i), s, at);
  }
  const double residual = target.t - at.t;
  if (residual != 0.0) {
    // A square W_a, W_b, -W_a, -W_b of side s adds s^2 to t when [W_a, W_b] = T.
    const double side = std::sqrt(std::abs(residual));
    const FrameVector first = residual > 0.0 ? FrameVector::w(1) : FrameVector::w(n + 1);
    const FrameVector second = residual > 0.0 ? FrameVector::w(n + 1) : FrameVector::w(1);
    moves.push_back({first, side});
    moves.push_back({second, side});
    moves.push_back({first, -side});
    moves.push_back({second, -side});
  }
  return moves;
}

HPoint compose_moves(const HorizontalMoveList& moves, const HPoint& start) {
  HPoint at = start;
  for (const auto& m : moves) {
    if (!m.field.is_horizontal()) throw InternalError("move list contains a vertical field");
    at = flow(m.field, m.duration, at);
  }
  return at;
}

double total_duration(const HorizontalMoveList& moves) {
  double s = 0.0;
  for (const auto& m : moves) s += std::abs(m.duration);
  return s;
}

EikonalStats eikonal_residual(const LatticeSpec& spec, const std::vector<double>& f, double exclusion,
                              double max_value) {
  Lattice lat(spec);
  if (f.size() != lat.size()) throw ConfigError("field size does not match lattice");
  const int d = 2 * spec.n;
  std::vector<std::vector<int>> plus(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), 0));
  auto minus = plus;
  for (int i = 0; i < d; ++i) {
    plus[i][i] = 1;
    minus[i][i] = -1;
  }
  std::vector<double> res;
  for (std::size_t x = 0; x < lat.size(); ++x) {
    const double fx = std::abs(f[x]);
    if (!std::isfinite(fx) || fx < exclusion || fx > max_value) continue;
    double g2 = 0.0;
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      const std::size_t a = lat.shifted(x, plus[i]);
      const std::size_t b = lat.shifted(x, minus[i]);
      if (a == Lattice::npos || b == Lattice::npos || !std::isfinite(f[a]) || !std::isfinite(f[b])) {
        ok = false;
        break;
      }
      const double w = (f[a] - f[b]) / (2.0 * spec.h);
      g2 += w * w;
    }
    if (ok) res.push_back(std::abs(std::sqrt(g2) - 1.0));
  }
  if (res.empty()) throw ConfigError("no interior nodes left for the eikonal check");
  EikonalStats st;
  st.samples = res.size();
  auto at = [&](double q) {
    const auto k = static_cast<std::size_t>(q * static_cast<double>(res.size() - 1));
    std::nth_element(res.begin(), res.begin() + static_cast<std::ptrdiff_t>(k), res.end());
    return res[k];
  };
  st.median = at(0.5);
  st.p90 = at(0.9);
  st.max = *std::max_element(res.begin(), res.end());
  return st;
}

EikonalStats eikonal_residual(const DistanceField& f) { return eikonal_residual(f.spec, f.values, 2.0 * f.spec.h); }

EikonalStats eikonal_residual(const SignedDistanceField& f) {
  return eikonal_residual(f.spec, f.values, 2.0 * f.spec.h);
}

}  // namespace hgamma
