#include "hgamma/horizontal_calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "hgamma/errors.hpp"

namespace hgamma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Vec3 = std::array<double, 3>;

Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Horizontal area of a flat triangle, density taken at the centroid.
double triangle_density(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  const Vec3 N = cross3(sub3(p1, p0), sub3(p2, p0));
  const double xc = (p0[0] + p1[0] + p2[0]) / 3.0;
  const double yc = (p0[1] + p1[1] + p2[1]) / 3.0;
  const double w1 = N[0] - 0.5 * yc * N[2];
  const double w2 = N[1] + 0.5 * xc * N[2];
  return 0.5 * std::hypot(w1, w2);
}

// Sutherland-Hodgman against the planes of an axis box.
std::vector<Vec3> clip_polygon(std::vector<Vec3> poly, const Window& w) {
  for (int a = 0; a < 3 && !poly.empty(); ++a) {
    for (int side = 0; side < 2 && !poly.empty(); ++side) {
      const double bound = side == 0 ? w.lo[a] : w.hi[a];
      if (!std::isfinite(bound)) continue;
      auto keep = [&](const Vec3& p) { return side == 0 ? p[a] >= bound : p[a] <= bound; };
      std::vector<Vec3> out;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec3& cur = poly[i];
        const Vec3& prev = poly[(i + poly.size() - 1) % poly.size()];
        const bool kc = keep(cur), kp = keep(prev);
        if (kc != kp) {
          const double s = (bound - prev[a]) / (cur[a] - prev[a]);
          out.push_back({prev[0] + s * (cur[0] - prev[0]), prev[1] + s * (cur[1] - prev[1]),
                         prev[2] + s * (cur[2] - prev[2])});
        }
        if (kc) out.push_back(cur);
      }
      poly = std::move(out);
    }
  }
  return poly;
}

double polygon_density(const std::vector<Vec3>& poly) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) s += triangle_density(poly[0], poly[i], poly[i + 1]);
  return s;
}

// Six tetrahedra sharing the main diagonal 0-7 of the cube; corners are bit
// masks over (x, y, t).
constexpr std::array<std::array<int, 4>, 6> kKuhn = {{
    {0, 1, 3, 7},
    {0, 1, 5, 7},
    {0, 2, 3, 7},
    {0, 2, 6, 7},
    {0, 4, 5, 7},
    {0, 4, 6, 7},
}};

struct CellRange {
  std::array<int, 3> lo{}, hi{};  // inclusive lower-corner index ranges
  bool empty = false;
};

CellRange cells_in_window(const LatticeSpec& s, const Window& w) {
  CellRange r;
  for (int a = 0; a < 3; ++a) {
    const double step = a == 2 ? s.ht() : s.h;
    const int cells = a == 2 ? s.t_cells : s.eta_cells;
    r.lo[a] = std::isfinite(w.lo[a]) ? std::max(-cells, static_cast<int>(std::floor(w.lo[a] / step + 1e-9)))
                                     : -cells;
    r.hi[a] = std::isfinite(w.hi[a]) ? std::min(cells - 1, static_cast<int>(std::ceil(w.hi[a] / step - 1e-9)) - 1)
                                     : cells - 1;
    if (r.lo[a] > r.hi[a]) r.empty = true;
  }
  return r;
}

void check_window(const LatticeSpec& spec, const Window& w) {
  if (static_cast<int>(w.lo.size()) != spec.dims() || w.hi.size() != w.lo.size())
    throw ConfigError("window dimension does not match lattice");
}

}  // namespace

std::span<const double> HorizontalGradient::at(std::size_t node) const {
  return {values.data() + node * static_cast<std::size_t>(components), static_cast<std::size_t>(components)};
}

double HorizontalGradient::norm(std::size_t node) const {
  if (!valid[node]) return kNaN;
  double s = 0.0;
  for (double g : at(node)) s += g * g;
  return std::sqrt(s);
}

std::vector<double> HorizontalGradient::norms() const {
  std::vector<double> out(valid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = norm(i);
  return out;
}

HorizontalGradient horizontal_gradient(const ScalarField& f) {
  f.validate();
  const Lattice lat(f.spec);
  const int d = 2 * f.spec.n;
  HorizontalGradient g;
  g.spec = f.spec;
  g.components = d;
  g.values.assign(lat.size() * static_cast<std::size_t>(d), kNaN);
  g.valid.assign(lat.size(), 1);
  std::vector<std::vector<int>> plus(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), 0));
  auto minus = plus;
  for (int i = 0; i < d; ++i) {
    plus[i][i] = 1;
    minus[i][i] = -1;
  }
  const double inv = 1.0 / (2.0 * f.spec.h);
  for (std::size_t x = 0; x < lat.size(); ++x) {
    for (int i = 0; i < d; ++i) {
      const std::size_t a = lat.shifted(x, plus[i]);
      const std::size_t b = lat.shifted(x, minus[i]);
      if (a == Lattice::npos || b == Lattice::npos) {
        g.valid[x] = 0;
        break;
      }
      g.values[x * d + i] = (f.values[a] - f.values[b]) * inv;
    }
    if (!g.valid[x])
      for (int i = 0; i < d; ++i) g.values[x * d + i] = kNaN;
  }
  return g;
}

std::string to_string(PerimeterMethod m) {
  switch (m) {
    case PerimeterMethod::SmoothedTv: return "smoothed_tv";
    case PerimeterMethod::SurfaceIntegral: return "surface_integral";
    case PerimeterMethod::Minkowski: return "minkowski";
  }
  return "unknown";
}

PerimeterMethod parse_perimeter_method(const std::string& s) {
  if (s == "smoothed_tv") return PerimeterMethod::SmoothedTv;
  if (s == "surface_integral") return PerimeterMethod::SurfaceIntegral;
  if (s == "minkowski") return PerimeterMethod::Minkowski;
  throw ConfigError("unknown perimeter method '" + s + "'");
}

std::vector<char> indicator(const JumpGeometry& E, const LatticeSpec& spec) {
  if (E.kind == JumpGeometry::Kind::Empty) return std::vector<char>(spec.node_count(), E.complement ? 1 : 0);
  const ScalarField phi = level_function(E, spec);
  std::vector<char> chi(phi.values.size());
  for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = phi.values[i] < 0.0 ? 1 : 0;
  return chi;
}

double level_set_perimeter(const ScalarField& phi, double level, const Window& window) {
  phi.validate();
  const LatticeSpec& s = phi.spec;
  if (s.n != 1) throw ConfigError("surface-integral perimeter is implemented for n = 1");
  check_window(s, window);
  const Lattice lat(s);
  const CellRange cr = cells_in_window(s, window);
  if (cr.empty) return 0.0;
  const std::array<double, 3> step = {s.h, s.h, s.ht()};
  std::array<std::size_t, 8> offset{};
  for (int m = 0; m < 8; ++m)
    for (int a = 0; a < 3; ++a)
      if (m & (1 << a)) offset[m] += lat.stride(a);

  double total = 0.0;
  std::array<double, 8> val{};
  std::array<Vec3, 8> pos{};
  for (int i = cr.lo[0]; i <= cr.hi[0]; ++i) {
    for (int j = cr.lo[1]; j <= cr.hi[1]; ++j) {
      const std::size_t row = lat.index({{i, j}, cr.lo[2]});
      for (int k = cr.lo[2]; k <= cr.hi[2]; ++k) {
        const std::size_t origin = row + static_cast<std::size_t>(k - cr.lo[2]);
        bool neg = false, pos_side = false;
        for (int m = 0; m < 8; ++m) {
          val[m] = phi.values[origin + offset[m]] - level;
          (val[m] < 0.0 ? neg : pos_side) = true;
        }
        if (!neg || !pos_side) continue;
        const std::array<int, 3> c = {i, j, k};
        bool inside = true;
        for (int a = 0; a < 3; ++a) {
          const double lo = c[a] * step[a], hi = (c[a] + 1) * step[a];
          const double tol = 1e-9 * step[a];
          if (lo < window.lo[a] - tol || hi > window.hi[a] + tol) inside = false;
          for (int m = 0; m < 8; ++m) pos[m][a] = (m & (1 << a)) ? hi : lo;
        }
        for (const auto& tet : kKuhn) {
          std::array<int, 4> in{}, out{};
          int ni = 0, no = 0;
          for (int v : tet) (val[v] < 0.0 ? in[ni++] : out[no++]) = v;
          if (ni == 0 || no == 0) continue;
          auto cut = [&](int a, int b) {
            const double th = val[a] / (val[a] - val[b]);
            return Vec3{pos[a][0] + th * (pos[b][0] - pos[a][0]), pos[a][1] + th * (pos[b][1] - pos[a][1]),
                        pos[a][2] + th * (pos[b][2] - pos[a][2])};
          };
          std::vector<Vec3> poly;
          if (ni == 1) {
            poly = {cut(in[0], out[0]), cut(in[0], out[1]), cut(in[0], out[2])};
          } else if (no == 1) {
            poly = {cut(out[0], in[0]), cut(out[0], in[1]), cut(out[0], in[2])};
          } else {
            // Quadrilateral, vertices ordered around the cut.
            poly = {cut(in[0], out[0]), cut(in[0], out[1]), cut(in[1], out[1]), cut(in[1], out[0])};
          }
          if (!inside) poly = clip_polygon(std::move(poly), window);
          if (poly.size() >= 3) total += polygon_density(poly);
        }
      }
    }
  }
  return total;
}

double smoothed_tv_perimeter(const ScalarField& phi, double level, const Window& window, double width) {
  if (!(width > 0.0)) throw ConfigError("smoothing width must be positive");
  check_window(phi.spec, window);
  const Lattice lat(phi.spec);
  const auto g = horizontal_gradient(phi).norms();
  const double vol = band_integral(lat, phi.values, g, window, level - width, level + width);
  if (!std::isfinite(vol)) throw DomainError("smoothing band reaches the lattice boundary");
  return vol / (2.0 * width);
}

PerimeterReport h_perimeter(const JumpGeometry& E, const LatticeSpec& spec, const Window& window,
                            PerimeterMethod method) {
  check_window(spec, window);
  PerimeterReport rep;
  rep.method = method;
  rep.window = window;
  if (E.kind == JumpGeometry::Kind::Empty) {
    rep.empty_boundary = true;
    return rep;
  }
  switch (method) {
    case PerimeterMethod::SurfaceIntegral:
      rep.perimeter = level_set_perimeter(level_function(E, spec), 0.0, window);
      break;
    case PerimeterMethod::SmoothedTv:
      rep.perimeter = smoothed_tv_perimeter(level_function(E, spec), 0.0, window, 2.0 * spec.h);
      break;
    case PerimeterMethod::Minkowski: {
      const double top = spec.eta_half() / 4.0;
      std::vector<double> radii;
      for (int k = 0; k < 5; ++k) radii.push_back(top * (1.0 - 0.15 * k));
      return minkowski_content(E, spec, radii, window);
    }
  }
  rep.empty_boundary = rep.perimeter == 0.0;
  return rep;
}

PerimeterReport minkowski_content(const JumpGeometry& E, const LatticeSpec& spec, std::vector<double> radii,
                                  const Window& window) {
  check_window(spec, window);
  if (radii.size() < 3) throw ConfigError("Minkowski content needs at least three radii");
  for (double r : radii)
    if (!(r > 2.0 * spec.h) || !(r < spec.eta_half() / 4.0))
      throw DomainError("Minkowski radius " + std::to_string(r) + " outside (2h, R/4)");
  PerimeterReport rep;
  rep.method = PerimeterMethod::Minkowski;
  rep.window = window;
  if (E.kind == JumpGeometry::Kind::Empty) {
    rep.empty_boundary = true;
    return rep;
  }
  const Lattice lat(spec);
  SignedDistanceField rho;
  try {
    rho = signed_distance(E, spec);
  } catch (const DomainError&) {
    rep.empty_boundary = true;
    return rep;
  }
  std::sort(radii.begin(), radii.end(), std::greater<>());
  // Tube volumes are odd in r, so v / 2r = P + c r^2 + O(r^4); fit P and c.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double r : radii) {
    const double y = band_volume(lat, rho.values, window, -r, r, 8) / (2.0 * r);
    rep.samples.emplace_back(r, y);
    const double x = r * r;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(radii.size());
  const double det = m * sxx - sx * sx;
  if (!(det > 0.0)) throw ConfigError("Minkowski radii are degenerate");
  rep.perimeter = std::max(0.0, (sy * sxx - sx * sxy) / det);
  rep.empty_boundary = rep.perimeter == 0.0;
  return rep;
}

CoareaReport coarea_check(const ScalarField& f, const Window& window, int levels) {
  if (levels < 8) throw ConfigError("coarea check needs at least 8 levels");
  check_window(f.spec, window);
  const Lattice lat(f.spec);
  const auto g = horizontal_gradient(f).norms();
  CoareaReport rep;
  rep.levels = levels;
  rep.lhs = integrate_field(lat, g, window);
  if (!std::isfinite(rep.lhs)) throw DomainError("coarea window reaches the lattice boundary");
  // Level range over the nodes in the window, with roundoff slack at its faces.
  Window grown = window;
  for (int a = 0; a < f.spec.dims(); ++a) {
    const double step = a == f.spec.dims() - 1 ? f.spec.ht() : f.spec.h;
    grown.lo[a] -= 1e-9 * step;
    grown.hi[a] += 1e-9 * step;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!grown.contains(lat.coords(i))) continue;
    lo = std::min(lo, f.values[i]);
    hi = std::max(hi, f.values[i]);
  }
  if (hi > lo) {
    const double dc = (hi - lo) / levels;
    for (int k = 0; k < levels; ++k) rep.rhs += dc * level_set_perimeter(f, lo + (k + 0.5) * dc, window);
  }
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.relative_gap = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
  return rep;
}

double slice_variation(const ScalarField& f, const FrameVector& direction, int axis, double offset,
                       const Window& window) {
  f.validate();
  const LatticeSpec& s = f.spec;
  check_window(s, window);
  direction.validate(s.n);
  if (!direction.is_horizontal()) throw DomainError("slicing direction must be horizontal");
  if (axis < 1 || axis > 2 * s.n) throw ConfigError("hyperplane axis outside [1, 2n]");
  if (direction.index != axis) throw DomainError("slicing direction is tangent to the hyperplane");
  const Lattice lat(s);
  const int a = axis - 1;
  const int plane = static_cast<int>(std::lround(offset / s.h));
  if (std::abs(plane) > s.eta_cells) throw DomainError("hyperplane outside the lattice");

  // Trapezoid weights for the plane coordinates: nodes on the window edge count half.
  auto weight = [&](int axis_id, int idx) {
    const bool is_t = axis_id == s.dims() - 1;
    const double step = is_t ? s.ht() : s.h;
    const double x = idx * step;
    const double tol = 1e-9 * step;
    if (x < window.lo[axis_id] - tol || x > window.hi[axis_id] + tol) return 0.0;
    const bool edge = std::abs(x - window.lo[axis_id]) < tol || std::abs(x - window.hi[axis_id]) < tol;
    const double lo = std::max(x - 0.5 * step, window.lo[axis_id]);
    const double hi = std::min(x + 0.5 * step, window.hi[axis_id]);
    return edge ? 0.5 * step : hi - lo;
  };

  std::vector<int> step_plus(static_cast<std::size_t>(2 * s.n), 0), step_minus = step_plus;
  step_plus[a] = 1;
  step_minus[a] = -1;
  const double lo_axis = window.lo[a], hi_axis = window.hi[a];
  double total = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const NodeIndex ix = lat.node(i);
    if (ix.eta[a] != plane) continue;
    double w = 1.0;
    for (int b = 0; b < 2 * s.n && w > 0.0; ++b)
      if (b != a) w *= weight(b, ix.eta[b]);
    if (w > 0.0) w *= weight(s.dims() - 1, ix.k);
    if (w == 0.0) continue;
    // Walk the W line both ways while the axis coordinate stays in the window.
    double var = 0.0;
    for (const auto* st : {&step_plus, &step_minus}) {
      std::size_t cur = i;
      int at = plane;
      const int dir = (*st)[a];
      while (true) {
        const double next = (at + dir) * s.h;
        if (next < lo_axis - 1e-9 * s.h || next > hi_axis + 1e-9 * s.h) break;
        const std::size_t nb = lat.shifted(cur, *st);
        if (nb == Lattice::npos) break;
        var += std::abs(f.values[nb] - f.values[cur]);
        cur = nb;
        at += dir;
      }
    }
    total += w * var;
  }
  return total;
}

VolumeExponent ball_volume_exponent(const CcDistance& d, std::vector<double> radii) {
  if (radii.size() < 3) throw ConfigError("volume exponent needs at least three radii");
  std::sort(radii.begin(), radii.end());
  if (!(radii.front() > 0.0)) throw ConfigError("radii must be positive");
  if (radii.back() < 2.0 * radii.front()) throw ConfigError("radii must span at least a factor of two");
  if (radii.back() > d.covered_radius() + 1e-9)
    throw DomainError("radius " + std::to_string(radii.back()) + " exceeds the covered radius");
  const Lattice& lat = d.lattice();
  const Window whole = Window::whole(lat.spec());
  VolumeExponent out;
  out.radii = radii;
  double mx = 0.0, my = 0.0;
  for (double r : radii) {
    const double v = band_volume(lat, d.field().values, whole, -1.0, r);
    if (!(v > 0.0)) throw DomainError("ball of radius " + std::to_string(r) + " is below lattice resolution");
    out.volumes.push_back(v);
    mx += std::log(r);
    my += std::log(v);
  }
  mx /= static_cast<double>(radii.size());
  my /= static_cast<double>(radii.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double x = std::log(radii[i]) - mx;
    sxy += x * (std::log(out.volumes[i]) - my);
    sxx += x * x;
  }
  out.fitted_slope = sxy / sxx;
  return out;
}

VolumeExponent ball_volume_exponent(const LatticeSpec& spec, std::vector<double> radii) {
  return ball_volume_exponent(CcDistance(spec), std::move(radii));
}

double ball_diameter_ratio(const CcDistance& d, double r) {
  if (!(r > 0.0)) throw ConfigError("ball radius must be positive");
  if (2.0 * r > d.covered_radius() + 1e-9) throw DomainError("lattice box must cover B(0, 2r)");
  const Lattice& lat = d.lattice();
  const LatticeSpec& s = lat.spec();
  const auto& dist = d.field().values;
  const double tol = 1e-9;
  std::vector<std::size_t> plane, shell;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!(dist[i] <= r + tol)) continue;
    if (lat.node(i).k == 0)
      plane.push_back(i);
    else if (dist[i] >= r - 2.0 * s.h)
      shell.push_back(i);
  }
  constexpr std::size_t kShellSamples = 1500;
  std::vector<std::size_t> pts = plane;
  const std::size_t stride = std::max<std::size_t>(1, shell.size() / kShellSamples);
  for (std::size_t i = 0; i < shell.size(); i += stride) pts.push_back(shell[i]);

  std::vector<HPoint> P;
  P.reserve(pts.size());
  for (std::size_t i : pts) P.push_back(lat.point(i));
  double diam = 0.0;
  for (std::size_t a = 0; a < P.size(); ++a) {
    const HPoint inv = group_inv(P[a]);
    for (std::size_t b = a + 1; b < P.size(); ++b) diam = std::max(diam, d.from_origin(group_mul(inv, P[b])));
  }
  return diam / (2.0 * r);
}

}  // namespace hgamma
