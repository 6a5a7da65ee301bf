#include "hgamma/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "hgamma/errors.hpp"

namespace hgamma {

namespace {

constexpr int kMaxDims = 15;  // n <= 7
constexpr std::size_t kMaxNodes = std::size_t{1} << 28;

}  // namespace

LatticeSpec LatticeSpec::covering_ball(int n, double radius, double h) {
  if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
  // The endpoint of a horizontal curve of length R has |t| at most R^2 / (2 pi), attained by a half circle.
  const double t_half = radius * radius / (2.0 * M_PI);
  LatticeSpec s = box(n, h, radius + h, t_half);
  s.t_cells += 2;
  return s;
}

LatticeSpec LatticeSpec::box(int n, double h, double eta_half, double t_half) {
  if (!(h > 0.0)) throw ConfigError("lattice spacing h must be positive");
  if (!(eta_half > 0.0) || !(t_half > 0.0)) throw ConfigError("lattice half widths must be positive");
  LatticeSpec s;
  s.n = n;
  s.h = h;
  s.eta_cells = static_cast<int>(std::ceil(eta_half / h - 1e-9));
  s.t_cells = static_cast<int>(std::ceil(t_half / s.ht() - 1e-9));
  s.move_radius = n == 1 ? 3 : 1;
  s.validate();
  return s;
}

double LatticeSpec::cell_volume() const { return std::pow(h, 2 * n) * ht(); }

std::size_t LatticeSpec::node_count() const {
  std::size_t c = static_cast<std::size_t>(t_extent());
  for (int j = 0; j < 2 * n; ++j) c *= static_cast<std::size_t>(eta_extent());
  return c;
}

void LatticeSpec::validate() const {
  GroupConfig{n}.validate();
  if (2 * n + 1 > kMaxDims) throw ConfigError("lattices support n <= 7");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("lattice spacing h must be positive");
  if (eta_cells < 1 || t_cells < 1) throw ConfigError("lattice needs at least one cell per half axis");
  if (move_radius < 1) throw ConfigError("move_radius must be >= 1");
  // Guard the product before it overflows.
  double approx = static_cast<double>(t_extent()) * std::pow(static_cast<double>(eta_extent()), 2 * n);
  if (approx > static_cast<double>(kMaxNodes))
    throw ConfigError("lattice too large: " + std::to_string(approx) + " nodes");
}

bool operator==(const LatticeSpec& a, const LatticeSpec& b) {
  return a.n == b.n && a.h == b.h && a.eta_cells == b.eta_cells &&
         a.t_cells == b.t_cells && a.move_radius == b.move_radius;
}

Window Window::unbounded(int n) {
  const auto d = static_cast<std::size_t>(2 * n + 1);
  return {std::vector<double>(d, -std::numeric_limits<double>::infinity()),
          std::vector<double>(d, std::numeric_limits<double>::infinity())};
}

Window Window::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.size() % 2 != 1) throw ConfigError("window bounds need 2n+1 entries");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw ConfigError("window has lo > hi on axis " + std::to_string(i));
  return {std::move(lo), std::move(hi)};
}

Window Window::whole(const LatticeSpec& spec) {
  std::vector<double> lo(static_cast<std::size_t>(spec.dims()), -spec.eta_half());
  std::vector<double> hi(static_cast<std::size_t>(spec.dims()), spec.eta_half());
  lo.back() = -spec.t_half();
  hi.back() = spec.t_half();
  return {std::move(lo), std::move(hi)};
}

bool Window::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double Window::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

Lattice::Lattice(LatticeSpec spec) : spec_(spec) {
  spec_.validate();
  const int d = spec_.dims();
  strides_.assign(static_cast<std::size_t>(d), 1);
  strides_[d - 1] = 1;
  std::size_t s = static_cast<std::size_t>(spec_.t_extent());
  for (int a = d - 2; a >= 0; --a) {
    strides_[a] = s;
    s *= static_cast<std::size_t>(spec_.eta_extent());
  }
  size_ = s;
}

std::size_t Lattice::index(const NodeIndex& ix) const {
  if (!inside(ix)) throw DomainError("node index outside lattice");
  std::size_t idx = static_cast<std::size_t>(ix.k + spec_.t_cells);
  for (int a = 0; a < 2 * spec_.n; ++a) idx += static_cast<std::size_t>(ix.eta[a] + spec_.eta_cells) * strides_[a];
  return idx;
}

NodeIndex Lattice::node(std::size_t idx) const {
  NodeIndex ix;
  ix.eta.resize(static_cast<std::size_t>(2 * spec_.n));
  for (int a = 0; a < 2 * spec_.n; ++a) {
    ix.eta[a] = static_cast<int>(idx / strides_[a]) - spec_.eta_cells;
    idx %= strides_[a];
  }
  ix.k = static_cast<int>(idx) - spec_.t_cells;
  return ix;
}

bool Lattice::inside(const NodeIndex& ix) const {
  if (static_cast<int>(ix.eta.size()) != 2 * spec_.n) return false;
  if (std::abs(ix.k) > spec_.t_cells) return false;
  return std::all_of(ix.eta.begin(), ix.eta.end(), [&](int i) { return std::abs(i) <= spec_.eta_cells; });
}

HPoint Lattice::point(std::size_t idx) const {
  const NodeIndex ix = node(idx);
  std::vector<double> eta(ix.eta.size());
  for (std::size_t a = 0; a < eta.size(); ++a) eta[a] = ix.eta[a] * spec_.h;
  return HPoint(std::move(eta), ix.k * spec_.ht());
}

std::vector<double> Lattice::coords(std::size_t idx) const {
  const NodeIndex ix = node(idx);
  std::vector<double> x(ix.eta.size() + 1);
  for (std::size_t a = 0; a < ix.eta.size(); ++a) x[a] = ix.eta[a] * spec_.h;
  x.back() = ix.k * spec_.ht();
  return x;
}

std::vector<double> Lattice::fractional(const HPoint& p) const {
  if (p.n() != spec_.n) throw ConfigError("point dimension does not match lattice");
  std::vector<double> f(static_cast<std::size_t>(spec_.dims()));
  for (int a = 0; a < 2 * spec_.n; ++a) f[a] = p.eta[a] / spec_.h + spec_.eta_cells;
  f.back() = p.t / spec_.ht() + spec_.t_cells;
  return f;
}

bool Lattice::covers(const HPoint& p) const {
  const auto f = fractional(p);
  constexpr double tol = 1e-9;
  for (int a = 0; a < spec_.dims(); ++a) {
    const double ext = a < 2 * spec_.n ? spec_.eta_extent() - 1 : spec_.t_extent() - 1;
    if (f[a] < -tol || f[a] > ext + tol) return false;
  }
  return true;
}

double Lattice::interpolate(std::span<const double> values, const HPoint& p) const {
  if (values.size() != size_) throw ConfigError("field size does not match lattice");
  if (!covers(p)) throw DomainError("point outside the sampled window");
  const auto f = fractional(p);
  const int d = spec_.dims();
  std::array<int, kMaxDims> base{};
  std::array<double, kMaxDims> u{};
  for (int a = 0; a < d; ++a) {
    const int ext = a < 2 * spec_.n ? spec_.eta_extent() : spec_.t_extent();
    int b = static_cast<int>(std::floor(f[a]));
    b = std::clamp(b, 0, ext - 2);
    base[a] = b;
    u[a] = std::clamp(f[a] - b, 0.0, 1.0);
  }
  std::size_t origin = 0;
  for (int a = 0; a < d; ++a) origin += static_cast<std::size_t>(base[a]) * strides_[a];
  double acc = 0.0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    double w = 1.0;
    std::size_t idx = origin;
    for (int a = 0; a < d; ++a) {
      if (mask & (1u << a)) {
        w *= u[a];
        idx += strides_[a];
      } else {
        w *= 1.0 - u[a];
      }
    }
    if (w != 0.0) acc += w * values[idx];
  }
  return acc;
}

std::size_t Lattice::shifted(std::size_t idx, std::span<const int> a) const {
  const int n = spec_.n;
  std::array<int, kMaxDims> ii{};
  std::size_t rem = idx;
  for (int j = 0; j < 2 * n; ++j) {
    ii[j] = static_cast<int>(rem / strides_[j]) - spec_.eta_cells;
    rem %= strides_[j];
  }
  const int k = static_cast<int>(rem) - spec_.t_cells;
  long twist = 0;
  std::size_t out = idx;
  for (int j = 0; j < 2 * n; ++j) {
    const int ni = ii[j] + a[j];
    if (ni < -spec_.eta_cells || ni > spec_.eta_cells) return npos;
    out += static_cast<std::ptrdiff_t>(a[j]) * static_cast<std::ptrdiff_t>(strides_[j]);
  }
  for (int j = 0; j < n; ++j) twist += static_cast<long>(ii[j]) * a[j + n] - static_cast<long>(ii[j + n]) * a[j];
  const long dk = twist;
  const long nk = k + dk;
  if (nk < -spec_.t_cells || nk > spec_.t_cells) return npos;
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(out) + dk);
}

std::size_t Lattice::shifted(const NodeIndex& ix, std::span<const int> a) const {
  return shifted(index(ix), a);
}

std::vector<HorizontalMove> horizontal_moves(const LatticeSpec& spec) {
  const int d = 2 * spec.n;
  const int r = spec.move_radius;
  std::vector<HorizontalMove> moves;
  std::vector<int> a(static_cast<std::size_t>(d), -r);
  while (true) {
    int g = 0;
    for (int x : a) g = std::gcd(g, std::abs(x));
    if (g == 1) {
      double len2 = 0.0;
      for (int x : a) len2 += static_cast<double>(x) * x;
      moves.push_back({a, spec.h * std::sqrt(len2)});
    }
    int j = 0;
    while (j < d && a[j] == r) a[j++] = -r;
    if (j == d) break;
    ++a[j];
  }
  std::stable_sort(moves.begin(), moves.end(),
                   [](const HorizontalMove& x, const HorizontalMove& y) { return x.length < y.length; });
  return moves;
}

ScalarField::ScalarField(LatticeSpec s, std::vector<double> v) : spec(s), values(std::move(v)) { validate(); }

void ScalarField::validate() const {
  spec.validate();
  if (values.size() != spec.node_count()) throw ConfigError("field size does not match lattice");
}

ScalarField sample_field(const LatticeSpec& spec, const std::function<double(const HPoint&)>& f) {
  Lattice lat(spec);
  std::vector<double> v(lat.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(lat.point(i));
  return ScalarField(spec, std::move(v));
}

namespace {

// Visits every cell (identified by its lower corner) together with its corner
// values and coordinate box.  Cells fully outside the window are skipped.
template <typename Visit>
void for_each_cell(const Lattice& lat, std::span<const double> values, const Window& window, Visit&& visit) {
  const LatticeSpec& s = lat.spec();
  const int d = s.dims();
  if (values.size() != lat.size()) throw ConfigError("field size does not match lattice");
  if (static_cast<int>(window.lo.size()) != d) throw ConfigError("window dimension does not match lattice");
  std::array<int, kMaxDims> lo_i{}, hi_i{}, cur{};
  std::array<double, kMaxDims> step{};
  for (int a = 0; a < d; ++a) {
    const bool is_t = a == d - 1;
    step[a] = is_t ? s.ht() : s.h;
    const int cells = is_t ? s.t_cells : s.eta_cells;
    lo_i[a] = std::max(-cells, static_cast<int>(std::floor(window.lo[a] / step[a])));
    hi_i[a] = std::min(cells - 1, static_cast<int>(std::ceil(window.hi[a] / step[a])) - 1);
    if (window.lo[a] == -std::numeric_limits<double>::infinity()) lo_i[a] = -cells;
    if (window.hi[a] == std::numeric_limits<double>::infinity()) hi_i[a] = cells - 1;
    if (lo_i[a] > hi_i[a]) return;
    cur[a] = lo_i[a];
  }
  const unsigned ncorner = 1u << d;
  std::vector<double> corner(ncorner);
  std::vector<double> cell_lo(static_cast<std::size_t>(d)), cell_hi(static_cast<std::size_t>(d));
  while (true) {
    std::size_t origin = 0;
    bool inside = true;
    for (int a = 0; a < d; ++a) {
      const int cells = a == d - 1 ? s.t_cells : s.eta_cells;
      origin += static_cast<std::size_t>(cur[a] + cells) * lat.stride(a);
      cell_lo[a] = cur[a] * step[a];
      cell_hi[a] = (cur[a] + 1) * step[a];
      const double tol = 1e-9 * step[a];
      if (cell_lo[a] < window.lo[a] - tol || cell_hi[a] > window.hi[a] + tol) inside = false;
    }
    for (unsigned m = 0; m < ncorner; ++m) {
      std::size_t idx = origin;
      for (int a = 0; a < d; ++a)
        if (m & (1u << a)) idx += lat.stride(a);
      corner[m] = values[idx];
    }
    visit(std::span<const double>(corner), std::span<const double>(cell_lo), std::span<const double>(cell_hi),
          inside, origin);
    int a = d - 1;
    while (a >= 0 && cur[a] == hi_i[a]) {
      cur[a] = lo_i[a];
      --a;
    }
    if (a < 0) break;
    ++cur[a];
  }
}

// Calls f(value, other) at the midpoints of the sub^d sub-cells that lie in the
// window; `other` interpolates a second corner set when one is given.
template <typename F>
void for_each_subsample(std::span<const double> corner, std::span<const double> lo, std::span<const double> hi,
                        const Window& window, int sub, F&& f, std::span<const double> other = {}) {
  const int d = static_cast<int>(lo.size());
  std::array<int, kMaxDims> c{};
  std::array<double, kMaxDims> u{}, x{};
  while (true) {
    bool in = true;
    for (int a = 0; a < d; ++a) {
      u[a] = (c[a] + 0.5) / sub;
      x[a] = lo[a] + u[a] * (hi[a] - lo[a]);
      if (x[a] < window.lo[a] || x[a] > window.hi[a]) in = false;
    }
    if (in) {
      double acc = 0.0, acc2 = 0.0;
      for (unsigned m = 0; m < corner.size(); ++m) {
        double w = 1.0;
        for (int a = 0; a < d; ++a) w *= (m & (1u << a)) ? u[a] : 1.0 - u[a];
        acc += w * corner[m];
        if (!other.empty()) acc2 += w * other[m];
      }
      f(acc, acc2);
    }
    int a = 0;
    while (a < d && c[a] == sub - 1) c[a++] = 0;
    if (a == d) break;
    ++c[a];
  }
}

int pow_int(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

double integrate_field(const Lattice& lat, std::span<const double> values, const Window& window, int sub) {
  if (sub < 1) throw ConfigError("sub-cell count must be >= 1");
  const double vol = lat.spec().cell_volume();
  const double sub_vol = vol / pow_int(sub, lat.spec().dims());
  double total = 0.0;
  for_each_cell(lat, values, window,
                [&](std::span<const double> corner, std::span<const double> lo, std::span<const double> hi,
                    bool inside, std::size_t) {
                  if (inside) {
                    double mean = 0.0;
                    for (double c : corner) mean += c;
                    total += vol * mean / static_cast<double>(corner.size());
                    return;
                  }
                  double part = 0.0;
                  for_each_subsample(corner, lo, hi, window, sub, [&](double v, double) { part += v; });
                  total += sub_vol * part;
                });
  return total;
}

double band_volume(const Lattice& lat, std::span<const double> values, const Window& window, double lo,
                   double hi, int sub) {
  if (sub < 1) throw ConfigError("sub-cell count must be >= 1");
  const double vol = lat.spec().cell_volume();
  const double sub_vol = vol / pow_int(sub, lat.spec().dims());
  double total = 0.0;
  for_each_cell(lat, values, window,
                [&](std::span<const double> corner, std::span<const double> clo, std::span<const double> chi,
                    bool inside, std::size_t) {
                  const auto [mn, mx] = std::minmax_element(corner.begin(), corner.end());
                  if (*mx <= lo || *mn >= hi) return;
                  if (inside && *mn > lo && *mx < hi) {
                    total += vol;
                    return;
                  }
                  double count = 0.0;
                  for_each_subsample(corner, clo, chi, window, sub, [&](double v, double) {
                    if (v > lo && v < hi) count += 1.0;
                  });
                  total += sub_vol * count;
                });
  return total;
}

double band_integral(const Lattice& lat, std::span<const double> level, std::span<const double> weight,
                     const Window& window, double lo, double hi, int sub) {
  if (sub < 1) throw ConfigError("sub-cell count must be >= 1");
  if (weight.size() != lat.size()) throw ConfigError("weight size does not match lattice");
  const int d = lat.spec().dims();
  const double vol = lat.spec().cell_volume();
  const double sub_vol = vol / pow_int(sub, d);
  std::vector<std::size_t> offset(std::size_t{1} << d, 0);
  for (std::size_t m = 0; m < offset.size(); ++m)
    for (int a = 0; a < d; ++a)
      if (m & (std::size_t{1} << a)) offset[m] += lat.stride(a);
  std::vector<double> wc(offset.size());
  double total = 0.0;
  for_each_cell(lat, level, window,
                [&](std::span<const double> corner, std::span<const double> clo, std::span<const double> chi,
                    bool inside, std::size_t origin) {
                  const auto [mn, mx] = std::minmax_element(corner.begin(), corner.end());
                  if (*mx <= lo || *mn >= hi) return;
                  for (std::size_t m = 0; m < offset.size(); ++m) wc[m] = weight[origin + offset[m]];
                  if (inside && *mn > lo && *mx < hi) {
                    double mean = 0.0;
                    for (double w : wc) mean += w;
                    total += vol * mean / static_cast<double>(wc.size());
                    return;
                  }
                  double part = 0.0;
                  for_each_subsample(
                      corner, clo, chi, window, sub,
                      [&](double v, double w) {
                        if (v > lo && v < hi) part += w;
                      },
                      wc);
                  total += sub_vol * part;
                });
  return total;
}

std::vector<double> trapezoid_weights(const Lattice& lat, const Window& window) {
  const LatticeSpec& s = lat.spec();
  const int d = s.dims();
  if (static_cast<int>(window.lo.size()) != d) throw ConfigError("window dimension does not match lattice");
  // Per-axis weight tables indexed by lattice coordinate.
  std::vector<std::vector<double>> axis_w(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const bool is_t = a == d - 1;
    const double step = is_t ? s.ht() : s.h;
    const int cells = is_t ? s.t_cells : s.eta_cells;
    auto& w = axis_w[a];
    w.resize(static_cast<std::size_t>(2 * cells + 1));
    for (int i = -cells; i <= cells; ++i) {
      const double lo = std::max((i - 0.5) * step, std::max(window.lo[a], -cells * step));
      const double hi = std::min((i + 0.5) * step, std::min(window.hi[a], cells * step));
      w[static_cast<std::size_t>(i + cells)] = std::max(0.0, hi - lo) / step;
    }
  }
  const double vol = s.cell_volume();
  std::vector<double> out(lat.size());
  for (std::size_t idx = 0; idx < lat.size(); ++idx) {
    std::size_t rem = idx;
    double w = vol;
    for (int a = 0; a < d; ++a) {
      const std::size_t c = rem / lat.stride(a);
      rem %= lat.stride(a);
      w *= axis_w[a][c];
      if (w == 0.0) break;
    }
    out[idx] = w;
  }
  return out;
}

}  // namespace hgamma
