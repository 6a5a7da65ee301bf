#pragma once

// Regular coordinate lattice over a box in H^n.
//
// Nodes sit at eta_j = i_j * h and t = k * ht with ht = h^2 / 2.  With this
// spacing the node set is a discrete subgroup, so every horizontal move
// p -> p * (h a, 0) with integer a lands exactly on another node.  The t shift of
// such a move is sum_j (i_j a_{j+n} - i_{j+n} a_j) index steps.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "hgamma/heisenberg.hpp"

namespace hgamma {

struct LatticeSpec {
  int n = 1;
  double h = 0.05;
  int eta_cells = 30;   // eta indices in [-eta_cells, eta_cells]
  int t_cells = 143;    // t indices in [-t_cells, t_cells]
  int move_radius = 3;  // horizontal moves use integer vectors with entries in [-r, r]

  // Smallest lattice whose box holds the CC ball B(0, radius) plus one cell of margin.
  static LatticeSpec covering_ball(int n, double radius, double h);
  static LatticeSpec box(int n, double h, double eta_half, double t_half);

  double ht() const { return 0.5 * h * h; }
  int dims() const { return 2 * n + 1; }
  int eta_extent() const { return 2 * eta_cells + 1; }
  int t_extent() const { return 2 * t_cells + 1; }
  double eta_half() const { return eta_cells * h; }
  double t_half() const { return t_cells * ht(); }
  double cell_volume() const;
  std::size_t node_count() const;
  void validate() const;
};

bool operator==(const LatticeSpec& a, const LatticeSpec& b);

// Axis-aligned coordinate box; axes 0..2n-1 are eta, axis 2n is t.
struct Window {
  std::vector<double> lo;
  std::vector<double> hi;

  static Window unbounded(int n);
  static Window box(std::vector<double> lo, std::vector<double> hi);
  static Window whole(const LatticeSpec& spec);

  bool contains(std::span<const double> x) const;
  double volume() const;
};

// Integer lattice coordinates of a node.
struct NodeIndex {
  std::vector<int> eta;
  int k = 0;
};

class Lattice {
 public:
  explicit Lattice(LatticeSpec spec);

  const LatticeSpec& spec() const { return spec_; }
  std::size_t size() const { return size_; }

  std::size_t index(const NodeIndex& ix) const;
  NodeIndex node(std::size_t idx) const;
  bool inside(const NodeIndex& ix) const;
  HPoint point(std::size_t idx) const;
  std::vector<double> coords(std::size_t idx) const;  // eta..., t

  // Fractional index coordinates of an arbitrary point (may be outside the box).
  std::vector<double> fractional(const HPoint& p) const;
  bool covers(const HPoint& p) const;

  // Multilinear interpolation of nodal values; throws DomainError outside the box.
  double interpolate(std::span<const double> values, const HPoint& p) const;

  // Index of x * (h a, 0) or nullopt-equivalent SIZE_MAX if outside.
  std::size_t shifted(std::size_t idx, std::span<const int> a) const;
  std::size_t shifted(const NodeIndex& ix, std::span<const int> a) const;

  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  LatticeSpec spec_;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;  // per axis, t fastest
};

// A horizontal move p -> p * (h a, 0), costing its Euclidean length h |a|.
struct HorizontalMove {
  std::vector<int> a;
  double length = 0.0;
};

// Primitive integer vectors with entries in [-move_radius, move_radius], sorted by length.
std::vector<HorizontalMove> horizontal_moves(const LatticeSpec& spec);

struct ScalarField {
  LatticeSpec spec;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(LatticeSpec s, std::vector<double> v);

  void validate() const;
};

ScalarField sample_field(const LatticeSpec& spec, const std::function<double(const HPoint&)>& f);

// Cell quadrature with multilinear interpolation of nodal values.  Cells that
// straddle the window or the integrand threshold are split into `sub`^d
// sub-cells evaluated at their midpoints.
double integrate_field(const Lattice& lat, std::span<const double> values, const Window& window,
                       int sub = 4);

// Volume of {x in window : lo < f(x) < hi} for the multilinear interpolant of f.
double band_volume(const Lattice& lat, std::span<const double> values, const Window& window, double lo,
                   double hi, int sub = 4);

// Quadrature weights of the nodes for the window: a node owns the part of its
// dual cell inside the window and the box.  Nodes on a face get half a cell,
// so the weights are additive over windows that share faces.
std::vector<double> trapezoid_weights(const Lattice& lat, const Window& window);

// Integral of the multilinear interpolant of `weight` over {x in window : lo < level(x) < hi}.
double band_integral(const Lattice& lat, std::span<const double> level, std::span<const double> weight,
                     const Window& window, double lo, double hi, int sub = 4);

}  // namespace hgamma
