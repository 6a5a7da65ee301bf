#pragma once

// Horizontal derivatives, perimeters and volumes on the lattice.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgamma/cc_metric.hpp"
#include "hgamma/geometry.hpp"
#include "hgamma/lattice.hpp"

namespace hgamma {

// Horizontal gradient (W_1 f, ..., W_2n f) per node.  W_i flows of length h map
// lattice nodes to lattice nodes, so centered differences are exact lookups.
// Nodes whose stencil leaves the box are flagged invalid and hold NaN.
struct HorizontalGradient {
  LatticeSpec spec;
  int components = 2;
  std::vector<double> values;  // node-major, `components` entries per node
  std::vector<char> valid;

  std::span<const double> at(std::size_t node) const;
  double norm(std::size_t node) const;
  std::vector<double> norms() const;
};

HorizontalGradient horizontal_gradient(const ScalarField& f);

enum class PerimeterMethod { SmoothedTv, SurfaceIntegral, Minkowski };

std::string to_string(PerimeterMethod m);
PerimeterMethod parse_perimeter_method(const std::string& s);

struct PerimeterReport {
  double perimeter = 0.0;
  PerimeterMethod method = PerimeterMethod::SurfaceIntegral;
  Window window;
  bool empty_boundary = false;
  // Minkowski only: (r, tube volume / 2r) for each radius.
  std::vector<std::pair<double, double>> samples;
};

// Indicator of E on the lattice nodes.
std::vector<char> indicator(const JumpGeometry& E, const LatticeSpec& spec);

// Horizontal area of {phi = level} inside the window.  The zero set of the
// piecewise linear interpolant on the six-tetrahedron split of every cell is
// integrated with density |(N.W_1, N.W_2)|; n = 1 only.
double level_set_perimeter(const ScalarField& phi, double level, const Window& window);

// (1 / 2w) * integral of |grad_H phi| over {|phi - level| < w} inside the window.
double smoothed_tv_perimeter(const ScalarField& phi, double level, const Window& window, double width);

PerimeterReport h_perimeter(const JumpGeometry& E, const LatticeSpec& spec, const Window& window,
                            PerimeterMethod method = PerimeterMethod::SurfaceIntegral);

// Tube volumes v(r) = |{|rho_c| < r} cap window| fitted as v / 2r = P + c r^2;
// the content is P.  Radii must lie in (2h, eta_half / 4).
PerimeterReport minkowski_content(const JumpGeometry& E, const LatticeSpec& spec, std::vector<double> radii,
                                  const Window& window);

struct CoareaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
  int levels = 0;
};

// lhs = integral of |grad_H f| over the window, rhs = midpoint sum over levels
// of the perimeters of {f < c}.  Needs n = 1 and at least 8 levels.
CoareaReport coarea_check(const ScalarField& f, const Window& window, int levels);

// Sum over lattice nodes of the hyperplane {eta_axis = offset} (restricted to the
// window) of the 1D total variation of f along the W_direction line through the
// node, each line weighted by its share of the plane area.
double slice_variation(const ScalarField& f, const FrameVector& direction, int axis, double offset,
                       const Window& window);

struct VolumeExponent {
  double fitted_slope = 0.0;
  std::vector<double> radii;
  std::vector<double> volumes;
};

// Least-squares slope of log v(B_r) against log r.  Needs at least three radii
// spanning a factor of two, all inside the covered radius.
VolumeExponent ball_volume_exponent(const CcDistance& d, std::vector<double> radii);
VolumeExponent ball_volume_exponent(const LatticeSpec& spec, std::vector<double> radii);

// diam {d <= r} / 2r from pairwise lattice distances over ball nodes in the
// t = 0 plane and a sample of the outer shell.  The box must cover B(0, 2r).
double ball_diameter_ratio(const CcDistance& d, double r);

}  // namespace hgamma
