#pragma once

// Carnot-Caratheodory distance on a lattice.
//
// The lattice graph joins x to x * (h a, 0) for every primitive integer vector a
// with entries in [-move_radius, move_radius]; each edge is a straight horizontal
// segment of length h|a|, i.e. a subunit curve, so graph lengths bound d_c from
// above.  Vertical displacement is produced only by enclosing area, as for the
// true distance.  Because the node set is a subgroup, the graph distance is
// left-invariant: d(g x, g y) = d(x, y) for lattice elements g.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hgamma/geometry.hpp"
#include "hgamma/heisenberg.hpp"
#include "hgamma/lattice.hpp"

namespace hgamma {

struct DistanceField {
  LatticeSpec spec;
  std::vector<double> values;  // CC length; +inf where unreachable
  std::string source;
};

struct SignedDistanceField {
  LatticeSpec spec;
  std::vector<double> values;  // > 0 inside E, < 0 outside
  std::string source;
};

struct TargetSet {
  enum class Kind { Point, Hyperplane, Nodes, Everything };
  Kind kind = Kind::Point;
  HPoint point;
  int axis = 1;  // hyperplane {eta_axis = offset}, 1-based
  double offset = 0.0;
  std::vector<char> mask;

  static TargetSet at(HPoint p);
  static TargetSet hyperplane(int axis, double offset);
  static TargetSet nodes(std::vector<char> mask);
  static TargetSet everything();
  std::string describe() const;
};

// Multi-source shortest paths; seeds carry initial distances.
std::vector<double> lattice_shortest_paths(const Lattice& lat, const std::vector<std::pair<std::size_t, double>>& seeds);

DistanceField distance_field(const TargetSet& target, const LatticeSpec& spec);

// Signed CC distance to dE, positive on E.  Sources are the crossings of the
// level function along lattice edges, seeded with their fractional distances.
SignedDistanceField signed_distance(const JumpGeometry& geom, const LatticeSpec& spec);

// Closed-form signed distance for half spaces and CC balls (|eta_axis - offset|
// and d_c(center, .) - radius up to sign); other geometries fall back to
// signed_distance.
SignedDistanceField analytic_signed_distance(const JumpGeometry& geom, const LatticeSpec& spec);

// Level function of E sampled on the lattice (negative on E).
ScalarField level_function(const JumpGeometry& geom, const LatticeSpec& spec);

// Distance from the origin with left-translated queries.
class CcDistance {
 public:
  explicit CcDistance(const LatticeSpec& spec);

  double from_origin(const HPoint& g) const;
  double operator()(const HPoint& p, const HPoint& q) const;
  // Dilates p^{-1} q by up to 2^levels toward the window edge, measures, scales back.
  double refined(const HPoint& p, const HPoint& q, int levels) const;

  const DistanceField& field() const { return field_; }
  const Lattice& lattice() const { return lat_; }
  // Largest radius r for which B(0, r) lies inside the lattice box.
  double covered_radius() const;

 private:
  Lattice lat_;
  DistanceField field_;
};

double cc_distance(const HPoint& p, const HPoint& q, const LatticeSpec& spec);

// Closed-form d_c(0, g).  Geodesics project to circular arcs; an arc of turning
// angle th over the chord |eta| encloses |t| = |eta|^2 (th - sin th) / (8 sin^2(th/2))
// and has length |eta| th / (2 sin(th/2)).  Used for smooth level sets.
double exact_cc_distance(const HPoint& g);
double refine_by_dilation(const HPoint& p, const HPoint& q, const LatticeSpec& spec, int levels);

struct HorizontalStep {
  FrameVector field;  // always horizontal
  double duration = 0.0;  // signed: negative means flowing along -W
};

using HorizontalMoveList = std::vector<HorizontalStep>;

// Straight moves along W_1..W_2n to match eta, then one commutator square of
// side sqrt|residual| (orientation by sign) to match t.
HorizontalMoveList horizontal_factorize(const HPoint& target);
HPoint compose_moves(const HorizontalMoveList& moves, const HPoint& start);
double total_duration(const HorizontalMoveList& moves);

struct EikonalStats {
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  std::size_t samples = 0;
};

// Statistics of ||grad_H f| - 1| over interior nodes with |f| >= exclusion and
// |f| <= max_value (nodes near the source and beyond max_value are skipped).
EikonalStats eikonal_residual(const LatticeSpec& spec, const std::vector<double>& f, double exclusion,
                              double max_value = std::numeric_limits<double>::infinity());
EikonalStats eikonal_residual(const DistanceField& f);
EikonalStats eikonal_residual(const SignedDistanceField& f);

}  // namespace hgamma
