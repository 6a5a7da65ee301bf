#pragma once

// Boundary phase sets E in H^n and their jump sets S_v = dE.

#include <memory>
#include <string>

#include "hgamma/heisenberg.hpp"
#include "hgamma/lattice.hpp"

namespace hgamma {

struct JumpGeometry {
  enum class Kind { Empty, HalfSpace, CcBall, LevelSet };

  Kind kind = Kind::Empty;
  int axis = 1;         // half space: E = {eta_axis < offset}, axis is 1-based
  double offset = 0.0;
  HPoint center;        // CC ball: E = {d_c(center, .) < radius}
  double radius = 0.0;
  std::shared_ptr<const ScalarField> level;  // level set: E = {f < 0}
  bool complement = false;

  static JumpGeometry empty();
  static JumpGeometry half_space(int axis, double offset);
  static JumpGeometry cc_ball(HPoint center, double radius);
  static JumpGeometry level_set(ScalarField f);

  JumpGeometry complemented() const;
  std::string describe() const;
};

}  // namespace hgamma
