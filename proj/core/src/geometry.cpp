#include "hgamma/geometry.hpp"

#include <sstream>

#include "hgamma/errors.hpp"

namespace hgamma {

JumpGeometry JumpGeometry::empty() { return {}; }

JumpGeometry JumpGeometry::half_space(int axis, double offset) {
  if (axis < 1) throw ConfigError("half-space axis is 1-based");
  JumpGeometry g;
  g.kind = Kind::HalfSpace;
  g.axis = axis;
  g.offset = offset;
  return g;
}

JumpGeometry JumpGeometry::cc_ball(HPoint center, double radius) {
  if (!(radius > 0.0)) throw DomainError("CC ball radius must be positive");
  JumpGeometry g;
  g.kind = Kind::CcBall;
  g.center = std::move(center);
  g.radius = radius;
  return g;
}

JumpGeometry JumpGeometry::level_set(ScalarField f) {
  f.validate();
  JumpGeometry g;
  g.kind = Kind::LevelSet;
  g.level = std::make_shared<const ScalarField>(std::move(f));
  return g;
}

JumpGeometry JumpGeometry::complemented() const {
  JumpGeometry g = *this;
  g.complement = !complement;
  return g;
}

std::string JumpGeometry::describe() const {
  std::ostringstream os;
  if (complement) os << "complement of ";
  switch (kind) {
    case Kind::Empty: os << "empty set"; break;
    case Kind::HalfSpace: os << "{eta_" << axis << " < " << offset << "}"; break;
    case Kind::CcBall: os << "CC ball radius " << radius; break;
    case Kind::LevelSet: os << "{f < 0}"; break;
  }
  return os.str();
}

}  // namespace hgamma
