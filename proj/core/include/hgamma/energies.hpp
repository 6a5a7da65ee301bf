#pragma once

// Phase-transition energies: the bulk + boundary energy on the cylinder
// H^n x [0, Z], the one-dimensional fractional energy, and the trace ratio.
//
// lambda = exp(kappa / eps) overflows quickly, so parameters carry log(lambda)
// and every product lambda * x is formed in log space.

#include <span>
#include <vector>

#include "hgamma/lattice.hpp"

namespace hgamma {

// V(s) = s^2 (1 - s)^2 on [0, 1], extended by even reflection about 0 and 1.
struct DoubleWell {
  double value(double s) const;
  double deriv(double s) const;
  double operator()(double s) const { return value(s); }
  // Integral of V over [0, 1].
  static constexpr double integral() { return 1.0 / 30.0; }
};

struct EnergyParams {
  double epsilon = 0.1;
  double log_lambda = 10.0 * 3.141592653589793;
  double kappa = 3.141592653589793;
  DoubleWell well;
  double t_eps = 0.1;
  double sigma = 0.5;

  // lambda = exp(kappa / eps) and t_eps = eps.
  static EnergyParams from_kappa(double epsilon, double kappa, double sigma = 0.5);

  double lambda() const;  // may be +inf
  double line_tension() const;  // kappa / pi
  double inner_radius() const;  // eps / lambda
  double log_inner_radius() const;
  // lambda * x for x >= 0 without forming lambda.
  double scale_by_lambda(double x) const;
  void validate() const;
};

// Values on base lattice nodes at each z level; trace = level 0.
struct CylinderField {
  LatticeSpec spec;
  std::vector<double> z;       // increasing, z[0] = 0
  std::vector<double> values;  // level-major: values[l * nodes + node]

  CylinderField() = default;
  CylinderField(LatticeSpec s, std::vector<double> levels);

  std::size_t nodes() const { return values.size() / (z.empty() ? 1 : z.size()); }
  double& at(std::size_t node, std::size_t level) { return values[level * nodes() + node]; }
  double at(std::size_t node, std::size_t level) const { return values[level * nodes() + node]; }
  std::span<const double> level(std::size_t l) const;
  std::vector<double> trace() const;
  void validate() const;
};

std::vector<double> uniform_levels(double height, int intervals);

// Region of the cylinder: base window times [z_lo, z_hi].
struct CylinderRegion {
  Window base;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

struct EnergyParts {
  double bulk = 0.0;
  double boundary = 0.0;
  double total = 0.0;
};

// eps * int_A (|W u|^2 + |d_z u|^2) + lambda * int_{A'} V(u(., 0)).
// Horizontal derivatives average the squared forward and backward differences
// along the exact W_i steps; z derivatives are differences between levels.
// Nodes carry trapezoid weights, so the energy is additive over regions.
EnergyParts energy_E(const CylinderField& u, const EnergyParams& p, const CylinderRegion& A, const Window& A_boundary);

// (eps / 2 pi) int int_{I x I} |v(s) - v(s')|^2 / (s - s')^2 + lambda int_I V(v)
// for the piecewise linear interpolant of (s_k, v_k).  The kernel integral is
// exact: it reduces to sum_{k,m} v'_k v'_m int int_{cell_k x cell_m} Psi, with
// Psi(a, b) = 2 log((hi - L)(U - lo) / ((hi - lo)(U - L))) on I = [L, U].
double energy_G_piecewise(std::span<const double> s, std::span<const double> v, const EnergyParams& p);

// Kernel double integral alone, without the eps / 2 pi factor.
double fractional_seminorm(std::span<const double> s, std::span<const double> v);

// Uniform samples over [lo, hi]; at least 16 of them.
double energy_G(std::span<const double> v, double lo, double hi, const EnergyParams& p);

// Ratio of the fractional seminorm of the trace v = u(., 0) to the Dirichlet
// energy of the bilinear interpolant of u on the unit square.  u is row-major
// with rows indexed by z: u[iz * nx + is].  Returns 0 when the Dirichlet energy vanishes.
double trace_ratio(std::span<const double> u, int nx, int nz);

}  // namespace hgamma
