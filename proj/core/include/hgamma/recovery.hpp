#pragma once

// Recovery sequence: the polar transition profile on the half plane
// {(s, z) : z >= 0}, its energy budget, and the field u(p, z) = U(rho(p), z)
// transplanted along the signed CC distance rho to the jump set.
//
// In polar coordinates s = r cos(th), z = r sin(th) with th in [0, pi] and
// inner radius r0 = eps / lambda:
//   w = 1/2 + (r / 2 r0)(1 - 2 th / pi)   for r <= r0,
//   w = 1 - th / pi                       for r >= r0.
// The trace w(s, 0) is a ramp over [-r0, r0] between the phases 0 and 1.

#include <array>
#include <functional>
#include <vector>

#include "hgamma/cc_metric.hpp"
#include "hgamma/energies.hpp"

namespace hgamma {

struct ProfileParams {
  double epsilon = 0.1;
  double log_lambda = 10.0;
  double t_eps = 0.1;
  double sigma = 0.5;

  static ProfileParams from(const EnergyParams& p);

  double log_inner_radius() const;
  double inner_radius() const;
  // Throws DomainError unless r0 < t_eps < sigma and r0 is a normal double.
  void validate() const;
};

// w(s, z); throws DomainError for z < 0.
double profile(double s, double z, const ProfileParams& p);
// (d_s w, d_z w); the inner regime is used at r = r0 exactly.
std::array<double, 2> profile_gradient(double s, double z, const ProfileParams& p);

struct GradientBounds {
  // Fitted constants in |grad w| <= C lambda / eps (inner), <= C / r (outer),
  // |D^2 w| <= C lambda / (eps r) (inner), <= C / r^2 (outer).
  double first_inner = 0.0;
  double first_outer = 0.0;
  double second_inner = 0.0;
  double second_outer = 0.0;
  // Largest relative gap between analytic and finite-difference gradients.
  double max_fd_error = 0.0;
  int samples = 0;
};

GradientBounds profile_gradient_bounds(const ProfileParams& p, int samples);

struct LemmaReport {
  double inner_energy = 0.0;    // eps int_{r < t_eps} |grad w|^2
  double annulus_energy = 0.0;  // eps int_{t_eps < r < sigma} |grad w|^2
  double boundary_inner = 0.0;  // lambda int_{|s| < r0} V(w(s, 0))
  double boundary_outer = 0.0;  // lambda int_{r0 < |s| < sigma} V(w(s, 0))
  double inner_target = 0.0;    // (eps / pi) log(lambda / eps)
  double log_scale = 0.0;       // eps log(lambda / eps)
  double inner_ratio = 0.0;
  double annulus_ratio = 0.0;   // annulus_energy / log_scale
  double boundary_inner_ratio = 0.0;  // boundary_inner / eps
  double boundary_outer_ratio = 0.0;
};

// Angular Gauss quadrature times radial quadrature in log r, per regime.
LemmaReport lemma_calculation(const ProfileParams& p);

// eps int_0^{sqrt(t^2 - s^2)} |grad w(s, z)|^2 dz + lambda V(w(s, 0)) for |s| <= t_eps.
double h_profile(double s, const ProfileParams& p);
// Integral of h_profile over [-t_eps, t_eps].
double integrate_h(const ProfileParams& p);

// Collar field in the half plane: w for |s| <= t_eps, linear blend toward the
// phase 1_{s > 0} over t_eps < |s| < sigma, the phase beyond.
double recovery_value(double s, double z, const ProfileParams& p);
std::array<double, 2> recovery_gradient(double s, double z, const ProfileParams& p);

// u(p, z) = recovery_value(rho(p), z) on every node and level.
CylinderField build_recovery(const SignedDistanceField& rho, const ProfileParams& p, std::vector<double> levels);

// Per-slice energy of the collar field on [0, height]: the level set
// {rho = s} carries eps int (U_s^2 + U_z^2) dz and lambda V(U(s, 0)).
struct SliceEnergy {
  double bulk = 0.0;
  double boundary = 0.0;
};
SliceEnergy slice_energy(double s, double height, const ProfileParams& p);

struct RecoveryEnergy {
  double bulk = 0.0;
  double boundary = 0.0;
  double total = 0.0;
  double trace_gap = 0.0;  // int |U(rho, 0) - 1_E|
};

// Energy of u = U(rho, z) when |grad_H rho| = 1: by the coarea formula it is
// int perimeter(s) * slice_energy(s) ds over |s| < sigma.
RecoveryEnergy recovery_energy(const std::function<double(double)>& perimeter, double height,
                               const ProfileParams& p);

// Volume of {|rho| < t} inside the window.
double tube_volume_Z(const SignedDistanceField& rho, double t, const Window& window);
// delta(t) = Z(t) / t - 2 L.
double tube_delta(const SignedDistanceField& rho, double t, double perimeter, const Window& window);

}  // namespace hgamma
