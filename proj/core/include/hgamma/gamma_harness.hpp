#pragma once

// Gamma-convergence experiments along an epsilon ladder: recovery energies
// against the limit (kappa / pi) * perimeter, a descent probe of the infimum,
// and the two-phase gap of boundary traces.

#include <cstdint>
#include <string>
#include <vector>

#include "hgamma/geometry.hpp"
#include "hgamma/lattice.hpp"
#include "hgamma/recovery.hpp"

namespace hgamma {

struct OptimizerSettings {
  bool enabled = false;
  double step = 0.9;
  int max_iters = 400;
  double tolerance = 1e-7;
  int angular_cells = 32;
  bool warm_start = true;   // recovery field, otherwise constant 1/2
  double init_noise = 0.0;  // uniform noise amplitude on free nodes, drawn from the seed
};

struct SweepConfig {
  double kappa = 3.141592653589793;
  std::vector<double> ladder{0.2, 0.1, 0.05};
  JumpGeometry geometry = JumpGeometry::half_space(1, 0.0);
  LatticeSpec lattice;
  Window window;
  double height = 0.25;  // cylinder height Z
  double sigma = 0.5;
  int perimeter_samples = 9;
  OptimizerSettings optimizer;
  std::uint64_t seed = 0;
  bool timing = false;

  // Lattice and window sized from the ball radius R: eta in [-R/2, R/2],
  // t in [-R^2/16, R^2/16].
  static SweepConfig standard(int n, double radius, double h);
  void validate() const;
};

// Horizontal perimeter of {rho = s} sampled on [-sigma, sigma] and
// interpolated linearly.
struct PerimeterProfile {
  std::vector<double> s;
  std::vector<double> perimeter;
  double operator()(double x) const;
};

PerimeterProfile perimeter_profile(const SignedDistanceField& rho, const Window& window, double sigma, int samples);

struct SweepRow {
  double epsilon = 0.0;
  double lambda = 0.0;
  double E_recovery = 0.0;
  double E_min = 0.0;  // NaN unless the optimizer ran
  double target = 0.0;
  double ratio_rec = 0.0;
  double ratio_min = 0.0;
  double trace_gap = 0.0;
  double seconds = 0.0;
  bool skipped = false;
  std::string note;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double perimeter = 0.0;  // horizontal perimeter of S_v in the window
  double target = 0.0;
  bool ratio_decreasing = false;
  bool trace_gap_decreasing = false;

  static const std::vector<std::string>& columns();
  std::string to_csv() const;
};

SweepReport gamma_sweep(const SweepConfig& cfg);

// Log-polar grid on the half plane around s = z = 0: x = log r, th in [0, pi]
// with equal steps, masked to [-S, S] x [0, Z].  Node (i, j) has index i * (nth + 1) + j.
struct LogPolarGrid {
  double x_min = 0.0;
  double step = 0.0;
  int nx = 0;
  int nth = 0;
  std::vector<char> active;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * (nth + 1) + j; }
  double s(int i, int j) const;
  double z(int i, int j) const;
};

struct MinimizeResult {
  LogPolarGrid grid;
  std::vector<double> values;
  double energy = 0.0;
  double initial_energy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // energy after each accepted step, starting with the initial energy
};

// Projected gradient descent on the sliced energy over fields u = U(rho, z),
// with U on the log-polar grid and the trace pinned to the phases for |s| >= sigma.
MinimizeResult minimize_E(const SweepConfig& cfg, double epsilon);
MinimizeResult minimize_E(const SweepConfig& cfg, double epsilon, const PerimeterProfile& perimeter, double extent);

struct CompactnessReport {
  std::vector<double> gaps;
  bool decreasing = false;
};

// gap(u) = int_window min(|u|, |1 - u|) for each trace.
CompactnessReport compactness_probe(const std::vector<ScalarField>& traces, const Window& window);

}  // namespace hgamma
