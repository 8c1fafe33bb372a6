#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symbreak {

// Base for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Construction-time parameter violations (bad strengths, geometry, ...).
struct invalid_parameter : error {
  using error::error;
};

struct no_sign_change : error {
  using error::error;
};
struct max_iterations : error {
  using error::error;
};
struct convergence_failure : error {
  using error::error;
};
struct non_finite : error {
  using error::error;
};
struct grid_mismatch : error {
  using error::error;
};

struct not_a_maximum : error {
  using error::error;
};
struct tolerance_ambiguous : error {
  using error::error;
};
struct no_turning_points : error {
  using error::error;
};
struct at_separatrix : error {
  using error::error;
};
struct energy_below_minimum : error {
  using error::error;
};

struct not_normalized : error {
  using error::error;
};
struct potential_not_symmetric : error {
  using error::error;
};

struct out_of_range : error {
  using error::error;
};
struct bracket_failure : error {
  using error::error;
};
struct matching_mismatch : error {
  using error::error;
};

struct usage_error : error {
  using error::error;
};
struct empty_figure : error {
  using error::error;
};
struct io_failure : error {
  using error::error;
};

/// Uniform spatial grid on [x_min, x_max] with n_points samples.
struct Grid {
  double x_min;
  double x_max;
  int n_points;

  Grid(double x_min_, double x_max_, int n_points_)
      : x_min(x_min_), x_max(x_max_), n_points(n_points_) {
    if (!(x_min < x_max)) throw invalid_parameter("Grid: x_min must be < x_max");
    if (n_points < 3) throw invalid_parameter("Grid: need at least 3 points");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
      throw invalid_parameter("Grid: bounds must be finite");
  }

  double dx() const { return (x_max - x_min) / (n_points - 1); }
  double point(int i) const { return x_min + i * dx(); }
  double center() const { return 0.5 * (x_min + x_max); }

  bool operator==(const Grid&) const = default;
};

/// A real-valued function sampled on a Grid (wavefunction, potential, ...).
struct TabulatedState {
  Grid grid;
  std::vector<double> values;
  std::string label;
  bool normalized = false;

  TabulatedState(Grid g, std::vector<double> v, std::string lbl = {})
      : grid(g), values(std::move(v)), label(std::move(lbl)) {
    if (static_cast<int>(values.size()) != grid.n_points)
      throw invalid_parameter("TabulatedState: values length must equal grid.n_points");
    for (double x : values)
      if (!std::isfinite(x)) throw invalid_parameter("TabulatedState: non-finite entry");
  }
};

/// Sample a callable on a grid.
template <class F>
TabulatedState tabulate(const Grid& grid, F&& f, std::string label = {}) {
  std::vector<double> v(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) v[i] = f(grid.point(i));
  return TabulatedState(grid, std::move(v), std::move(label));
}

/// Classical phase-space point.
struct PhaseState {
  double x;
  double p;
};

}  // namespace symbreak
