#pragma once

#include <string>
#include <vector>

#include "symbreak/classical.hpp"
#include "symbreak/core.hpp"
#include "symbreak/doublewell.hpp"
#include "symbreak/figure.hpp"
#include "symbreak/qm1d.hpp"
#include "symbreak/spinor.hpp"
#include "symbreak/table.hpp"

// Builders shared by the command-line front end and the verification suite:
// every emitted table or figure is assembled here, straight from library
// results, so the two consumers cannot drift apart.

namespace symbreak {

inline Table portrait_table(const std::vector<Trajectory>& trajectories, double dt) {
  Table t;
  t.columns = {"trajectory", "energy", "class", "t", "x", "p"};
  for (size_t k = 0; k < trajectories.size(); ++k) {
    const auto& tr = trajectories[k];
    for (size_t i = 0; i < tr.points.size(); ++i)
      t.rows.push_back({static_cast<long long>(k), tr.energy,
                        std::string(to_string(tr.symmetry_class)), dt * static_cast<double>(i),
                        tr.points[i].x, tr.points[i].p});
  }
  return t;
}

inline FigureDocument portrait_figure(const std::vector<Trajectory>& trajectories) {
  FigureDocument fig;
  fig.axes.title = "phase portrait";
  fig.axes.x_title = "x";
  fig.axes.y_title = "p";
  for (size_t k = 0; k < trajectories.size(); ++k) {
    const auto& tr = trajectories[k];
    Curve c;
    c.label = "E=" + detail::fmt6(tr.energy) + " #" + std::to_string(k) + " [" +
              to_string(tr.symmetry_class) + "]";
    c.points.reserve(tr.points.size());
    for (const auto& s : tr.points) c.points.emplace_back(s.x, s.p);
    fig.curves.push_back(std::move(c));
  }
  return fig;
}

inline Table spectrum_table(const Spectrum& spec) {
  Table t;
  t.columns = {"index", "energy", "parity", "asymmetry"};
  for (const auto& l : spec.levels)
    t.rows.push_back({static_cast<long long>(l.index), l.energy, to_string(l.parity),
                      l.asymmetry});
  return t;
}

/// Potential curve (densely resampled so curve extrema sit within half a
/// sample of the true ones) plus one horizontal line per level.
inline FigureDocument spectrum_figure(const Potential& V, const Spectrum& spec) {
  FigureDocument fig;
  fig.axes.title = spec.potential_descriptor;
  fig.axes.x_title = "x";
  fig.axes.y_title = "energy";
  Curve pot;
  pot.label = "potential";
  const int samples = 8001;
  const Grid& g = spec.grid;
  pot.points.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double x = g.x_min + (g.x_max - g.x_min) * i / (samples - 1);
    pot.points.emplace_back(x, V(x));
  }
  fig.curves.push_back(std::move(pot));
  for (const auto& l : spec.levels) {
    Curve line;
    line.label = "E" + std::to_string(l.index) + "=" + detail::fmt6(l.energy) + " " +
                 to_string(l.parity);
    line.stroke = "#999999";
    line.points = {{g.x_min, l.energy}, {g.x_max, l.energy}};
    fig.curves.push_back(std::move(line));
  }
  return fig;
}

inline Table well_levels_table(const std::vector<WellLevel>& levels) {
  Table t;
  t.columns = {"n", "parity", "energy"};
  for (const auto& l : levels)
    t.rows.push_back({static_cast<long long>(l.n), to_string(l.parity), l.energy});
  return t;
}

inline Table gap_table(const std::vector<GapPoint>& gaps) {
  Table t;
  t.columns = {"alpha", "gap", "status"};
  for (const auto& g : gaps) {
    if (g.missing_pair)
      t.rows.push_back({g.alpha, std::string(""), std::string("missing")});
    else
      t.rows.push_back({g.alpha, g.gap, std::string("ok")});
  }
  return t;
}

inline Table threshold_table(double a, double b, double alpha0) {
  Table t;
  t.columns = {"a", "b", "alpha0"};
  t.rows.push_back({a, b, alpha0});
  return t;
}

inline Table states_table(const std::vector<TabulatedState>& states) {
  Table t;
  if (states.empty()) return t;
  t.columns = {"x"};
  for (const auto& s : states) t.columns.push_back(s.label.empty() ? "psi" : s.label);
  const Grid& g = states.front().grid;
  for (const auto& s : states)
    if (!(s.grid == g)) throw grid_mismatch("states_table: states live on different grids");
  for (int i = 0; i < g.n_points; ++i) {
    std::vector<Value> row{g.point(i)};
    for (const auto& s : states) row.push_back(s.values[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline FigureDocument states_figure(const std::vector<TabulatedState>& states,
                                    const std::string& title) {
  FigureDocument fig;
  fig.axes.title = title;
  fig.axes.x_title = "x";
  fig.axes.y_title = "psi";
  for (const auto& s : states) {
    Curve c;
    c.label = s.label;
    c.points.reserve(s.values.size());
    for (size_t i = 0; i < s.values.size(); ++i)
      c.points.emplace_back(s.grid.point(static_cast<int>(i)), s.values[i]);
    fig.curves.push_back(std::move(c));
  }
  return fig;
}

inline Table spinor_levels_table(const std::vector<SpinorLevel>& levels) {
  Table t;
  t.columns = {"branch", "n", "energy"};
  for (const auto& l : levels)
    t.rows.push_back({to_string(l.branch), static_cast<long long>(l.n), l.energy});
  return t;
}

inline Table degeneracy_table(const std::vector<Degeneracy>& degs) {
  Table t;
  t.columns = {"n", "m", "mismatch"};
  for (const auto& d : degs)
    t.rows.push_back({static_cast<long long>(d.n), static_cast<long long>(d.m), d.mismatch});
  return t;
}

inline Table decomposition_table(const SpinorSystem& sys, const Decomposition& d) {
  Table t;
  t.columns = {"omega_plus", "omega_minus", "omega0", "omega_delta_sq", "eps0", "eps_delta"};
  t.rows.push_back(
      {sys.omega_plus, sys.omega_minus, d.omega0, d.omega_delta_sq, d.eps0, d.eps_delta});
  return t;
}

/// Level diagram: a short horizontal bar per level, plus branch on the left,
/// minus branch on the right.
inline FigureDocument spinor_ladder_figure(const std::vector<SpinorLevel>& levels) {
  FigureDocument fig;
  fig.axes.title = "two-oscillator level diagram";
  fig.axes.x_title = "branch";
  fig.axes.y_title = "energy";
  fig.axes.x_min = 0.0;
  fig.axes.x_max = 2.0;
  for (const auto& l : levels) {
    Curve c;
    c.label = std::string(to_string(l.branch)) + " n=" + std::to_string(l.n);
    c.stroke = l.branch == Branch::Plus ? "#1f77b4" : "#d62728";
    if (l.branch == Branch::Plus)
      c.points = {{0.1, l.energy}, {0.9, l.energy}};
    else
      c.points = {{1.1, l.energy}, {1.9, l.energy}};
    fig.curves.push_back(std::move(c));
  }
  return fig;
}

}  // namespace symbreak
