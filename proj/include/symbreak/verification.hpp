#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "symbreak/commands.hpp"

// End-to-end verification of the library against its pinned numbers: eleven
// criteria, each with hard tolerances, each runnable in seconds. The `verify`
// subcommand and the standalone acceptance binary both print exactly this.

namespace symbreak {

struct CriterionResult {
  int index;
  std::string name;
  bool passed;
  std::string detail;
};

inline constexpr int acceptance_criteria_count = 11;

inline const std::vector<std::string>& acceptance_criteria_names() {
  static const std::vector<std::string> names = {
      "sextic zero mode energy and overlap",
      "annihilation residual convergence",
      "parity audit of symmetric spectra",
      "double-well matching vs grid oracle",
      "infinite-barrier limit levels and gap collapse",
      "concentrated states geometry",
      "classical energy conservation and classification",
      "local maximum model and turning points",
      "spinor ladders and degeneracy search",
      "spinor decomposition reconstruction",
      "figure extrema and lobe topology",
  };
  return names;
}

namespace detail {

inline std::string fmt_detail(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

inline bool criterion_sextic_ground(std::string& detail) {
  auto coarse = sextic_ground_check(1.0, Grid{-3, 3, 2000});
  auto fine = sextic_ground_check(1.0, Grid{-3, 3, 4000});
  detail = fmt_detail("|E0|=%.3g overlap=%.6f refined |E0|=%.3g", std::fabs(coarse.e0),
                      coarse.overlap, std::fabs(fine.e0));
  return std::fabs(coarse.e0) <= 5e-3 && coarse.overlap >= 0.999 &&
         3 * std::fabs(fine.e0) <= std::fabs(coarse.e0);
}

inline bool criterion_annihilation(std::string& detail) {
  double fine = annihilation_residual(1.0, Grid{-3, 3, 4001});
  double coarse = annihilation_residual(1.0, Grid{-3, 3, 2001});
  double ratio = coarse / fine;
  detail = fmt_detail("residual=%.3g halving ratio=%.2f", fine, ratio);
  return fine < 1e-3 && ratio > 3.0 && ratio < 5.0;
}

// Squared norm fraction of the even (or odd) part of a state, reflecting
// about the grid center with linear interpolation: ||(psi +- R psi)/2||^2.
inline double parity_fraction(const TabulatedState& st, bool even) {
  const Grid& g = st.grid;
  const double axis = g.center();
  double part = 0, total = 0;
  for (int i = 0; i < g.n_points; ++i) {
    double v = st.values[i];
    double xr = 2 * axis - g.point(i);
    double vr;
    if (xr <= g.x_min) {
      vr = st.values.front();
    } else if (xr >= g.x_max) {
      vr = st.values.back();
    } else {
      double t = (xr - g.x_min) / g.dx();
      int j = static_cast<int>(t);
      if (j >= g.n_points - 1) j = g.n_points - 2;
      double f = t - j;
      vr = (1 - f) * st.values[j] + f * st.values[j + 1];
    }
    double c = even ? 0.5 * (v + vr) : 0.5 * (v - vr);
    part += c * c;
    total += v * v;
  }
  return part / total;
}

inline bool criterion_parity_audit(std::string& detail) {
  auto sombrero = parity_audit(Potential(Sombrero{1.0, 1.0}), 0.0, Grid{-4, 4, 3001}, 10);
  auto sextic = parity_audit(Potential(Sextic{1.0}), 0.0, Grid{-3, 3, 2001}, 10);
  double worst = 0;
  for (const auto& e : sombrero.entries) worst = std::max(worst, e.asymmetry);
  for (const auto& e : sextic.entries) worst = std::max(worst, e.asymmetry);
  detail = fmt_detail("worst asymmetry=%.3g over 20 states", worst);
  return sombrero.passed && sextic.passed;
}

inline bool criterion_matching_vs_grid(std::string& detail) {
  const WellParams p{2.0, 0.5, 200.0, 1.0, 1.0};
  auto roots = levels_below_barrier(p, 100);
  Grid grid{-2.0, 2.0, 4000};
  auto spec = solve_spectrum(Potential(PiecewiseDoubleWell{p.alpha, p.a, p.b}), grid,
                             static_cast<int>(roots.size()) + 2);
  size_t below = 0;
  while (below < spec.levels.size() && spec.levels[below].energy < p.alpha) ++below;
  if (roots.size() != below) {
    detail = fmt_detail("matching found %.0f sub-barrier roots, grid %.0f",
                        static_cast<double>(roots.size()), static_cast<double>(below));
    return false;
  }
  // Tolerance floor 1e-2, raised to the a-priori grid discretization error
  // where that is larger: the sampled barrier edge may sit up to dx/2 off
  // (energy shift 2E (dx/2)/(a-b)) and the 3-point stencil truncates by
  // about E (k dx)^2 / 12 = m E^2 dx^2 / (6 hbar^2).
  const double dx = grid.dx();
  const double w = p.a - p.b;
  bool ok = true;
  double worst = 0, worst_bound = 1e-2;
  for (size_t i = 0; i < roots.size(); ++i) {
    double e = roots[i].energy;
    double bound = std::max(1e-2, e * dx / w + p.m * e * e * dx * dx / (6 * p.hbar * p.hbar));
    double diff = std::fabs(e - spec.levels[i].energy);
    if (diff > worst) {
      worst = diff;
      worst_bound = bound;
    }
    ok = ok && diff <= bound;
    if (i > 0) ok = ok && roots[i].energy > roots[i - 1].energy;
  }
  // Parity: the eigensolver returns arbitrary mixtures inside a pair it sees
  // as degenerate. Definite labels must agree outright; a mixed pair must
  // span exactly one even and one odd state, which reflection projections of
  // the two eigenvectors measure.
  for (size_t i = 0; ok && i < roots.size();) {
    if (spec.levels[i].parity != Parity::Indefinite) {
      ok = spec.levels[i].parity == roots[i].parity;
      ++i;
      continue;
    }
    if (i + 1 >= roots.size() || spec.levels[i + 1].parity != Parity::Indefinite) {
      ok = false;
      break;
    }
    bool pair_labels = (roots[i].parity == Parity::Even && roots[i + 1].parity == Parity::Odd) ||
                       (roots[i].parity == Parity::Odd && roots[i + 1].parity == Parity::Even);
    double even_sum = parity_fraction(*spec.levels[i].state, true) +
                      parity_fraction(*spec.levels[i + 1].state, true);
    double odd_sum = parity_fraction(*spec.levels[i].state, false) +
                     parity_fraction(*spec.levels[i + 1].state, false);
    ok = pair_labels && std::fabs(even_sum - 1.0) <= 0.02 && std::fabs(odd_sum - 1.0) <= 0.02;
    i += 2;
  }
  detail = fmt_detail("%.0f roots, worst |dE|=%.3g (bound %.3g)",
                      static_cast<double>(roots.size()), worst, worst_bound);
  return ok;
}

inline bool criterion_limit_levels(std::string& detail) {
  const WellParams p{2.0, 0.5, 1e6, 1.0, 1.0};
  auto roots = levels_below_barrier(p, 2);
  if (roots.size() != 4) {
    detail = "expected 4 sub-barrier roots at the huge barrier";
    return false;
  }
  bool ok = true;
  double worst = 0;
  for (const auto& r : roots) {
    double limit = limit_levels(p.a, p.b, p.hbar, p.m, r.n);
    double rel = std::fabs(r.energy - limit) / limit;
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-3;
  }
  auto gaps = parity_gap_sweep({50.0, 1e4}, 1, p.a, p.b);
  ok = ok && !gaps[0].missing_pair && !gaps[1].missing_pair && gaps[1].gap < gaps[0].gap / 10;
  detail = fmt_detail("worst rel offset=%.3g gap(1e4)/gap(50)=%.3g", worst,
                      gaps[1].gap / gaps[0].gap);
  return ok;
}

inline bool criterion_concentrated_states(std::string& detail) {
  Grid grid{-2.0, 2.0, 4001};
  auto st = infinite_barrier_states(1, 2.0, 1.0, grid);
  double xl = expectation_x(st.psi_left);
  double xp = expectation_x(st.psi_plus);
  double xm = expectation_x(st.psi_minus);
  double cross = inner_product(st.psi_left, st.psi_right);
  bool ok = std::fabs(xl + 1.5) <= 1e-10 && std::fabs(xp) <= 1e-10 && std::fabs(xm) <= 1e-10 &&
            cross == 0.0;
  for (int n = 1; n <= 5; ++n) {
    double l1 = limit_levels(2.0, 0.5, 1.0, 1.0, n);
    double l2 = limit_levels(2.5, 1.0, 1.0, 1.0, n);
    ok = ok && std::fabs(l1 - l2) <= 1e-12 * l1;
  }
  detail = fmt_detail("<x>_L+1.5=%.2g <x>_+=%.2g <L|R>=%.2g", xl + 1.5, xp, cross);
  return ok;
}

inline bool criterion_classical(std::string& detail) {
  auto force = sombrero_force(1.0, 1.0);
  auto V = sombrero_potential(1.0, 1.0);
  double x0 = std::sqrt(0.5 * (1.0 + std::sqrt(3.0)));  // turning point of E = 0.5
  auto pts = integrate_hamiltonian(force, 1.0, {x0, 0.0}, 1e-3, 10000);
  double worst = 0;
  for (const auto& s : pts)
    worst = std::max(worst, std::fabs(0.5 * s.p * s.p + V(s.x) - 0.5) / 0.5);
  bool ok = worst <= 1e-6;
  const std::pair<double, double> scan{-2.0, 2.0};
  for (double e : {0.1, 0.5, 1.0})
    ok = ok && classify_trajectory(V, e, 0.0, 0.0, scan) == SymmetryClass::Symmetric;
  ok = ok && classify_trajectory(V, -0.1, -0.8, 0.0, scan) == SymmetryClass::Asymmetric;
  ok = ok && classify_trajectory(V, -0.1, 0.8, 0.0, scan) == SymmetryClass::Asymmetric;
  ok = ok && classify_trajectory(V, 0.0, 0.5, 0.0, scan) == SymmetryClass::Separatrix;
  detail = fmt_detail("max relative energy drift=%.3g", worst);
  return ok;
}

inline bool criterion_local_max(std::string& detail) {
  bool ok = true;
  double worst = 0;
  for (double mu : {0.5, 1.0, 2.0}) {
    auto m = local_max_model(sombrero_potential(1.0, mu), 0.0);
    double rel = std::fabs(m.gamma_sq - 2 * mu) / (2 * mu);
    worst = std::max(worst, rel);
    ok = ok && m.n == 1 && rel <= 0.01;
  }
  auto [lo, hi] = local_turning_points({0.0, 1, 2.0, 0.0}, -0.25);
  ok = ok && std::fabs(lo + 0.5) <= 1e-14 && std::fabs(hi - 0.5) <= 1e-14;
  detail = fmt_detail("worst gamma^2 error=%.3g turning points %.3f/%.3f", worst, lo, hi);
  return ok;
}

inline bool criterion_spinor_ladders(std::string& detail) {
  const SpinorSystem sys{std::sqrt(2.0), 1.0, 1.0, 1.0};
  auto grid_levels = grid_spinor_spectrum(sys, Grid{-10, 10, 2000}, 6);
  bool ok = true;
  double worst = 0;
  for (const auto& l : grid_levels) {
    double omega = l.branch == Branch::Plus ? sys.omega_plus : sys.omega_minus;
    double err = std::fabs(l.energy - l.n * omega);
    worst = std::max(worst, err);
    ok = ok && err <= 1e-3;
  }
  auto exact = spinor_spectrum(sys, 3.0);
  int zeros = 0;
  for (const auto& l : exact) zeros += l.energy == 0.0;
  ok = ok && zeros == 2;
  auto degs = find_degeneracies(sys, 10000, 1e-9);
  // Brute-force oracle, deliberately independent of the convergent search.
  long brute = 0;
  for (long long n = 1; n <= 10000; ++n)
    for (long long m = 1; m <= 10000; ++m)
      if (std::fabs(static_cast<double>(n) * sys.omega_plus -
                    static_cast<double>(m) * sys.omega_minus) <= 1e-9)
        ++brute;
  ok = ok && degs.empty() && brute == 0;
  auto ratio32 = find_degeneracies({1.5, 1.0, 1.0, 1.0}, 30, 1e-12);
  ok = ok && ratio32.size() == 10;
  for (size_t k = 0; k < ratio32.size() && ok; ++k)
    ok = ratio32[k].n == 2 * static_cast<int>(k + 1) && ratio32[k].m == 3 * static_cast<int>(k + 1);
  detail = fmt_detail("worst grid error=%.3g zero labels=%.0f coincidences=%.0f", worst,
                      static_cast<double>(zeros), static_cast<double>(degs.size() + brute));
  return ok;
}

inline bool criterion_decomposition(std::string& detail) {
  const SpinorSystem sys{std::sqrt(2.0), 1.0, 1.0, 1.0};
  Grid grid{-10, 10, 501};
  double consistent = reconstruction_residual(sys, grid);
  double doubled = reconstruction_residual(sys, grid, OffsetConvention::Doubled);
  double expect = 0.5 * sys.hbar * sys.omega_plus;
  detail = fmt_detail("residual=%.3g negative control %.12g (expected %.12g)", consistent,
                      doubled, expect);
  return consistent <= 1e-10 && std::fabs(doubled - expect) <= 1e-12;
}

inline bool criterion_figures(std::string& detail) {
  auto V = sombrero_potential(1.0, 1.0);
  auto trajectories = phase_portrait(V, 1.0, {-0.1, 0.5}, {-1.5, 1.5}, 1e-3, 500);
  auto portrait = parse_svg_polylines(render_svg(portrait_figure(trajectories)));
  int below = 0, above = 0;
  for (const auto& p : portrait) {
    if (p.label.rfind("E=-0.1 ", 0) == 0) ++below;
    if (p.label.rfind("E=0.5 ", 0) == 0) ++above;
  }
  auto spec = solve_spectrum(Potential(Sombrero{1.0, 1.0}), Grid{-4, 4, 3001}, 4);
  auto figure = parse_svg_polylines(render_svg(spectrum_figure(Potential(Sombrero{1.0, 1.0}),
                                                               spec)));
  double left_min = 0, right_min = 0;
  bool found = false;
  for (const auto& p : figure) {
    if (p.label != "potential") continue;
    found = true;
    double lv = 1e300, rv = 1e300;
    for (auto [x, y] : p.points) {
      if (x < 0 && y < lv) {
        lv = y;
        left_min = x;
      }
      if (x > 0 && y < rv) {
        rv = y;
        right_min = x;
      }
    }
  }
  const double want = std::sqrt(0.5);
  bool ok = below == 2 && above == 1 && found && std::fabs(left_min + want) <= 1e-3 &&
            std::fabs(right_min - want) <= 1e-3;
  detail = fmt_detail("lobes %.0f/%.0f, left minimum at %.6f", static_cast<double>(below),
                      static_cast<double>(above), left_min);
  return ok;
}

}  // namespace detail

/// Runs the full suite; one result per criterion, in order. Exceptions from a
/// criterion are caught and reported as failures of that criterion alone.
inline std::vector<CriterionResult> run_acceptance_suite() {
  using Check = bool (*)(std::string&);
  const Check checks[acceptance_criteria_count] = {
      detail::criterion_sextic_ground,    detail::criterion_annihilation,
      detail::criterion_parity_audit,     detail::criterion_matching_vs_grid,
      detail::criterion_limit_levels,     detail::criterion_concentrated_states,
      detail::criterion_classical,        detail::criterion_local_max,
      detail::criterion_spinor_ladders,   detail::criterion_decomposition,
      detail::criterion_figures,
  };
  std::vector<CriterionResult> out;
  const auto& names = acceptance_criteria_names();
  for (int i = 0; i < acceptance_criteria_count; ++i) {
    CriterionResult r{i + 1, names[i], false, ""};
    try {
      r.passed = checks[i](r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Renders the suite as one line per criterion. Returns true iff every
/// criterion passed and the suite is the full pinned set.
inline bool print_acceptance_report(std::FILE* out, const std::vector<CriterionResult>& results) {
  bool all = results.size() == static_cast<size_t>(acceptance_criteria_count);
  for (const auto& r : results) {
    std::fprintf(out, "%2d  %-48s  %s  %s\n", r.index, r.name.c_str(),
                 r.passed ? "pass" : "FAIL", r.detail.c_str());
    all = all && r.passed;
  }
  return all;
}

}  // namespace symbreak
