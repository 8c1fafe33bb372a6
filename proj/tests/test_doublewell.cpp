#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "symbreak/doublewell.hpp"

using namespace symbreak;

namespace {

// Grid diagonalization of the same potential, used as the independent oracle
// for the transcendental solver throughout this file.
Spectrum grid_levels(double alpha, double a, double b, int k, int n_points) {
  Grid g{-a, a, n_points};
  return solve_spectrum(Potential(PiecewiseDoubleWell{alpha, a, b}), g, k);
}

// Finite-difference slope of the matching function, for Newton distances.
double residual_slope_fd(double E, Parity par, const WellParams& p) {
  double h = 1e-6 * E;
  return (matching_residual(E + h, par, p) - matching_residual(E - h, par, p)) / (2 * h);
}

// The threshold barrier solves cot(k(a-b)) = 0 at E = alpha, so
// k(a-b) = pi/2 gives it in closed form.
double threshold_closed_form(double a, double b) {
  double w = a - b;
  return M_PI * M_PI / (8 * w * w);
}

WellParams std_params(double alpha) { return {2.0, 0.5, alpha, 1.0, 1.0}; }

}  // namespace

TEST_CASE("matching residual nearly vanishes at grid eigenvalues", "[doublewell]") {
  auto p = std_params(200.0);
  auto spec = grid_levels(200.0, 2.0, 0.5, 2, 4001);
  double e0 = spec.levels[0].energy;
  double e1 = spec.levels[1].energy;
  // Newton step from the grid value to the transcendental root is within the
  // discretization error budget.
  CHECK(std::fabs(matching_residual(e0, Parity::Even, p) /
                  residual_slope_fd(e0, Parity::Even, p)) < 1e-2);
  CHECK(std::fabs(matching_residual(e1, Parity::Odd, p) /
                  residual_slope_fd(e1, Parity::Odd, p)) < 1e-2);
}

TEST_CASE("even residual loses its barrier term at the top", "[doublewell]") {
  auto p = std_params(5.0);
  double E = 5.0 * (1 - 1e-9);
  double k = std::sqrt(2 * E);
  double open_form = k * std::cos(k * 1.5) / std::sin(k * 1.5);
  CHECK(matching_residual(E, Parity::Even, p) == Catch::Approx(open_form).margin(1e-6));
}

TEST_CASE("odd residual lies above even residual", "[doublewell]") {
  auto p = std_params(50.0);
  for (int i = 1; i <= 50; ++i) {
    double E = 50.0 * i / 51.0;
    double k = std::sqrt(2 * E);
    if (std::fabs(std::sin(k * 1.5)) < 1e-3) continue;  // skip pole neighborhoods
    CHECK(matching_residual(E, Parity::Odd, p) > matching_residual(E, Parity::Even, p));
  }
}

TEST_CASE("residual domain and parameter validation", "[doublewell]") {
  auto p = std_params(10.0);
  CHECK_THROWS_AS(matching_residual(0.0, Parity::Even, p), out_of_range);
  CHECK_THROWS_AS(matching_residual(10.0, Parity::Even, p), out_of_range);
  CHECK_THROWS_AS(matching_residual(-1.0, Parity::Odd, p), out_of_range);
  CHECK_THROWS_AS(matching_residual(15.0, Parity::Odd, p), out_of_range);
  CHECK_THROWS_AS(matching_residual(1.0, Parity::Indefinite, p), invalid_parameter);
  WellParams inf_barrier{2.0, 0.5, std::numeric_limits<double>::infinity(), 1.0, 1.0};
  CHECK_THROWS_AS(matching_residual(1.0, Parity::Even, inf_barrier), invalid_parameter);
  WellParams bad_geometry{0.5, 2.0, 10.0, 1.0, 1.0};
  CHECK_THROWS_AS(matching_residual(1.0, Parity::Even, bad_geometry), invalid_parameter);
}

TEST_CASE("lowest pair under a tall barrier", "[doublewell]") {
  auto levels = levels_below_barrier(std_params(200.0), 1);
  REQUIRE(levels.size() == 2);
  CHECK(levels[0].parity == Parity::Even);
  CHECK(levels[1].parity == Parity::Odd);
  CHECK(levels[0].n == 1);
  CHECK(levels[1].n == 1);
  CHECK(std::fabs(levels[1].energy - levels[0].energy) < 1e-2);
  // Near the single-well value pi^2/(2 * 1.5^2), approached from below.
  CHECK(levels[0].energy == Catch::Approx(2.193).margin(0.2));
  auto spec = grid_levels(200.0, 2.0, 0.5, 1, 4001);
  CHECK(std::fabs(levels[0].energy - spec.levels[0].energy) <= 1e-2);
}

TEST_CASE("no levels under a barrier below threshold", "[doublewell]") {
  CHECK(levels_below_barrier(std_params(0.1), 5).empty());
  auto spec = grid_levels(0.1, 2.0, 0.5, 1, 2001);
  CHECK(spec.levels[0].energy > 0.1);  // ground level sits above the barrier
}

TEST_CASE("matching roots match grid levels one-to-one", "[doublewell]") {
  for (double alpha : {5.0, 200.0}) {
    auto roots = levels_below_barrier(std_params(alpha), 30);
    REQUIRE_FALSE(roots.empty());
    // Point counts chosen so the barrier edge falls at a cell midpoint;
    // sampling the step on a node would bias every level by ~E*dx/(a-b).
    int n_points = alpha > 50 ? 4005 : 2005;
    auto spec = grid_levels(alpha, 2.0, 0.5, static_cast<int>(roots.size()) + 2, n_points);
    size_t grid_count = 0;
    while (grid_count < spec.levels.size() && spec.levels[grid_count].energy < alpha)
      ++grid_count;
    REQUIRE(roots.size() == grid_count);
    for (size_t i = 0; i < roots.size(); ++i) {
      CHECK(std::fabs(roots[i].energy - spec.levels[i].energy) <= 1e-2);
      if (i > 0) CHECK(roots[i].energy > roots[i - 1].energy);
    }
  }
}

TEST_CASE("pair ordering even below odd", "[doublewell]") {
  // Splittings at alpha = 800 and beyond collapse below one ulp of the
  // energy; strict ordering is only observable while the gap is resolvable.
  for (double alpha : {5.0, 20.0, 50.0, 200.0}) {
    auto roots = levels_below_barrier(std_params(alpha), 40);
    for (size_t i = 0; i < roots.size(); ++i)
      for (size_t j = i + 1; j < roots.size(); ++j)
        if (roots[i].n == roots[j].n) {
          CHECK(roots[i].parity == Parity::Even);
          CHECK(roots[j].parity == Parity::Odd);
          CHECK(roots[i].energy < roots[j].energy);
        }
  }
  for (double alpha : {800.0, 1e4}) {
    auto roots = levels_below_barrier(std_params(alpha), 40);
    for (size_t i = 0; i < roots.size(); ++i)
      for (size_t j = i + 1; j < roots.size(); ++j)
        if (roots[i].n == roots[j].n) CHECK(roots[i].energy <= roots[j].energy);
  }
}

TEST_CASE("requested pair count truncates the search", "[doublewell]") {
  auto roots = levels_below_barrier(std_params(200.0), 3);
  REQUIRE(roots.size() == 6);
  CHECK(roots.back().n == 3);
}

TEST_CASE("squared matching form holds at every root", "[doublewell]") {
  for (double alpha : {5.0, 200.0}) {
    auto p = std_params(alpha);
    auto roots = levels_below_barrier(p, 30);
    REQUIRE_FALSE(roots.empty());
    for (const auto& r : roots) {
      double E = r.energy;
      double k = std::sqrt(2 * E);
      double kappa = std::sqrt(2 * (alpha - E));
      double cot = std::cos(k * 1.5) / std::sin(k * 1.5);
      double t = std::tanh(kappa * 0.5);
      if (r.parity == Parity::Odd) t = 1 / t;
      double lhs = E * cot * cot;
      double rhs = (alpha - E) * t * t;
      CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(std::fabs(lhs), std::fabs(rhs)));
    }
  }
}

TEST_CASE("limit spectrum closed form", "[doublewell]") {
  CHECK(limit_levels(2.0, 1.0, 1.0, 1.0, 1) == Catch::Approx(M_PI * M_PI / 2).epsilon(1e-14));
  CHECK(limit_levels(2.0, 1.0, 1.0, 1.0, 2) == Catch::Approx(2 * M_PI * M_PI).epsilon(1e-14));
  double e1 = limit_levels(2.0, 1.0, 1.0, 1.0, 1);
  for (int n = 2; n <= 6; ++n)
    CHECK(limit_levels(2.0, 1.0, 1.0, 1.0, n) / e1 ==
          Catch::Approx(double(n) * n).epsilon(1e-14));
  CHECK_THROWS_AS(limit_levels(2.0, 1.0, 1.0, 1.0, 0), invalid_parameter);
  CHECK_THROWS_AS(limit_levels(1.0, 2.0, 1.0, 1.0, 1), invalid_parameter);
}

TEST_CASE("limit spectrum ignores the well separation", "[doublewell]") {
  for (int n = 1; n <= 5; ++n)
    CHECK(limit_levels(2.0, 1.0, 1.0, 1.0, n) == limit_levels(3.0, 2.0, 1.0, 1.0, n));
}

TEST_CASE("huge barriers approach the limit spectrum", "[doublewell]") {
  auto roots = levels_below_barrier(std_params(1e6), 2);
  REQUIRE(roots.size() == 4);
  for (const auto& r : roots) {
    double limit = limit_levels(2.0, 0.5, 1.0, 1.0, r.n);
    CHECK(std::fabs(r.energy - limit) <= 1e-3 * limit);
  }
}

TEST_CASE("threshold barrier height", "[doublewell]") {
  double a0 = threshold_alpha(2.0, 0.5);
  CHECK(a0 > 0);
  CHECK(a0 == Catch::Approx(threshold_closed_form(2.0, 0.5)).epsilon(1e-4));
  CHECK(levels_below_barrier(std_params(0.9 * a0), 3).empty());
  CHECK_FALSE(levels_below_barrier(std_params(1.1 * a0), 3).empty());
  // Wider wells bind lower.
  CHECK(threshold_alpha(3.0, 0.5) < a0);
  CHECK(threshold_alpha(3.0, 0.5) ==
        Catch::Approx(threshold_closed_form(3.0, 0.5)).epsilon(1e-4));
}

TEST_CASE("assembled eigenfunctions are C1 at the barrier edge", "[doublewell]") {
  auto p = std_params(200.0);
  Grid g{-2.0, 2.0, 2001};
  auto roots = levels_below_barrier(p, 1);
  REQUIRE(roots.size() == 2);
  for (const auto& lv : roots) {
    auto psi = assemble_wavefunction(lv, p, g);
    CHECK(norm(psi) == Catch::Approx(1.0).margin(1e-12));
    CHECK(psi.values.front() == 0.0);
    CHECK(psi.values.back() == 0.0);
    // Analytic one-sided derivatives at |x| = b agree when the energy solves
    // the matching condition: k cos(k(a-b)) + sin(k(a-b)) kappa t = 0.
    double E = lv.energy;
    double k = std::sqrt(2 * E);
    double kappa = std::sqrt(2 * (200.0 - E));
    double t = std::tanh(kappa * 0.5);
    if (lv.parity == Parity::Odd) t = 1 / t;
    double outside = k * std::cos(k * 1.5);
    double inside = -std::sin(k * 1.5) * kappa * t;
    CHECK(std::fabs(outside - inside) <=
          1e-8 * (std::fabs(outside) + std::fabs(inside)));
    auto par = classify_parity(psi, 0.0);
    CHECK(par.parity == lv.parity);
  }
}

TEST_CASE("assembled states overlap the grid eigenvectors", "[doublewell]") {
  auto p = std_params(200.0);
  Grid g{-2.0, 2.0, 4001};
  auto roots = levels_below_barrier(p, 1);
  auto spec = grid_levels(200.0, 2.0, 0.5, 2, 4001);
  auto even = assemble_wavefunction(roots[0], p, g);
  auto odd = assemble_wavefunction(roots[1], p, g);
  CHECK(std::fabs(inner_product(even, *spec.levels[0].state)) >= 0.999);
  CHECK(std::fabs(inner_product(odd, *spec.levels[1].state)) >= 0.999);
}

TEST_CASE("assembly survives enormous barrier decay", "[doublewell]") {
  auto p = std_params(1e6);
  Grid g{-2.0, 2.0, 2001};
  auto roots = levels_below_barrier(p, 1);
  REQUIRE(roots.size() == 2);
  for (const auto& lv : roots) {
    auto psi = assemble_wavefunction(lv, p, g);
    for (double v : psi.values) REQUIRE(std::isfinite(v));
    CHECK(norm(psi) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::fabs(psi.values[g.n_points / 2]) < 1e-100);  // barrier center is dead
  }
}

TEST_CASE("assembly rejects energies off the spectrum", "[doublewell]") {
  auto p = std_params(200.0);
  Grid g{-2.0, 2.0, 2001};
  auto roots = levels_below_barrier(p, 1);
  WellLevel corrupted = roots[0];
  corrupted.energy *= 1.05;
  CHECK_THROWS_AS(assemble_wavefunction(corrupted, p, g), matching_mismatch);
  Grid short_grid{-1.0, 1.0, 101};
  CHECK_THROWS_AS(assemble_wavefunction(roots[0], p, short_grid), invalid_parameter);
}

TEST_CASE("concentrated states and their superpositions", "[doublewell]") {
  Grid g{-2.0, 2.0, 4001};
  auto st = infinite_barrier_states(1, 2.0, 1.0, g);

  CHECK(inner_product(st.psi_left, st.psi_right) == 0.0);  // disjoint supports
  CHECK(norm(st.psi_left) == Catch::Approx(1.0).margin(1e-12));
  CHECK(norm(st.psi_right) == Catch::Approx(1.0).margin(1e-12));
  CHECK(norm(st.psi_plus) == Catch::Approx(1.0).margin(1e-10));
  CHECK(norm(st.psi_minus) == Catch::Approx(1.0).margin(1e-10));

  CHECK(expectation_x(st.psi_left) == Catch::Approx(-1.5).margin(1e-10));
  CHECK(expectation_x(st.psi_right) == Catch::Approx(1.5).margin(1e-10));
  CHECK(std::fabs(expectation_x(st.psi_plus)) < 1e-10);
  CHECK(std::fabs(expectation_x(st.psi_minus)) < 1e-10);

  CHECK(classify_parity(st.psi_plus, 0.0).parity == Parity::Even);
  CHECK(classify_parity(st.psi_minus, 0.0).parity == Parity::Odd);
  CHECK(classify_parity(st.psi_left, 0.0).parity == Parity::Indefinite);

  // Walls and barrier edges are exact zeros on an aligned grid.
  auto at = [&](double x) {
    int i = static_cast<int>(std::lround((x - g.x_min) / g.dx()));
    return st.psi_left.values[i];
  };
  CHECK(at(-2.0) == 0.0);
  CHECK(at(-1.0) == 0.0);
  CHECK(at(1.5) == 0.0);
}

TEST_CASE("superposition basis round-trips", "[doublewell]") {
  Grid g{-2.0, 2.0, 4001};
  for (int n : {1, 2}) {
    auto st = infinite_barrier_states(n, 2.0, 1.0, g);
    const double r = 1 / std::sqrt(2.0);
    for (int i = 0; i < g.n_points; ++i) {
      double back_l = r * (st.psi_plus.values[i] + st.psi_minus.values[i]);
      double back_r = r * (st.psi_plus.values[i] - st.psi_minus.values[i]);
      REQUIRE(std::fabs(back_l - st.psi_left.values[i]) < 1e-12);
      REQUIRE(std::fabs(back_r - st.psi_right.values[i]) < 1e-12);
    }
  }
}

TEST_CASE("parity gap shrinks with barrier height", "[doublewell]") {
  auto sweep = parity_gap_sweep({50.0, 200.0, 800.0}, 1, 2.0, 0.5);
  REQUIRE(sweep.size() == 3);
  for (const auto& gp : sweep) {
    CHECK_FALSE(gp.missing_pair);
    CHECK(gp.gap > 0);
  }
  CHECK(sweep[0].gap > sweep[1].gap);
  CHECK(sweep[1].gap > sweep[2].gap);

  auto tall = parity_gap_sweep({1e4}, 1, 2.0, 0.5);
  CHECK(tall[0].gap > 0);
  CHECK(tall[0].gap < sweep[0].gap / 10);
  CHECK(tall[0].gap < 1e-20);  // only the perturbative branch can resolve this
}

TEST_CASE("gap sweep preserves input order and flags missing pairs", "[doublewell]") {
  auto sweep = parity_gap_sweep({800.0, 50.0, 200.0}, 1, 2.0, 0.5);
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].alpha == 800.0);
  CHECK(sweep[1].alpha == 50.0);
  CHECK(sweep[2].alpha == 200.0);

  auto below = parity_gap_sweep({0.3}, 1, 2.0, 0.5);
  CHECK(below[0].missing_pair);

  // At alpha = 5 the second even root fits under the barrier but its odd
  // partner does not.
  auto partial = parity_gap_sweep({5.0}, 2, 2.0, 0.5);
  CHECK(partial[0].missing_pair);
  auto roots = levels_below_barrier(std_params(5.0), 2);
  int evens = 0, odds = 0;
  for (const auto& r : roots)
    if (r.n == 2) (r.parity == Parity::Even ? evens : odds)++;
  CHECK(evens == 1);
  CHECK(odds == 0);
}
