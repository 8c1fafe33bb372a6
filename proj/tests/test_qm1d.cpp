#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "symbreak/qm1d.hpp"

using namespace symbreak;

namespace {

// Analytic references used as oracles below.
double harmonic_level(int n, double omega_eff, double hbar = 1.0) {
  return hbar * omega_eff * (n + 0.5);
}

double box_level(int n, double width, double hbar = 1.0, double mass = 1.0) {
  double k = M_PI * n / width;
  return hbar * hbar * k * k / (2 * mass);
}

// Independent Rayleigh quotient: apply the grid Hamiltonian to interior
// samples of psi and form (psi, H psi)/(psi, psi). dx cancels.
double rayleigh_quotient(const Potential& V, const Grid& grid, const std::vector<double>& psi) {
  auto H = build_hamiltonian(V, grid);
  std::vector<double> interior(psi.begin() + 1, psi.end() - 1);
  auto Hv = H.apply(interior);
  double num = 0, den = 0;
  for (size_t i = 0; i < interior.size(); ++i) {
    num += interior[i] * Hv[i];
    den += interior[i] * interior[i];
  }
  return num / den;
}

Potential harmonic_potential(const Grid& grid) {
  return Potential(Tabulated{tabulate(grid, [](double x) { return 0.5 * x * x; }, "harmonic")});
}

// sqrt(2/(a-b)) sin(pi n (x + s a)/(a - b)) on the left (s=+1) or right (s=-1)
// well, zero elsewhere. Normalized exactly when the well edges sit on nodes.
TabulatedState well_mode(int n, bool left, double a, double b, const Grid& grid) {
  double w = a - b;
  double amp = std::sqrt(2.0 / w);
  auto st = tabulate(grid, [&](double x) {
    if (left) {
      if (x < -a || x > -b) return 0.0;
      return amp * std::sin(M_PI * n * (x + a) / w);
    }
    if (x < b || x > a) return 0.0;
    return amp * std::sin(M_PI * n * (x - a) / w);
  });
  st.normalized = true;
  return st;
}

double ground_energy(const Potential& V, const Grid& grid) {
  return solve_spectrum(V, grid, 1).levels[0].energy;
}

}  // namespace

TEST_CASE("hamiltonian stencil entries", "[qm1d]") {
  Grid g{0.0, 1.0, 11};  // dx = 0.1
  auto zero = Potential(Tabulated{tabulate(g, [](double) { return 0.0; })});
  auto H = build_hamiltonian(zero, g);
  REQUIRE(H.size() == 9);
  for (double d : H.diag) CHECK(d == Catch::Approx(100.0).margin(1e-9));
  for (double e : H.offdiag) CHECK(e == Catch::Approx(-50.0).margin(1e-9));

  auto shifted = Potential(Tabulated{tabulate(g, [](double) { return 7.25; })});
  auto Hs = build_hamiltonian(shifted, g);
  for (int i = 0; i < 9; ++i) CHECK(Hs.diag[i] - H.diag[i] == Catch::Approx(7.25).margin(1e-12));
  for (int i = 0; i < 8; ++i) CHECK(Hs.offdiag[i] == H.offdiag[i]);
}

TEST_CASE("hamiltonian reproduces box levels", "[qm1d]") {
  Grid g{0.0, 1.0, 2000};
  auto zero = Potential(Tabulated{tabulate(g, [](double) { return 0.0; })});
  auto pairs = eig_sym_tridiag(build_hamiltonian(zero, g), 2, false);
  CHECK(pairs[0].value == Catch::Approx(box_level(1, 1.0)).epsilon(5e-3));
  CHECK(pairs[1].value == Catch::Approx(box_level(2, 1.0)).epsilon(5e-3));
}

TEST_CASE("harmonic spectrum on a wide box", "[qm1d]") {
  Grid g{-8.0, 8.0, 2000};
  auto spec = solve_spectrum(harmonic_potential(g), g, 4);
  REQUIRE(spec.levels.size() == 4);
  for (int n = 0; n < 4; ++n) {
    CHECK(spec.levels[n].index == n);
    CHECK(spec.levels[n].energy == Catch::Approx(harmonic_level(n, 1.0)).margin(1e-3));
    REQUIRE(spec.levels[n].state.has_value());
    CHECK(inner_product(*spec.levels[n].state, *spec.levels[n].state) ==
          Catch::Approx(1.0).margin(1e-8));
  }
  for (int n = 0; n + 1 < 4; ++n) CHECK(spec.levels[n].energy < spec.levels[n + 1].energy);
  CHECK(spec.levels[0].parity == Parity::Even);
  CHECK(spec.levels[1].parity == Parity::Odd);
  CHECK(spec.levels[2].parity == Parity::Even);
  CHECK(spec.levels[3].parity == Parity::Odd);
  CHECK_FALSE(spec.leakage_warning);
  CHECK(spec.potential_descriptor == "tabulated(harmonic)");
}

TEST_CASE("sextic zero mode sits at zero energy", "[qm1d]") {
  Grid g{-3.0, 3.0, 2000};
  auto spec = solve_spectrum(Potential(Sextic{1.0}), g, 1);
  CHECK(std::fabs(spec.levels[0].energy) <= 5e-3);
}

TEST_CASE("sombrero parities alternate", "[qm1d]") {
  Grid g{-3.0, 3.0, 2000};
  auto spec = solve_spectrum(Potential(Sombrero{1.0, 1.0}), g, 10);
  for (int n = 0; n < 10; ++n) {
    CHECK(spec.levels[n].parity == (n % 2 == 0 ? Parity::Even : Parity::Odd));
    CHECK(spec.levels[n].asymmetry < 1e-6);
  }
}

TEST_CASE("wall leakage flag", "[qm1d]") {
  // Ten sombrero levels need more room than [-3,3]; the tails are still
  // visibly nonzero at those walls, and vanish by [-4,4].
  Grid tight{-3.0, 3.0, 2000};
  auto flagged = solve_spectrum(Potential(Sombrero{1.0, 1.0}), tight, 10);
  CHECK(flagged.leakage_warning);
  CHECK(flagged.wall_amplitude_ratio > 1e-6);

  Grid wide{-4.0, 4.0, 3001};
  auto clean = solve_spectrum(Potential(Sombrero{1.0, 1.0}), wide, 10);
  CHECK_FALSE(clean.leakage_warning);

  // Hard walls coincide with the box; the first interior samples carry the
  // full slope there, which is not leakage.
  Grid box{-2.0, 2.0, 2001};
  auto hard = solve_spectrum(Potential(PiecewiseDoubleWell{200.0, 2.0, 0.5}), box, 2);
  CHECK_FALSE(hard.leakage_warning);
}

TEST_CASE("piecewise well requires the box at its walls", "[qm1d]") {
  Grid wrong{-3.0, 3.0, 2001};
  CHECK_THROWS_AS(build_hamiltonian(Potential(PiecewiseDoubleWell{200.0, 2.0, 0.5}), wrong),
                  invalid_parameter);
}

TEST_CASE("parity classification of sampled functions", "[qm1d]") {
  Grid g{-1.0, 1.0, 801};
  auto even = tabulate(g, [](double x) { return std::cos(M_PI * x / 2); });
  auto odd = tabulate(g, [](double x) { return std::sin(M_PI * x); });
  auto re = classify_parity(even, 0.0);
  auto ro = classify_parity(odd, 0.0);
  CHECK(re.parity == Parity::Even);
  CHECK(ro.parity == Parity::Odd);
  CHECK(re.asymmetry < 1e-12);
  CHECK(ro.asymmetry < 1e-12);
}

TEST_CASE("one-well mode has no definite parity", "[qm1d]") {
  Grid g{-2.0, 2.0, 4001};
  auto left = well_mode(1, true, 2.0, 1.0, g);
  auto r = classify_parity(left, 0.0);
  CHECK(r.parity == Parity::Indefinite);
  CHECK(r.asymmetry > 0.9);  // disjoint support pushes both residuals to sqrt(2)
}

TEST_CASE("parity needs a centered grid", "[qm1d]") {
  Grid g{-1.0, 1.5, 500};
  auto st = tabulate(g, [](double x) { return std::exp(-x * x); });
  auto r = classify_parity(st, 0.0);
  CHECK(r.parity == Parity::Indefinite);
  CHECK_FALSE(r.reason.empty());
}

TEST_CASE("parity tolerance separates noise levels", "[qm1d]") {
  Grid g{-1.0, 1.0, 801};
  auto st = tabulate(g, [](double x) {
    return std::cos(M_PI * x / 2) + 1e-4 * std::sin(3 * M_PI * x);
  });
  auto strict = classify_parity(st, 0.0, 1e-6);
  auto loose = classify_parity(st, 0.0, 1e-2);
  CHECK(strict.parity == Parity::Indefinite);
  CHECK(loose.parity == Parity::Even);
  CHECK(strict.asymmetry == Catch::Approx(loose.asymmetry));
  CHECK(strict.asymmetry > 1e-6);
  CHECK(strict.asymmetry < 1e-2);
}

TEST_CASE("position expectation of definite-parity states vanishes", "[qm1d]") {
  Grid g{-8.0, 8.0, 2000};
  auto spec = solve_spectrum(harmonic_potential(g), g, 2);
  for (const auto& lv : spec.levels) {
    REQUIRE(lv.parity != Parity::Indefinite);
    CHECK(std::fabs(expectation_x(*lv.state)) < 1e-10);
  }
}

TEST_CASE("one-well modes sit at the well midpoints", "[qm1d]") {
  Grid g{-2.0, 2.0, 4001};
  auto left = well_mode(1, true, 2.0, 1.0, g);
  auto right = well_mode(1, false, 2.0, 1.0, g);
  CHECK(expectation_x(left) == Catch::Approx(-1.5).margin(1e-8));
  CHECK(expectation_x(right) == Catch::Approx(1.5).margin(1e-8));
}

TEST_CASE("expectation rejects unnormalized states", "[qm1d]") {
  Grid g{-1.0, 1.0, 101};
  auto st = tabulate(g, [](double) { return 1.0; });  // norm sqrt(2)
  CHECK_THROWS_AS(expectation_x(st), not_normalized);
}

TEST_CASE("annihilation residual vanishes on the zero mode", "[qm1d]") {
  Grid fine{-3.0, 3.0, 4001};
  double r_fine = annihilation_residual(1.0, fine);
  CHECK(r_fine < 1e-3);

  Grid coarse{-3.0, 3.0, 2001};
  double r_coarse = annihilation_residual(1.0, coarse);
  double ratio = r_coarse / r_fine;  // second-order scheme: halving dx gains ~4x
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("annihilation residual flags a wrong state", "[qm1d]") {
  Grid g{-3.0, 3.0, 4001};
  auto gauss = tabulate(g, [](double x) { return std::exp(-x * x); });
  CHECK(annihilation_residual(1.0, gauss) > 0.1);
}

TEST_CASE("sextic ground state matches the closed form", "[qm1d]") {
  Grid g1{-3.0, 3.0, 2000};
  auto c1 = sextic_ground_check(1.0, g1);
  CHECK(std::fabs(c1.e0) <= 5e-3);
  CHECK(c1.overlap >= 0.999);

  Grid g2{-2.5, 2.5, 2000};
  auto c2 = sextic_ground_check(2.0, g2);
  CHECK(std::fabs(c2.e0) <= 5e-3);
  CHECK(c2.overlap >= 0.999);
}

TEST_CASE("sextic ground state is even and centered", "[qm1d]") {
  Grid g{-3.0, 3.0, 2000};
  auto spec = solve_spectrum(Potential(Sextic{1.0}), g, 1);
  const auto& st = *spec.levels[0].state;
  CHECK(spec.levels[0].parity == Parity::Even);
  int peak = 0;
  for (int i = 0; i < g.n_points; ++i)
    if (std::fabs(st.values[i]) > std::fabs(st.values[peak])) peak = i;
  CHECK(std::fabs(g.point(peak)) <= g.dx());
}

TEST_CASE("parity audit passes for symmetric potentials", "[qm1d]") {
  Grid g{-3.0, 3.0, 2000};
  auto sextic = parity_audit(Potential(Sextic{1.0}), 0.0, g, 10);
  CHECK(sextic.passed);
  REQUIRE(sextic.entries.size() == 10);
  for (const auto& e : sextic.entries) {
    CHECK(e.parity != Parity::Indefinite);
    CHECK(e.asymmetry < 1e-6);
    CHECK_FALSE(e.degenerate);
  }

  Grid wide{-4.0, 4.0, 2001};
  auto sombrero = parity_audit(Potential(Sombrero{1.0, 1.0}), 0.0, wide, 10);
  CHECK(sombrero.passed);
}

TEST_CASE("parity audit works about a shifted axis", "[qm1d]") {
  Grid g{-1.0, 3.0, 1500};
  auto V = Potential(Tabulated{tabulate(g, [](double x) { return 2.0 * (x - 1) * (x - 1); })});
  auto report = parity_audit(V, 1.0, g, 4);
  CHECK(report.passed);
}

TEST_CASE("parity audit rejects asymmetric potentials", "[qm1d]") {
  Grid g{-5.0, 5.0, 1200};
  CHECK_THROWS_AS(parity_audit(Potential(AsymmetricSinh{1.0, 1.0}), 0.0, g, 4),
                  potential_not_symmetric);
}

TEST_CASE("audit reports degenerate pairs for a huge barrier", "[qm1d]") {
  Grid g{-2.0, 2.0, 2001};
  auto report = parity_audit(Potential(PiecewiseDoubleWell{2e5, 2.0, 0.5}), 0.0, g, 2);
  CHECK(report.entries[0].degenerate);
  CHECK(report.entries[1].degenerate);
  CHECK_FALSE(report.passed);
}

TEST_CASE("ground energy error shrinks at second order", "[qm1d]") {
  // 3-point eigenvalues approach from below: refining raises them toward the
  // true value, with successive gains shrinking ~4x per dx halving.
  double e1 = 0, e2 = 0, e4 = 0;
  {
    Grid g{-8.0, 8.0, 1001};
    e1 = ground_energy(harmonic_potential(g), g);
  }
  {
    Grid g{-8.0, 8.0, 2001};
    e2 = ground_energy(harmonic_potential(g), g);
  }
  {
    Grid g{-8.0, 8.0, 4001};
    e4 = ground_energy(harmonic_potential(g), g);
  }
  CHECK(e1 < e2);
  CHECK(e2 < e4);
  CHECK(e4 < harmonic_level(0, 1.0));
  double ratio = (e2 - e1) / (e4 - e2);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("double oscillator with a=0 is a pure quadratic", "[qm1d]") {
  Grid g{-8.0, 8.0, 2000};
  auto spec = solve_spectrum(Potential(DoubleOscillator{1.0, 1.0, 0.0}), g, 3);
  for (int n = 0; n < 3; ++n)
    CHECK(spec.levels[n].energy ==
          Catch::Approx(harmonic_level(n, std::sqrt(2.0))).margin(1e-3));
}

TEST_CASE("rayleigh quotient of the zero mode matches the solver", "[qm1d]") {
  Grid g{-3.0, 3.0, 2000};
  auto phi = tabulate(g, [](double x) { return std::exp(-x * x * x * x); });
  double q = rayleigh_quotient(Potential(Sextic{1.0}), g, phi.values);
  double e0 = ground_energy(Potential(Sextic{1.0}), g);
  CHECK(std::fabs(q - e0) <= 1e-3);
}

TEST_CASE("potential evaluation formulas", "[qm1d]") {
  Potential som(Sombrero{2.0, 3.0});
  CHECK(som(1.5) == Catch::Approx(2 * 5.0625 - 3 * 2.25));

  Potential sx(Sextic{2.0});
  CHECK(sx(1.0) == Catch::Approx(0.5 * (16 * 4 - 12 * 2)));

  Potential dosc(DoubleOscillator{1.0, 2.0, 1.0});
  CHECK(dosc(1.5) == Catch::Approx(4 * 0.25));
  CHECK(dosc(-1.5) == Catch::Approx(4 * 0.25));
  CHECK(dosc(0.0) == Catch::Approx(4.0));

  Potential pw(PiecewiseDoubleWell{5.0, 2.0, 0.5});
  CHECK(pw(0.0) == 5.0);
  CHECK(pw(0.5) == 5.0);
  CHECK(pw(0.51) == 0.0);
  CHECK(pw(1.9) == 0.0);

  Potential asym(AsymmetricSinh{1.0, 1.0});
  CHECK(asym(3.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(asym(-1.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(asym(1.0) > 0.0);
}

TEST_CASE("tabulated potential interpolates and clamps", "[qm1d]") {
  Grid g{0.0, 1.0, 3};  // nodes 0, 0.5, 1
  Potential V(Tabulated{TabulatedState(g, {1.0, 3.0, 2.0})});
  CHECK(V(0.25) == Catch::Approx(2.0));
  CHECK(V(0.75) == Catch::Approx(2.5));
  CHECK(V(-1.0) == 1.0);
  CHECK(V(2.0) == 2.0);
}

TEST_CASE("potential parameter validation", "[qm1d]") {
  CHECK_THROWS_AS(Potential(Sombrero{0.0, 1.0}), invalid_parameter);
  CHECK_THROWS_AS(Potential(Sombrero{1.0, -1.0}), invalid_parameter);
  CHECK_THROWS_AS(Potential(Sextic{-1.0}), invalid_parameter);
  CHECK_THROWS_AS(Potential(DoubleOscillator{1.0, 1.0, -0.5}), invalid_parameter);
  CHECK_THROWS_AS(Potential(PiecewiseDoubleWell{1.0, 1.0, 1.5}), invalid_parameter);
  CHECK_THROWS_AS(Potential(PiecewiseDoubleWell{-1.0, 2.0, 0.5}), invalid_parameter);
  CHECK_THROWS_AS(Potential(AsymmetricSinh{0.0, 1.0}), invalid_parameter);
  CHECK(Potential(DoubleOscillator{1.0, 1.0, 0.0})(1.0) == Catch::Approx(1.0));
}

TEST_CASE("potential descriptors name their family", "[qm1d]") {
  CHECK(Potential(Sombrero{1.0, 1.0}).describe() == "sombrero(lambda=1,mu=1)");
  CHECK(Potential(Sextic{2.0}).describe() == "sextic(a=2)");
  CHECK(Potential(PiecewiseDoubleWell{200.0, 2.0, 0.5}).describe() ==
        "piecewise(alpha=200,a=2,b=0.5)");
  Grid g{-1.0, 1.0, 11};
  CHECK(Potential(Tabulated{tabulate(g, [](double) { return 0.0; })}).describe() ==
        "tabulated(anonymous)");
}
