#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symbreak/core.hpp"
#include "symbreak/numerics.hpp"

namespace symbreak {

enum class Parity { Even, Odd, Indefinite };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "indefinite";
  }
}

struct Sombrero {
  double lambda, mu;  // V = lambda x^4 - mu x^2
};
struct Sextic {
  double a, hbar = 1.0, mass = 1.0;  // V = (hbar^2/2m)(16 a^2 x^6 - 12 a x^2)
};
struct DoubleOscillator {
  double mass, omega, a;  // V = m omega^2 (|x|-a)^2, as printed (no 1/2)
};
struct PiecewiseDoubleWell {
  double alpha, a, b;  // alpha on |x|<=b, 0 on b<|x|<a, walls = Dirichlet box at +-a
};
struct AsymmetricSinh {
  double nu, alpha;  // nu sinh^2(alpha x - 3) sinh^2((1 + alpha x)/20)
};
struct Tabulated {
  TabulatedState state;  // linear interpolation, clamped outside the grid
};

namespace detail {
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace detail

class Potential {
 public:
  Potential(Sombrero s) : v_(s) {
    if (!(s.lambda > 0) || !(s.mu > 0))
      throw invalid_parameter("Sombrero: lambda and mu must be positive");
  }
  Potential(Sextic s) : v_(s) {
    if (!(s.a > 0) || !(s.hbar > 0) || !(s.mass > 0))
      throw invalid_parameter("Sextic: a, hbar, mass must be positive");
  }
  Potential(DoubleOscillator s) : v_(s) {
    if (!(s.mass > 0) || !(s.omega > 0) || s.a < 0)
      throw invalid_parameter("DoubleOscillator: need mass, omega > 0 and a >= 0");
  }
  Potential(PiecewiseDoubleWell s) : v_(s) {
    if (!(s.alpha > 0) || !(0 < s.b && s.b < s.a))
      throw invalid_parameter("PiecewiseDoubleWell: need alpha > 0 and 0 < b < a");
  }
  Potential(AsymmetricSinh s) : v_(s) {
    if (!(s.nu > 0) || !(s.alpha > 0))
      throw invalid_parameter("AsymmetricSinh: nu and alpha must be positive");
  }
  Potential(Tabulated s) : v_(std::move(s)) {}

  double operator()(double x) const {
    return std::visit(
        [x](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Sombrero>) {
            double x2 = x * x;
            return p.lambda * x2 * x2 - p.mu * x2;
          } else if constexpr (std::is_same_v<T, Sextic>) {
            double x2 = x * x;
            double c = p.hbar * p.hbar / (2 * p.mass);
            return c * (16 * p.a * p.a * x2 * x2 * x2 - 12 * p.a * x2);
          } else if constexpr (std::is_same_v<T, DoubleOscillator>) {
            double d = std::fabs(x) - p.a;
            return p.mass * p.omega * p.omega * d * d;
          } else if constexpr (std::is_same_v<T, PiecewiseDoubleWell>) {
            return std::fabs(x) <= p.b ? p.alpha : 0.0;
          } else if constexpr (std::is_same_v<T, AsymmetricSinh>) {
            double s1 = std::sinh(p.alpha * x - 3);
            double s2 = std::sinh((1 + p.alpha * x) / 20);
            return p.nu * s1 * s1 * s2 * s2;
          } else {
            const TabulatedState& st = p.state;
            const Grid& g = st.grid;
            if (x <= g.x_min) return st.values.front();
            if (x >= g.x_max) return st.values.back();
            double t = (x - g.x_min) / g.dx();
            int i = static_cast<int>(t);
            if (i >= g.n_points - 1) i = g.n_points - 2;
            double f = t - i;
            return (1 - f) * st.values[i] + f * st.values[i + 1];
          }
        },
        v_);
  }

  // Hard walls coincide with the Dirichlet box edges; eigenstates then have
  // nonzero slope there and the wall-leakage heuristic does not apply.
  bool hard_walled() const { return std::holds_alternative<PiecewiseDoubleWell>(v_); }

  const PiecewiseDoubleWell* as_piecewise() const {
    return std::get_if<PiecewiseDoubleWell>(&v_);
  }

  std::string describe() const {
    using detail::fmt_num;
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Sombrero>)
            return "sombrero(lambda=" + fmt_num(p.lambda) + ",mu=" + fmt_num(p.mu) + ")";
          else if constexpr (std::is_same_v<T, Sextic>)
            return "sextic(a=" + fmt_num(p.a) + ")";
          else if constexpr (std::is_same_v<T, DoubleOscillator>)
            return "doubleosc(m=" + fmt_num(p.mass) + ",omega=" + fmt_num(p.omega) +
                   ",a=" + fmt_num(p.a) + ")";
          else if constexpr (std::is_same_v<T, PiecewiseDoubleWell>)
            return "piecewise(alpha=" + fmt_num(p.alpha) + ",a=" + fmt_num(p.a) +
                   ",b=" + fmt_num(p.b) + ")";
          else if constexpr (std::is_same_v<T, AsymmetricSinh>)
            return "asymsinh(nu=" + fmt_num(p.nu) + ",alpha=" + fmt_num(p.alpha) + ")";
          else
            return "tabulated(" + (p.state.label.empty() ? std::string("anonymous") : p.state.label) +
                   ")";
        },
        v_);
  }

 private:
  std::variant<Sombrero, Sextic, DoubleOscillator, PiecewiseDoubleWell, AsymmetricSinh, Tabulated>
      v_;
};

struct Level {
  int index;
  double energy;
  Parity parity;
  double asymmetry;
  std::optional<TabulatedState> state;
};

struct Spectrum {
  std::vector<Level> levels;
  std::string potential_descriptor;
  Grid grid;
  double hbar;
  double mass;
  bool leakage_warning = false;
  double wall_amplitude_ratio = 0.0;
};

struct ParityResult {
  Parity parity;
  double asymmetry;
  std::string reason;
};

/// Reflection-based parity about `axis`: s+ = ||psi(x) - psi(2 axis - x)||,
/// s- = ||psi(x) + psi(2 axis - x)||, reflected values by linear interpolation.
inline ParityResult classify_parity(const TabulatedState& state, double axis, double tol = 1e-6) {
  const Grid& g = state.grid;
  if (std::fabs(g.center() - axis) > 0.5 * g.dx())
    return {Parity::Indefinite, 1.0, "grid is not symmetric about the axis"};
  const int n = g.n_points;
  double sp = 0, sm = 0, nn = 0;
  for (int i = 0; i < n; ++i) {
    double v = state.values[i];
    double xr = 2 * axis - g.point(i);
    double vr;
    if (xr <= g.x_min) {
      vr = state.values.front();
    } else if (xr >= g.x_max) {
      vr = state.values.back();
    } else {
      double t = (xr - g.x_min) / g.dx();
      int j = static_cast<int>(t);
      if (j >= n - 1) j = n - 2;
      double f = t - j;
      vr = (1 - f) * state.values[j] + f * state.values[j + 1];
    }
    sp += (v - vr) * (v - vr);
    sm += (v + vr) * (v + vr);
    nn += v * v;
  }
  if (nn == 0) return {Parity::Indefinite, 1.0, "zero state"};
  sp = std::sqrt(sp);
  sm = std::sqrt(sm);
  nn = std::sqrt(nn);
  double measure = std::min(sp, sm) / nn;
  if (sp <= tol * nn) return {Parity::Even, measure, ""};
  if (sm <= tol * nn) return {Parity::Odd, measure, ""};
  return {Parity::Indefinite, measure, "neither reflection residual under tolerance"};
}

/// Discrete Hamiltonian on the grid interior: diag_i = hbar^2/(m dx^2) + V(x_i),
/// offdiag = -hbar^2/(2 m dx^2), Dirichlet values at the box edges.
inline TridiagonalOperator build_hamiltonian(const Potential& V, const Grid& grid, double hbar = 1.0,
                                             double mass = 1.0) {
  if (!(hbar > 0) || !(mass > 0))
    throw invalid_parameter("build_hamiltonian: hbar and mass must be positive");
  if (const auto* pw = V.as_piecewise()) {
    double tol = 1e-9 * pw->a;
    if (std::fabs(grid.x_min + pw->a) > tol || std::fabs(grid.x_max - pw->a) > tol)
      throw invalid_parameter("build_hamiltonian: piecewise well needs the box exactly at +-a");
  }
  const int m = grid.n_points - 2;
  const double dx = grid.dx();
  const double kin = hbar * hbar / (mass * dx * dx);
  std::vector<double> d(m), e(m > 0 ? m - 1 : 0, -0.5 * kin);
  for (int i = 0; i < m; ++i) d[i] = kin + V(grid.point(i + 1));
  return TridiagonalOperator(std::move(d), std::move(e));
}

/// k lowest levels with normalized eigenstates and parity labels (about the
/// grid center). Confining potentials get a wall-leakage check.
inline Spectrum solve_spectrum(const Potential& V, const Grid& grid, int k, double hbar = 1.0,
                               double mass = 1.0) {
  auto H = build_hamiltonian(V, grid, hbar, mass);
  auto pairs = eig_sym_tridiag(H, k, true);
  const int n = grid.n_points;
  const double dx = grid.dx();

  Spectrum spec{{}, V.describe(), grid, hbar, mass};
  double worst_ratio = 0;
  for (int j = 0; j < k; ++j) {
    std::vector<double> full(n, 0.0);
    double peak = 0;
    for (int i = 0; i < n - 2; ++i) {
      full[i + 1] = pairs[j].vector[i];
      peak = std::max(peak, std::fabs(full[i + 1]));
    }
    if (peak > 0)
      worst_ratio = std::max(
          worst_ratio, std::max(std::fabs(full[1]), std::fabs(full[n - 2])) / peak);
    double nrm = std::sqrt(dx);  // interior Euclidean norm is 1; endpoints are 0
    for (auto& v : full) v /= nrm;
    TabulatedState st(grid, std::move(full), "psi_" + std::to_string(j));
    st.normalized = true;
    auto par = classify_parity(st, grid.center());
    spec.levels.push_back({j, pairs[j].value, par.parity, par.asymmetry, std::move(st)});
  }
  if (!V.hard_walled() && worst_ratio > 1e-6) {
    spec.leakage_warning = true;
    spec.wall_amplitude_ratio = worst_ratio;
  }
  return spec;
}

/// Trapezoidal <x> for a normalized state.
inline double expectation_x(const TabulatedState& state) {
  double nrm = norm(state);
  if (std::fabs(nrm - 1.0) > 1e-6)
    throw not_normalized("expectation_x: state norm is " + detail::fmt_num(nrm));
  const Grid& g = state.grid;
  const int n = g.n_points;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    s += w * g.point(i) * state.values[i] * state.values[i];
  }
  return s * g.dx();
}

/// ||a_hat psi|| / ||psi|| for a supplied state; the annihilation operator is
/// -i (d/dx + 4 a x^3), so the norm drops the phase. Central differences.
inline double annihilation_residual(double a, const TabulatedState& psi) {
  if (!(a > 0)) throw invalid_parameter("annihilation_residual: a must be positive");
  const Grid& grid = psi.grid;
  const int n = grid.n_points;
  const double dx = grid.dx();
  std::vector<double> res(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    double x = grid.point(i);
    double dpsi = (psi.values[i + 1] - psi.values[i - 1]) / (2 * dx);
    res[i] = dpsi + 4 * a * x * x * x * psi.values[i];
  }
  TabulatedState rpsi(grid, std::move(res));
  return norm(rpsi) / norm(psi);
}

/// Same residual for the closed-form zero mode phi = e^{-a x^4}.
inline double annihilation_residual(double a, const Grid& grid) {
  if (!(a > 0)) throw invalid_parameter("annihilation_residual: a must be positive");
  auto phi = tabulate(grid, [a](double x) { return std::exp(-a * x * x * x * x); });
  return annihilation_residual(a, phi);
}

struct GroundCheck {
  double e0;
  double overlap;
};

/// Ground level of the sextic Hamiltonian vs the closed-form zero mode e^{-a x^4}.
inline GroundCheck sextic_ground_check(double a, const Grid& grid, double hbar = 1.0,
                                       double mass = 1.0) {
  auto spec = solve_spectrum(Potential(Sextic{a, hbar, mass}), grid, 1, hbar, mass);
  auto phi = tabulate(grid, [a](double x) { return std::exp(-a * x * x * x * x); }, "phi");
  double nrm = norm(phi);
  for (auto& v : phi.values) v /= nrm;
  phi.normalized = true;
  double ov = std::fabs(inner_product(*spec.levels[0].state, phi));
  return {spec.levels[0].energy, ov};
}

struct AuditEntry {
  int index;
  double energy;
  Parity parity;
  double asymmetry;
  bool degenerate;  // paired with a neighbor within 1e-8 relative
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool passed;
};

/// Solve k levels of a symmetric potential and check the parity dichotomy:
/// passes iff every level has a definite parity (measure < 1e-6) and no two
/// consecutive levels are degenerate within 1e-8 relative. Degenerate pairs
/// are reported as such (any basis of the eigenspace is acceptable).
inline AuditReport parity_audit(const Potential& V, double axis, const Grid& grid, int k,
                                double hbar = 1.0, double mass = 1.0) {
  double scale = 1.0, worst = 0.0;
  const int M = 2000;
  for (int i = 0; i <= M; ++i) {
    double x = grid.x_min + (grid.x_max - grid.x_min) * i / M;
    double v = V(x);
    scale = std::max(scale, std::fabs(v));
    worst = std::max(worst, std::fabs(v - V(2 * axis - x)));
  }
  if (worst > 1e-10 * scale)
    throw potential_not_symmetric("parity_audit: potential asymmetry " + detail::fmt_num(worst) +
                                  " about axis " + detail::fmt_num(axis));

  auto spec = solve_spectrum(V, grid, k, hbar, mass);
  AuditReport report{{}, true};
  for (int i = 0; i < k; ++i) {
    const Level& lv = spec.levels[i];
    report.entries.push_back({i, lv.energy, lv.parity, lv.asymmetry, false});
  }
  for (int i = 0; i + 1 < k; ++i) {
    double e0 = spec.levels[i].energy, e1 = spec.levels[i + 1].energy;
    if (std::fabs(e1 - e0) <= 1e-8 * std::max(std::fabs(e0), std::fabs(e1))) {
      report.entries[i].degenerate = true;
      report.entries[i + 1].degenerate = true;
    }
  }
  for (auto& e : report.entries)
    if (e.degenerate || e.asymmetry >= 1e-6) report.passed = false;
  return report;
}

}  // namespace symbreak
