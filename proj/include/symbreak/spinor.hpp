#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "symbreak/core.hpp"
#include "symbreak/numerics.hpp"
#include "symbreak/qm1d.hpp"

namespace symbreak {

enum class Branch { Plus, Minus };

inline std::string to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

/// Two harmonic oscillators on the line, each shifted down by half its own
/// quantum so each ladder starts at zero. Stacked as the two components of a
/// spinor they commute with the diagonal Pauli matrix sigma3, which is the
/// internal symmetry of interest. Nothing about the frequency ratio is
/// assumed here; degeneracy is detected, not postulated.
struct SpinorSystem {
  double omega_plus;
  double omega_minus;
  double hbar = 1.0;
  double m = 1.0;
};

struct SpinorLevel {
  Branch branch;  // sigma3 eigenvalue sign of the eigenspinor
  int n;          // ladder index, n >= 0
  double energy;  // hbar * n * omega_branch, stored exactly as that product
};

/// A level pair (n on the plus ladder, m on the minus ladder) whose energies
/// agree within the requested tolerance. mismatch = |hbar*n*w+ - hbar*m*w-|.
struct Degeneracy {
  int n;
  int m;
  double mismatch;
};

namespace detail {

inline void check_system(const SpinorSystem& s) {
  if (!(s.omega_plus > 0) || !std::isfinite(s.omega_plus) || !(s.omega_minus > 0) ||
      !std::isfinite(s.omega_minus))
    throw invalid_parameter("SpinorSystem: frequencies must be positive and finite");
  if (!(s.hbar > 0) || !(s.m > 0))
    throw invalid_parameter("SpinorSystem: hbar and m must be positive");
}

inline double branch_omega(const SpinorSystem& s, Branch b) {
  return b == Branch::Plus ? s.omega_plus : s.omega_minus;
}

// Potential of one oscillator block sampled on the grid, without the
// constant offset (that is applied to the eigenvalues afterwards).
inline Potential harmonic_block(const SpinorSystem& s, double omega, const Grid& grid,
                                const std::string& label) {
  std::vector<double> v(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    double x = grid.point(i);
    v[i] = 0.5 * s.m * omega * omega * x * x;
  }
  return Potential(Tabulated{TabulatedState{grid, std::move(v), label}});
}

}  // namespace detail

/// All levels hbar*n*omega of both ladders up to e_max inclusive, merged and
/// sorted ascending; at equal energy the plus branch sorts first. The doubly
/// labeled zero-energy ground level is always present: the internal symmetry
/// is broken there and only there when the frequency ratio is irrational.
inline std::vector<SpinorLevel> spinor_spectrum(const SpinorSystem& sys, double e_max) {
  detail::check_system(sys);
  if (!(e_max > 0) || !std::isfinite(e_max))
    throw invalid_parameter("spinor_spectrum: E_max must be positive and finite");
  std::vector<SpinorLevel> out;
  for (Branch br : {Branch::Plus, Branch::Minus}) {
    double omega = detail::branch_omega(sys, br);
    for (int n = 0;; ++n) {
      double e = sys.hbar * n * omega;
      if (e > e_max) break;
      out.push_back({br, n, e});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SpinorLevel& a, const SpinorLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return static_cast<int>(a.branch) < static_cast<int>(b.branch);
  });
  return out;
}

/// Every pair 1 <= n, m <= n_max with |hbar*n*w+ - hbar*m*w-| <= tol, sorted
/// by n then m. When tol/hbar < w-/(4*n_max) any such pair forces m/n within
/// 1/(2n^2) of the frequency ratio, so by the classical best-approximation
/// theorem (n, m) must be an integer multiple of a continued-fraction
/// convergent; scanning convergent multiples is then exhaustive and fast.
/// Coarser tolerances fall back to the direct double loop.
inline std::vector<Degeneracy> find_degeneracies(const SpinorSystem& sys, int n_max, double tol) {
  detail::check_system(sys);
  if (n_max < 1) throw invalid_parameter("find_degeneracies: n_max must be >= 1");
  if (!(tol > 0) || !std::isfinite(tol))
    throw invalid_parameter("find_degeneracies: tol must be positive and finite");

  std::vector<Degeneracy> out;
  auto try_pair = [&](long long n, long long m) {
    double gap = std::fabs(sys.hbar * static_cast<double>(n) * sys.omega_plus -
                           sys.hbar * static_cast<double>(m) * sys.omega_minus);
    if (gap <= tol) out.push_back({static_cast<int>(n), static_cast<int>(m), gap});
  };

  double delta = tol / sys.hbar;
  if (delta < sys.omega_minus / (4.0 * n_max)) {
    auto convergents = best_rational_approximations(sys.omega_plus / sys.omega_minus, n_max);
    for (const auto& c : convergents) {
      if (c.p < 1) continue;  // ratio < 1 opens with p = 0, never a level pair
      for (long long k = 1; k * c.q <= n_max && k * c.p <= n_max; ++k) try_pair(k * c.q, k * c.p);
    }
    std::sort(out.begin(), out.end(), [](const Degeneracy& a, const Degeneracy& b) {
      return a.n != b.n ? a.n < b.n : a.m < b.m;
    });
  } else {
    for (long long n = 1; n <= n_max; ++n)
      for (long long m = 1; m <= n_max; ++m) try_pair(n, m);
  }
  return out;
}

/// Default tolerance: far below the level spacing, far above rounding.
inline std::vector<Degeneracy> find_degeneracies(const SpinorSystem& sys, int n_max) {
  detail::check_system(sys);
  return find_degeneracies(sys, n_max,
                           1e-9 * sys.hbar * std::min(sys.omega_plus, sys.omega_minus));
}

/// Constant-offset convention for the split into a common oscillator part and
/// a sign-flipping interaction. Consistent uses denominator 4, the unique
/// choice whose sum and difference reproduce the two block offsets
/// -hbar*omega/2 exactly. Doubled uses denominator 2; its reconstruction
/// misses each block by a constant hbar*omega/2 and is kept only as a
/// documented negative control.
enum class OffsetConvention { Consistent, Doubled };

/// The block pair written as H0*I + u(x)*sigma3: a common displaced
/// oscillator plus a position-dependent interaction that couples only to the
/// internal sign. omega_delta_sq may be negative (interaction inverts) when
/// the minus frequency dominates.
struct Decomposition {
  double omega0;          // sqrt((w+^2 + w-^2)/2)
  double omega_delta_sq;  // (w+^2 - w-^2)/2
  double eps0;            // constant offset of the common part
  double eps_delta;       // constant offset of the interaction
  double hbar;
  double m;

  double base_potential(double x) const { return 0.5 * m * omega0 * omega0 * x * x - eps0; }
  double interaction(double x) const { return 0.5 * m * omega_delta_sq * x * x - eps_delta; }
};

inline Decomposition decompose(const SpinorSystem& sys,
                               OffsetConvention convention = OffsetConvention::Consistent) {
  detail::check_system(sys);
  double wp2 = sys.omega_plus * sys.omega_plus;
  double wm2 = sys.omega_minus * sys.omega_minus;
  double den = convention == OffsetConvention::Consistent ? 4.0 : 2.0;
  return {std::sqrt(0.5 * (wp2 + wm2)),
          0.5 * (wp2 - wm2),
          sys.hbar * (sys.omega_plus + sys.omega_minus) / den,
          sys.hbar * (sys.omega_plus - sys.omega_minus) / den,
          sys.hbar,
          sys.m};
}

/// Builds both oscillator blocks twice on the grid: directly from the block
/// definitions, and as base +- interaction from the decomposition. Returns
/// the largest entry-wise difference between the two constructions over both
/// blocks. With the Consistent convention this is pure rounding; with Doubled
/// it equals the constant offset mismatch hbar*max(omega)/2.
inline double reconstruction_residual(const SpinorSystem& sys, const Grid& grid,
                                      OffsetConvention convention = OffsetConvention::Consistent) {
  detail::check_system(sys);
  Decomposition d = decompose(sys, convention);
  double worst = 0;
  for (Branch br : {Branch::Plus, Branch::Minus}) {
    double omega = detail::branch_omega(sys, br);
    double sign = br == Branch::Plus ? 1.0 : -1.0;
    auto direct = build_hamiltonian(detail::harmonic_block(sys, omega, grid, "direct"), grid,
                                    sys.hbar, sys.m);
    auto common = build_hamiltonian(
        detail::harmonic_block(sys, d.omega0, grid, "common"), grid, sys.hbar, sys.m);
    for (size_t i = 0; i < direct.diag.size(); ++i) {
      double x = grid.point(static_cast<int>(i) + 1);
      double direct_entry = direct.diag[i] - 0.5 * sys.hbar * omega;
      double split_entry = common.diag[i] - d.eps0 + sign * d.interaction(x);
      worst = std::max(worst, std::fabs(direct_entry - split_entry));
    }
    for (size_t i = 0; i < direct.offdiag.size(); ++i)
      worst = std::max(worst, std::fabs(direct.offdiag[i] - common.offdiag[i]));
  }
  return worst;
}

// Seed for the audit's test spinors, fixed so every run draws the same ones.
inline constexpr unsigned commutator_audit_seed = 20260816u;

/// Applies sigma3*H - H*sigma3 to pseudo-random normalized test spinors (two
/// stacked interior grid functions, seeded with commutator_audit_seed) and
/// returns the largest result norm. The block-diagonal Hamiltonian commutes
/// with sigma3 exactly, entry by entry, so anything above rounding signals a
/// broken block structure. A nonzero `coupling` adds that multiple of the
/// off-diagonal Pauli matrix sigma1, deliberately breaking the symmetry: the
/// commutator norm then comes back >= coupling (negative control).
inline double commutator_audit(const SpinorSystem& sys, const Grid& grid, int trials,
                               double coupling = 0.0) {
  detail::check_system(sys);
  if (trials < 1) throw invalid_parameter("commutator_audit: trials must be >= 1");
  if (!std::isfinite(coupling)) throw invalid_parameter("commutator_audit: coupling must be finite");

  auto block = [&](Branch br) {
    return build_hamiltonian(
        detail::harmonic_block(sys, detail::branch_omega(sys, br), grid, "audit"), grid, sys.hbar,
        sys.m);
  };
  auto h_plus = block(Branch::Plus);
  auto h_minus = block(Branch::Minus);
  const int ni = static_cast<int>(h_plus.diag.size());

  auto apply = [ni](const TridiagonalOperator& t, const std::vector<double>& v,
                    std::vector<double>& out) {
    for (int i = 0; i < ni; ++i) {
      double s = t.diag[i] * v[i];
      if (i > 0) s += t.offdiag[i - 1] * v[i - 1];
      if (i + 1 < ni) s += t.offdiag[i] * v[i + 1];
      out[i] = s;
    }
  };

  std::mt19937 rng(commutator_audit_seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> up(ni), down(ni), h_up(ni), h_down(ni);
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    double nrm2 = 0;
    for (int i = 0; i < ni; ++i) {
      up[i] = uni(rng);
      down[i] = uni(rng);
      nrm2 += up[i] * up[i] + down[i] * down[i];
    }
    double inv = 1.0 / std::sqrt(nrm2);
    for (int i = 0; i < ni; ++i) {
      up[i] *= inv;
      down[i] *= inv;
    }
    apply(h_plus, up, h_up);
    apply(h_minus, down, h_down);
    // Both orders row by row. Negation is exact in floating point, so a
    // block applied to -v is written as -(block v); the block parts then
    // cancel bitwise and only the sigma1 coupling survives.
    double r2 = 0;
    for (int i = 0; i < ni; ++i) {
      double top = h_up[i] + coupling * down[i];              // (H psi) top
      double bottom = h_down[i] + coupling * up[i];           // (H psi) bottom
      double top_flip = h_up[i] - coupling * down[i];         // (H sigma3 psi) top
      double bottom_flip = -(h_down[i]) + coupling * up[i];   // (H sigma3 psi) bottom
      double c_top = top - top_flip;
      double c_bottom = -bottom - bottom_flip;
      r2 += c_top * c_top + c_bottom * c_bottom;
    }
    worst = std::max(worst, std::sqrt(r2));
  }
  return worst;
}

/// Numeric spectrum of both blocks on the grid, offsets applied so each
/// ladder reads approximately hbar*n*omega; merged ascending with branch
/// labels, k levels per branch. Eigensolver failures propagate.
inline std::vector<SpinorLevel> grid_spinor_spectrum(const SpinorSystem& sys, const Grid& grid,
                                                     int k) {
  detail::check_system(sys);
  if (k < 1) throw invalid_parameter("grid_spinor_spectrum: k must be >= 1");
  std::vector<SpinorLevel> out;
  for (Branch br : {Branch::Plus, Branch::Minus}) {
    double omega = detail::branch_omega(sys, br);
    auto spec = solve_spectrum(
        detail::harmonic_block(sys, omega, grid, std::string("block_") + to_string(br)), grid, k,
        sys.hbar, sys.m);
    for (int n = 0; n < static_cast<int>(spec.levels.size()); ++n)
      out.push_back({br, n, spec.levels[n].energy - 0.5 * sys.hbar * omega});
  }
  std::stable_sort(out.begin(), out.end(), [](const SpinorLevel& a, const SpinorLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return static_cast<int>(a.branch) < static_cast<int>(b.branch);
  });
  return out;
}

}  // namespace symbreak
