#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "symbreak/core.hpp"

namespace symbreak {

/// Bisection on a bracketing interval. Requires f(lo) * f(hi) < 0.
/// Returns the midpoint of the final bracket, whose width is <= tol.
template <class F>
double find_root_bracketed(F&& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw invalid_parameter("find_root_bracketed: need lo < hi");
  if (!(tol > 0)) throw invalid_parameter("find_root_bracketed: tol must be positive");
  double flo = f(lo);
  double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi))
    throw non_finite("find_root_bracketed: endpoint evaluation is NaN");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw no_sign_change("find_root_bracketed: f has the same sign at both endpoints");
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // spacing exhausted
    double fm = f(mid);
    if (std::isnan(fm)) throw non_finite("find_root_bracketed: f(mid) is NaN");
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if (hi - lo <= tol) return 0.5 * (lo + hi);
  }
  if (hi - lo <= tol) return 0.5 * (lo + hi);
  throw max_iterations("find_root_bracketed: bracket failed to shrink below tol");
}

struct EigenPair {
  double value;
  std::vector<double> vector;
};

/// Real symmetric tridiagonal matrix. offdiag has size()-1 entries.
struct TridiagonalOperator {
  std::vector<double> diag;
  std::vector<double> offdiag;

  TridiagonalOperator(std::vector<double> d, std::vector<double> e)
      : diag(std::move(d)), offdiag(std::move(e)) {
    if (diag.empty()) throw invalid_parameter("TridiagonalOperator: empty diagonal");
    if (offdiag.size() + 1 != diag.size())
      throw invalid_parameter("TridiagonalOperator: offdiag must have size()-1 entries");
    for (double v : diag)
      if (!std::isfinite(v)) throw invalid_parameter("TridiagonalOperator: non-finite entry");
    for (double v : offdiag)
      if (!std::isfinite(v)) throw invalid_parameter("TridiagonalOperator: non-finite entry");
  }

  int size() const { return static_cast<int>(diag.size()); }

  std::vector<double> apply(const std::vector<double>& v) const {
    const int n = size();
    if (static_cast<int>(v.size()) != n)
      throw grid_mismatch("TridiagonalOperator::apply: length mismatch");
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
      double s = diag[i] * v[i];
      if (i > 0) s += offdiag[i - 1] * v[i - 1];
      if (i + 1 < n) s += offdiag[i] * v[i + 1];
      w[i] = s;
    }
    return w;
  }

  // Gershgorin bound on the spectral radius; also the norm scale for tolerances.
  double norm_bound() const {
    const int n = size();
    double m = 0;
    for (int i = 0; i < n; ++i) {
      double r = std::fabs(diag[i]);
      if (i > 0) r += std::fabs(offdiag[i - 1]);
      if (i + 1 < n) r += std::fabs(offdiag[i]);
      m = std::max(m, r);
    }
    return m;
  }
};

namespace detail {

// Number of eigenvalues of T strictly below x, by the Sturm ratio recurrence.
inline int sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x,
                       double pivmin) {
  const int n = static_cast<int>(d.size());
  int cnt = 0;
  double q = 1.0;
  for (int i = 0; i < n; ++i) {
    q = d[i] - x - (i > 0 ? e2[i - 1] / q : 0.0);
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0) ++cnt;
  }
  return cnt;
}

// LU factorization of a general tridiagonal matrix with partial pivoting.
struct TriLU {
  std::vector<double> dl, d, du, du2;
  std::vector<int> ipiv;

  // On entry dl/d/du hold the matrix bands; factors replace them in place.
  void factor(double tiny) {
    const int n = static_cast<int>(d.size());
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    ipiv.resize(n);
    for (int i = 0; i < n; ++i) ipiv[i] = i;
    for (int i = 0; i + 1 < n; ++i) {
      if (std::fabs(d[i]) >= std::fabs(dl[i])) {
        if (std::fabs(d[i]) < tiny) d[i] = (std::signbit(d[i]) ? -tiny : tiny);
        double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        double below = d[i + 1];
        d[i + 1] = du[i] - fact * below;
        du[i] = below;
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        ipiv[i] = i + 1;
      }
    }
    if (std::fabs(d[n - 1]) < tiny) d[n - 1] = (std::signbit(d[n - 1]) ? -tiny : tiny);
  }

  void solve(std::vector<double>& b) const {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (ipiv[i] == i) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        double t = b[i];
        b[i] = b[i + 1];
        b[i + 1] = t - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

inline double xorshift_unit(std::uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return static_cast<double>(s >> 11) * 0x1.0p-52 - 1.0;
}

inline double vec_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Lowest k eigenvalues (ascending) of a symmetric tridiagonal operator, by
/// Sturm-sequence bisection; eigenvectors by inverse iteration with
/// Gram-Schmidt inside near-degenerate clusters.
inline std::vector<EigenPair> eig_sym_tridiag(const TridiagonalOperator& T, int k,
                                              bool want_vectors = true) {
  const int n = T.size();
  if (k < 1 || k > n) throw invalid_parameter("eig_sym_tridiag: k out of range");
  const double eps = std::numeric_limits<double>::epsilon();

  std::vector<double> e2(T.offdiag.size());
  double e2max = 0;
  for (std::size_t i = 0; i < e2.size(); ++i) {
    e2[i] = T.offdiag[i] * T.offdiag[i];
    e2max = std::max(e2max, e2[i]);
  }
  const double pivmin = std::max(e2max, 1.0) * std::numeric_limits<double>::min() / eps;

  double glo = T.diag[0], ghi = T.diag[0];
  for (int i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::fabs(T.offdiag[i - 1]);
    if (i + 1 < n) r += std::fabs(T.offdiag[i]);
    glo = std::min(glo, T.diag[i] - r);
    ghi = std::max(ghi, T.diag[i] + r);
  }
  const double gnorm = std::max(std::fabs(glo), std::fabs(ghi));
  const double pad = 2 * eps * std::max(gnorm, 1.0) * n + 2 * pivmin;
  glo -= pad;
  ghi += pad;

  std::vector<double> lambda(k);
  for (int j = 0; j < k; ++j) {
    double lo = (j > 0) ? lambda[j - 1] - pad : glo;
    double hi = ghi;
    while (hi - lo > 2 * eps * (std::fabs(lo) + std::fabs(hi)) + 2 * pivmin) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (detail::sturm_count(T.diag, e2, mid, pivmin) >= j + 1)
        hi = mid;
      else
        lo = mid;
    }
    lambda[j] = 0.5 * (lo + hi);
    if (j > 0) lambda[j] = std::max(lambda[j], lambda[j - 1]);
  }

  std::vector<EigenPair> out(k);
  for (int j = 0; j < k; ++j) out[j].value = lambda[j];
  if (!want_vectors) return out;

  // Cluster grouping: members closer than ctol share Gram-Schmidt treatment.
  const double ctol = 1e3 * eps * std::max(gnorm, 1.0);
  const double tiny = pivmin;

  for (int j = 0; j < k; ++j) {
    int cluster_begin = j;
    while (cluster_begin > 0 && lambda[cluster_begin] - lambda[cluster_begin - 1] <= ctol)
      --cluster_begin;

    std::uint64_t seed = 0x9E3779B97F4A7C15ull ^ (static_cast<std::uint64_t>(j) * 0xBF58476D1CE4E5B9ull + 1);
    double shift = lambda[j];
    bool ok = false;
    std::vector<double> v(n), w(n);

    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      detail::TriLU lu;
      lu.d.resize(n);
      lu.dl.assign(n > 1 ? n - 1 : 0, 0.0);
      lu.du.assign(n > 1 ? n - 1 : 0, 0.0);
      for (int i = 0; i < n; ++i) lu.d[i] = T.diag[i] - shift;
      for (int i = 0; i + 1 < n; ++i) lu.dl[i] = lu.du[i] = T.offdiag[i];
      lu.factor(tiny);

      for (int i = 0; i < n; ++i) v[i] = detail::xorshift_unit(seed);
      double nv = detail::vec_norm(v);
      for (int i = 0; i < n; ++i) v[i] /= nv;

      for (int it = 0; it < 160; ++it) {
        for (int i = cluster_begin; i < j; ++i) {
          double c = detail::vec_dot(v, out[i].vector);
          for (int q = 0; q < n; ++q) v[q] -= c * out[i].vector[q];
        }
        double nrm = detail::vec_norm(v);
        if (nrm < 1e-3) {
          for (int i = 0; i < n; ++i) v[i] = detail::xorshift_unit(seed);
          nrm = detail::vec_norm(v);
        }
        for (int i = 0; i < n; ++i) v[i] /= nrm;

        w = v;
        lu.solve(w);
        double nw = detail::vec_norm(w);
        if (!std::isfinite(nw) || nw == 0.0) break;  // retry with perturbed shift
        double align = detail::vec_dot(w, v) < 0 ? -1.0 : 1.0;
        double delta = 0;
        for (int i = 0; i < n; ++i) {
          double wi = align * w[i] / nw;
          delta += (wi - v[i]) * (wi - v[i]);
          v[i] = wi;
        }
        if (it >= 1 && std::sqrt(delta) < 64 * eps * n) {
          ok = true;
          break;
        }
        if (it == 159) ok = true;  // accept; residual check below decides
      }
      if (!ok) shift = lambda[j] + (attempt + 1) * 16 * eps * std::max(gnorm, 1.0);
    }
    if (!ok) throw convergence_failure("eig_sym_tridiag: inverse iteration failed");

    for (int i = cluster_begin; i < j; ++i) {
      double c = detail::vec_dot(v, out[i].vector);
      for (int q = 0; q < n; ++q) v[q] -= c * out[i].vector[q];
    }
    double nv = detail::vec_norm(v);
    if (nv == 0.0) throw convergence_failure("eig_sym_tridiag: degenerate cluster exhausted");
    for (int i = 0; i < n; ++i) v[i] /= nv;

    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
    if (v[imax] < 0)
      for (int i = 0; i < n; ++i) v[i] = -v[i];

    w = T.apply(v);
    double res = 0;
    for (int i = 0; i < n; ++i) {
      double r = w[i] - lambda[j] * v[i];
      res += r * r;
    }
    res = std::sqrt(res);
    if (res > 1e-8 * std::max(gnorm, 1.0))
      throw convergence_failure("eig_sym_tridiag: residual exceeds tolerance");
    out[j].vector = v;
  }
  return out;
}

/// Second-order symplectic kick-drift integration of H = p^2/2m + V(x),
/// force = -dV/dx. Returns steps+1 states including the initial one.
/// Palindromic splitting kick(c h) drift(h/2) kick((1-2c) h) drift(h/2)
/// kick(c h) with the error-optimized coefficient of Omelyan, Mryglod and
/// Folk; same order and reversibility as plain leapfrog, ~10x smaller
/// energy-error constant at two force evaluations per step.
template <class F>
std::vector<PhaseState> integrate_hamiltonian(F&& force, double mass, PhaseState initial,
                                              double dt, long steps) {
  if (!(mass > 0)) throw invalid_parameter("integrate_hamiltonian: mass must be positive");
  if (!(dt > 0)) throw invalid_parameter("integrate_hamiltonian: dt must be positive");
  if (steps < 0) throw invalid_parameter("integrate_hamiltonian: steps must be >= 0");
  constexpr double c = 0.1931833275037836;
  std::vector<PhaseState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(initial);
  double x = initial.x;
  double p = initial.p;
  double f = force(x);
  for (long s = 0; s < steps; ++s) {
    p += c * dt * f;
    x += 0.5 * dt * p / mass;
    f = force(x);
    p += (1 - 2 * c) * dt * f;
    x += 0.5 * dt * p / mass;
    f = force(x);
    p += c * dt * f;
    if (!std::isfinite(x) || !std::isfinite(p))
      throw non_finite("integrate_hamiltonian: state diverged at step " + std::to_string(s + 1));
    out.push_back({x, p});
  }
  return out;
}

/// Trapezoidal L2 inner product of two states on the same grid.
inline double inner_product(const TabulatedState& f, const TabulatedState& g) {
  if (!(f.grid == g.grid)) throw grid_mismatch("inner_product: states live on different grids");
  const int n = f.grid.n_points;
  double s = 0.5 * (f.values[0] * g.values[0] + f.values[n - 1] * g.values[n - 1]);
  for (int i = 1; i + 1 < n; ++i) s += f.values[i] * g.values[i];
  return s * f.grid.dx();
}

inline double norm(const TabulatedState& f) { return std::sqrt(inner_product(f, f)); }

/// One best rational approximation p/q to a positive real.
struct RationalApprox {
  long long p;
  long long q;
  double value;
  double error;
};

/// Continued-fraction convergents of x with denominators <= q_max, in order of
/// increasing denominator. Each is in lowest terms and is a best approximation.
inline std::vector<RationalApprox> best_rational_approximations(double x, long long q_max) {
  if (!(x > 0) || !std::isfinite(x))
    throw invalid_parameter("best_rational_approximations: x must be positive and finite");
  if (q_max < 1) throw invalid_parameter("best_rational_approximations: q_max must be >= 1");
  std::vector<RationalApprox> out;
  long long h_prev = 1, h_prev2 = 0;  // numerators
  long long k_prev = 0, k_prev2 = 1;  // denominators
  double y = x;
  for (int term = 0; term < 64; ++term) {
    if (!(y < 9.0e15)) break;  // partial quotient would overflow; expansion is done
    double af = std::floor(y);
    long long a = static_cast<long long>(af);
    long long h = a * h_prev + h_prev2;
    long long k = a * k_prev + k_prev2;
    if (k > q_max || k <= 0) break;
    double value = static_cast<double>(h) / static_cast<double>(k);
    RationalApprox r{h, k, value, std::fabs(x - value)};
    if (!out.empty() && out.back().q == k)
      out.back() = r;  // same denominator: the later convergent is strictly better
    else
      out.push_back(r);
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    double frac = y - af;
    if (frac <= 0) break;
    y = 1.0 / frac;
  }
  return out;
}

}  // namespace symbreak
