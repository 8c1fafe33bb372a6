#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "symbreak/core.hpp"
#include "symbreak/numerics.hpp"

namespace symbreak {

enum class SymmetryClass { Symmetric, Asymmetric, Separatrix };

inline const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Symmetric: return "symmetric";
    case SymmetryClass::Asymmetric: return "asymmetric";
    default: return "separatrix";
  }
}

/// Connected component of the classically allowed region {V <= E}.
/// Unbounded ends carry +-infinity in lo/hi.
struct ComponentInterval {
  double lo;
  double hi;
  bool lo_bounded;
  bool hi_bounded;
};

struct Trajectory {
  double energy;
  std::vector<PhaseState> points;
  SymmetryClass symmetry_class;
  ComponentInterval component_interval;
  std::string error;  // nonempty when integration failed for this component
};

/// Local model of an even potential maximum: V ~ V(x_a) - (gamma^2/2n) x'^(2n).
struct LocalMaxModel {
  double x_a;
  int n;
  double gamma_sq;
  double v_at_max;
};

inline std::function<double(double)> sombrero_force(double lambda, double mu) {
  if (!(lambda > 0) || !(mu > 0))
    throw invalid_parameter("sombrero_force: lambda and mu must be positive");
  return [lambda, mu](double x) { return 2 * mu * x - 4 * lambda * x * x * x; };
}

inline std::function<double(double)> sombrero_potential(double lambda, double mu) {
  if (!(lambda > 0) || !(mu > 0))
    throw invalid_parameter("sombrero_potential: lambda and mu must be positive");
  return [lambda, mu](double x) {
    double x2 = x * x;
    return lambda * x2 * x2 - mu * x2;
  };
}

inline std::function<double(double)> asymmetric_demo_potential(double nu, double alpha) {
  if (!(nu > 0) || !(alpha > 0))
    throw invalid_parameter("asymmetric_demo_potential: nu and alpha must be positive");
  return [nu, alpha](double x) {
    double s1 = std::sinh(alpha * x - 3);
    double s2 = std::sinh((1 + alpha * x) / 20);
    return nu * s1 * s1 * s2 * s2;
  };
}

namespace detail {

// Central difference for the k-th derivative, minimal stencil; half-integer
// offsets keep the stencil centered for odd k.
template <class F>
double central_derivative(F&& f, double x, int k, double h) {
  double num = 0;
  double c = 1;  // binomial C(k, i), updated incrementally
  for (int i = 0; i <= k; ++i) {
    double off = (0.5 * k - i) * h;
    num += ((i % 2) ? -c : c) * f(x + off);
    c = c * (k - i) / (i + 1);
  }
  return num / std::pow(h, k);
}

// One Richardson level on the O(h^2) central estimate.
template <class F>
double refined_derivative(F&& f, double x, int k, double h) {
  double d1 = central_derivative(f, x, k, h);
  double d2 = central_derivative(f, x, k, 0.5 * h);
  return (4 * d2 - d1) / 3;
}

}  // namespace detail

/// Identify the leading even Taylor order 2n and strength gamma^2 of a local
/// maximum: (1/(2n)!) d^{2n}V(x_a) = -gamma^2/(2n).
template <class F>
LocalMaxModel local_max_model(F&& V, double x_a, int n_max = 4) {
  if (n_max < 1) throw invalid_parameter("local_max_model: n_max must be >= 1");
  const int k_top = 2 * n_max;
  std::vector<double> d(k_top + 1, 0.0);
  double scale = 0;
  for (int k = 1; k <= k_top; ++k) {
    double h = (k <= 4) ? 0.5 : 0.7;  // larger steps keep high orders out of rounding noise
    d[k] = detail::refined_derivative(V, x_a, k, h);
    scale = std::max(scale, std::fabs(d[k]));
  }
  if (scale == 0) throw not_a_maximum("local_max_model: potential is flat at this order");
  const double vanish = 1e-6 * scale;
  const double significant = 50 * vanish;

  for (int n = 1; n <= n_max; ++n) {
    double odd = d[2 * n - 1];
    if (std::fabs(odd) >= significant)
      throw not_a_maximum("local_max_model: odd derivative dominates at order " +
                          std::to_string(2 * n - 1));
    if (std::fabs(odd) >= vanish)
      throw tolerance_ambiguous("local_max_model: order " + std::to_string(2 * n - 1) +
                                " derivative sits in the noise band");
    double even = d[2 * n];
    if (std::fabs(even) >= significant) {
      if (even > 0)
        throw not_a_maximum("local_max_model: leading even derivative is positive (a minimum)");
      double fact = 1;
      for (int i = 2; i <= 2 * n; ++i) fact *= i;
      return {x_a, n, -2.0 * n * even / fact, V(x_a)};
    }
    if (std::fabs(even) >= vanish)
      throw tolerance_ambiguous("local_max_model: order " + std::to_string(2 * n) +
                                " derivative sits in the noise band");
  }
  throw not_a_maximum("local_max_model: no nonvanishing even derivative up to order " +
                      std::to_string(k_top));
}

/// Turning points of the local model at energy E_prime relative to V(x_a):
/// x'_{+-} = +-(-2n E'/gamma^2)^{1/2n}.
inline std::pair<double, double> local_turning_points(const LocalMaxModel& model, double e_prime) {
  if (e_prime > 0)
    throw no_turning_points("local_turning_points: energy above the local maximum");
  if (e_prime == 0)
    throw at_separatrix("local_turning_points: turning points degenerate at the maximum");
  double r = std::pow(-2.0 * model.n * e_prime / model.gamma_sq, 1.0 / (2 * model.n));
  return {-r, r};
}

namespace detail {

// All connected components of {V <= E} inside [lo, hi], boundaries refined by
// bisection on V - E. Components truncated by the scan carry unbounded flags.
template <class F>
std::vector<ComponentInterval> allowed_components(F&& V, double E, double lo, double hi) {
  const int N = 4096;
  const double step = (hi - lo) / N;
  const double xtol = std::max(1e-12, 1e-10 * (hi - lo));
  auto phi = [&](double x) { return V(x) - E; };

  std::vector<ComponentInterval> out;
  bool inside = phi(lo) <= 0;
  double start = lo;
  bool start_bounded = !inside;  // refined below when a crossing opens a component
  for (int i = 1; i <= N; ++i) {
    double x = (i == N) ? hi : lo + i * step;
    bool now = phi(x) <= 0;
    if (now && !inside) {
      start = find_root_bracketed(phi, x - step, x, xtol);
      start_bounded = true;
      inside = true;
    } else if (!now && inside) {
      double end = find_root_bracketed(phi, x - step, x, xtol);
      out.push_back({start, end, start_bounded, true});
      inside = false;
    }
  }
  if (inside) out.push_back({start, hi, start_bounded, false});
  for (auto& c : out) {
    if (!c.lo_bounded) c.lo = -std::numeric_limits<double>::infinity();
    if (!c.hi_bounded) c.hi = std::numeric_limits<double>::infinity();
  }
  return out;
}

// Interior local maxima of V inside (lo, hi), located on a dense sample and
// refined by golden-section on -V.
template <class F>
std::vector<double> interior_maxima(F&& V, double lo, double hi) {
  const int M = 2048;
  double step = (hi - lo) / M;
  std::vector<double> found;
  double vm = V(lo), v0 = V(lo + step);
  for (int i = 2; i <= M; ++i) {
    double vp = V(lo + i * step);
    if (v0 >= vm && v0 >= vp && (v0 > vm || v0 > vp)) {
      double a = lo + (i - 2) * step, b = lo + i * step;
      const double gr = 0.6180339887498949;
      double c = b - gr * (b - a), dd = a + gr * (b - a);
      for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, std::fabs(a) + std::fabs(b));
           ++it) {
        if (V(c) > V(dd)) {
          b = dd;
        } else {
          a = c;
        }
        c = b - gr * (b - a);
        dd = a + gr * (b - a);
      }
      found.push_back(0.5 * (a + b));
    }
    vm = v0;
    v0 = vp;
  }
  return found;
}

template <class F>
SymmetryClass classify_component(F&& V, double E, const ComponentInterval& comp, double axis,
                                 double scan_lo, double scan_hi) {
  double lo = comp.lo_bounded ? comp.lo : scan_lo;
  double hi = comp.hi_bounded ? comp.hi : scan_hi;
  double vscale = std::max(1.0, std::fabs(E));
  for (double xm : interior_maxima(V, lo, hi)) {
    double vm = V(xm);
    vscale = std::max(vscale, std::fabs(vm));
    if (std::fabs(vm - E) <= 1e-8 * vscale) return SymmetryClass::Separatrix;
  }
  if (comp.lo_bounded != comp.hi_bounded) return SymmetryClass::Asymmetric;
  if (!comp.lo_bounded) return SymmetryClass::Symmetric;  // spans the whole scan
  double mismatch = std::fabs((comp.lo - axis) + (comp.hi - axis));
  return mismatch <= 1e-7 * std::max(1.0, comp.hi - comp.lo) ? SymmetryClass::Symmetric
                                                             : SymmetryClass::Asymmetric;
}

}  // namespace detail

/// Classify the allowed component containing x0 as Symmetric/Asymmetric about
/// `axis`, or Separatrix when E touches an interior maximum of V.
template <class F>
SymmetryClass classify_trajectory(F&& V, double E, double x0, double axis,
                                  std::pair<double, double> scan_interval) {
  auto [slo, shi] = scan_interval;
  if (!(slo < shi)) throw invalid_parameter("classify_trajectory: empty scan interval");
  if (V(x0) - E > 1e-9 * std::max(1.0, std::fabs(E)))
    throw energy_below_minimum("classify_trajectory: x0 is classically forbidden at this energy");
  auto comps = detail::allowed_components(V, E, slo, shi);
  const double slack = (shi - slo) / 4096.0;
  for (auto& c : comps) {
    double lo = c.lo_bounded ? c.lo - slack : -std::numeric_limits<double>::infinity();
    double hi = c.hi_bounded ? c.hi + slack : std::numeric_limits<double>::infinity();
    if (x0 >= lo && x0 <= hi) return detail::classify_component(V, E, c, axis, slo, shi);
  }
  throw energy_below_minimum("classify_trajectory: no allowed component contains x0");
}

/// One trajectory per allowed component per energy. Seeds at a turning point
/// with p = 0 (bounded side) or mid-component with p > 0 when both ends are
/// open. Symmetry is judged about the scan-interval midpoint.
template <class F>
std::vector<Trajectory> phase_portrait(F&& V, double mass, const std::vector<double>& energies,
                                       std::pair<double, double> scan_interval, double dt,
                                       long steps) {
  auto [slo, shi] = scan_interval;
  if (!(slo < shi)) throw invalid_parameter("phase_portrait: empty scan interval");
  if (!(mass > 0)) throw invalid_parameter("phase_portrait: mass must be positive");
  const double axis = 0.5 * (slo + shi);
  auto force = [&V](double x) {
    double h = 1e-6 * std::max(1.0, std::fabs(x));
    return -(V(x + h) - V(x - h)) / (2 * h);
  };

  std::vector<Trajectory> out;
  for (double E : energies) {
    for (auto& comp : detail::allowed_components(V, E, slo, shi)) {
      Trajectory tr;
      tr.energy = E;
      tr.component_interval = comp;
      tr.symmetry_class = detail::classify_component(V, E, comp, axis, slo, shi);
      PhaseState seed{0, 0};
      if (comp.lo_bounded) {
        seed = {comp.lo, 0.0};
      } else if (comp.hi_bounded) {
        seed = {comp.hi, 0.0};
      } else {
        double mid = 0.5 * (std::max(comp.lo, slo) + std::min(comp.hi, shi));
        double k2 = 2 * mass * (E - V(mid));
        seed = {mid, k2 > 0 ? std::sqrt(k2) : 0.0};
      }
      try {
        tr.points = integrate_hamiltonian(force, mass, seed, dt, steps);
      } catch (const non_finite& e) {
        tr.error = e.what();
      }
      out.push_back(std::move(tr));
    }
  }
  return out;
}

}  // namespace symbreak
