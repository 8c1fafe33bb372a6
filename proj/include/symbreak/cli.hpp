#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symbreak/verification.hpp"

// Command-line front end. Every subcommand computes its complete output in
// memory first and only then touches the filesystem, so a failure of any kind
// leaves no partial files behind.

namespace symbreak::cli {

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const char* s = item.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || *end != '\0' || !std::isfinite(v))
      throw usage_error(std::string(flag) + ": expected a comma-separated list of numbers, got '" +
                        text + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw usage_error(std::string(flag) + ": empty list");
  return out;
}

// All output files of one invocation, staged before any write happens.
class OutputSet {
 public:
  OutputSet(std::string dir, std::set<Format> formats)
      : dir_(std::move(dir)), formats_(std::move(formats)) {}

  void add_table(const std::string& stem, const Table& t) {
    for (Format f : formats_) {
      if (f == Format::Svg) continue;  // tables have no drawing
      files_.push_back({stem + "." + to_string(f), f == Format::Csv ? render_csv(t)
                                                                    : render_json(t)});
    }
  }

  void add_figure(const std::string& stem, const FigureDocument& fig) {
    for (Format f : formats_)
      if (f == Format::Svg) files_.push_back({stem + ".svg", render_svg(fig)});
  }

  // Writes everything or nothing: a failed write removes the files this call
  // already created before rethrowing.
  void commit() const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw io_failure("cannot create output directory " + dir_ + ": " + ec.message());
    std::vector<fs::path> written;
    for (const auto& f : files_) {
      fs::path p = fs::path(dir_) / f.name;
      std::ofstream os(p, std::ios::binary | std::ios::trunc);
      os.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
      os.flush();
      if (!os) {
        os.close();
        for (const auto& w : written) fs::remove(w, ec);
        fs::remove(p, ec);
        throw io_failure("failed writing " + p.string());
      }
      written.push_back(p);
    }
    for (const auto& w : written) std::printf("wrote %s\n", w.string().c_str());
  }

 private:
  struct StagedFile {
    std::string name;
    std::string content;
  };
  std::string dir_;
  std::set<Format> formats_;
  std::vector<StagedFile> files_;
};

struct CommonOpts {
  std::string out = ".";
  std::string formats = "csv,svg";
};

inline void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--formats", c.formats, "comma list of csv, json, svg")
      ->capture_default_str();
}

struct PortraitOpts {
  CommonOpts common;
  std::string potential = "sombrero";
  double lambda = 1.0, mu = 1.0;
  double nu = 1.0, alpha = 1.0;
  std::string energies = "-0.1,0,0.5";
  double mass = 1.0, dt = 1e-3;
  int steps = 5000;
  double xmin = -1.5, xmax = 1.5;
};

inline int run_portrait(const PortraitOpts& o) {
  std::function<double(double)> V;
  if (o.potential == "sombrero")
    V = sombrero_potential(o.lambda, o.mu);
  else
    V = asymmetric_demo_potential(o.nu, o.alpha);
  auto energies = parse_double_list(o.energies, "--energies");
  auto trajectories = phase_portrait(V, o.mass, energies, {o.xmin, o.xmax}, o.dt, o.steps);
  for (const auto& tr : trajectories)
    if (!tr.error.empty())
      throw convergence_failure("trajectory at E=" + std::to_string(tr.energy) + " failed: " +
                                tr.error);
  OutputSet out(o.common.out, parse_formats(o.common.formats));
  out.add_table("portrait", portrait_table(trajectories, o.dt));
  out.add_figure("portrait", portrait_figure(trajectories));
  out.commit();
  return 0;
}

struct SpectrumOpts {
  CommonOpts common;
  std::string potential;
  double lambda = 1.0, mu = 1.0;
  double a = 1.0, omega = 1.0;
  double alpha = 1.0, b = 0.5;
  double nu = 1.0;
  double xmin = -4.0, xmax = 4.0;
  bool range_given = false;
  int points = 2001, k = 6;
  double hbar = 1.0, mass = 1.0;
};

inline int run_spectrum(const SpectrumOpts& o) {
  auto make = [&]() -> Potential {
    if (o.potential == "sombrero") return Potential(Sombrero{o.lambda, o.mu});
    if (o.potential == "sextic") return Potential(Sextic{o.a, o.hbar, o.mass});
    if (o.potential == "doubleosc") return Potential(DoubleOscillator{o.mass, o.omega, o.a});
    if (o.potential == "piecewise") return Potential(PiecewiseDoubleWell{o.alpha, o.a, o.b});
    return Potential(AsymmetricSinh{o.nu, o.alpha});
  };
  Potential V = make();
  double xmin = o.xmin, xmax = o.xmax;
  if (o.potential == "piecewise" && !o.range_given) {
    xmin = -o.a;  // box walls are part of this potential
    xmax = o.a;
  }
  auto spec = solve_spectrum(V, Grid{xmin, xmax, o.points}, o.k, o.hbar, o.mass);
  if (spec.leakage_warning)
    std::fprintf(stderr,
                 "warning: wall amplitude ratio %.2g; levels may be box artifacts, widen the "
                 "range\n",
                 spec.wall_amplitude_ratio);
  OutputSet out(o.common.out, parse_formats(o.common.formats));
  out.add_table("spectrum", spectrum_table(spec));
  out.add_figure("spectrum", spectrum_figure(V, spec));
  out.commit();
  return 0;
}

struct DoublewellOpts {
  CommonOpts common;
  double alpha = 0.0;
  double a = 2.0, b = 0.5;
  double hbar = 1.0, mass = 1.0;
  int levels = 6;
  std::string gap_alphas;
  int gap_n = 1;
  bool threshold = false;
  bool states = false;
  bool limit_states = false;
  int state_n = 1;
  int points = 2001;
};

inline int run_doublewell(const DoublewellOpts& o) {
  if (o.levels < 1) throw usage_error("--levels must be at least 1");
  const WellParams p{o.a, o.b, o.alpha, o.hbar, o.mass};
  auto roots = levels_below_barrier(p, (o.levels + 1) / 2);
  if (roots.size() > static_cast<size_t>(o.levels)) roots.resize(o.levels);

  OutputSet out(o.common.out, parse_formats(o.common.formats));
  out.add_table("levels", well_levels_table(roots));

  if (o.states) {
    Grid grid{-o.a, o.a, o.points};
    std::vector<TabulatedState> pair;
    for (const auto& r : roots)
      if (r.n == o.state_n) {
        auto psi = assemble_wavefunction(r, p, grid);
        psi.label = std::string(to_string(r.parity)) + "_" + std::to_string(r.n);
        pair.push_back(std::move(psi));
      }
    if (pair.empty())
      throw out_of_range("no sub-barrier pair with n=" + std::to_string(o.state_n) +
                         " at this barrier height");
    out.add_table("states", states_table(pair));
    out.add_figure("states", states_figure(pair, "sub-barrier pair"));
  }

  if (o.limit_states) {
    Grid grid{-o.a, o.a, o.points};
    auto st = infinite_barrier_states(o.state_n, o.a, o.b, grid);
    std::vector<TabulatedState> four{st.psi_left, st.psi_right, st.psi_plus, st.psi_minus};
    out.add_table("limit_states", states_table(four));
    out.add_figure("limit_states", states_figure(four, "infinite-barrier states"));
  }

  if (!o.gap_alphas.empty()) {
    auto alphas = parse_double_list(o.gap_alphas, "--gap-alphas");
    out.add_table("gaps", gap_table(parity_gap_sweep(alphas, o.gap_n, o.a, o.b, o.hbar, o.mass)));
  }

  if (o.threshold)
    out.add_table("threshold",
                  threshold_table(o.a, o.b, threshold_alpha(o.a, o.b, o.hbar, o.mass)));

  out.commit();
  return 0;
}

struct SpinorOpts {
  CommonOpts common;
  double omega_plus = 0.0, omega_minus = 0.0;
  double hbar = 1.0, mass = 1.0;
  double emax = 0.0;
  bool emax_given = false;
  int nmax = 1000;
  double tol = 0.0;
  bool tol_given = false;
};

inline int run_spinor(const SpinorOpts& o) {
  const SpinorSystem sys{o.omega_plus, o.omega_minus, o.hbar, o.mass};
  double emax = o.emax_given ? o.emax
                             : 5.0 * sys.hbar * std::max(sys.omega_plus, sys.omega_minus);
  auto levels = spinor_spectrum(sys, emax);
  auto degs = o.tol_given ? find_degeneracies(sys, o.nmax, o.tol)
                          : find_degeneracies(sys, o.nmax);
  auto d = decompose(sys);

  OutputSet out(o.common.out, parse_formats(o.common.formats));
  out.add_table("spinor_levels", spinor_levels_table(levels));
  out.add_figure("spinor_levels", spinor_ladder_figure(levels));
  out.add_table("degeneracies", degeneracy_table(degs));
  out.add_table("decomposition", decomposition_table(sys, d));
  out.commit();
  return 0;
}

inline int run_verify() {
  auto results = run_acceptance_suite();
  return print_acceptance_report(stdout, results) ? 0 : 2;
}

inline int classify_exit(const error& e) {
  if (dynamic_cast<const usage_error*>(&e) || dynamic_cast<const invalid_parameter*>(&e) ||
      dynamic_cast<const out_of_range*>(&e) || dynamic_cast<const grid_mismatch*>(&e) ||
      dynamic_cast<const not_normalized*>(&e) ||
      dynamic_cast<const potential_not_symmetric*>(&e) ||
      dynamic_cast<const empty_figure*>(&e) || dynamic_cast<const io_failure*>(&e))
    return 1;
  return 2;
}

}  // namespace detail

/// Dispatches one invocation; args exclude the program name. Returns the
/// process exit status: 0 success, 1 validation problem, 2 numerical failure.
inline int run(const std::vector<std::string>& args) {
  CLI::App app{"toy models of spontaneous symmetry breakdown"};
  app.require_subcommand(1);

  detail::PortraitOpts po;
  auto* portrait = app.add_subcommand("portrait", "classical phase portraits");
  portrait->add_option("--potential", po.potential, "sombrero or asymsinh")
      ->check(CLI::IsMember({"sombrero", "asymsinh"}))
      ->capture_default_str();
  portrait->add_option("--lambda", po.lambda, "quartic coefficient")->capture_default_str();
  portrait->add_option("--mu", po.mu, "quadratic well depth")->capture_default_str();
  portrait->add_option("--nu", po.nu, "asymsinh strength")->capture_default_str();
  portrait->add_option("--alpha", po.alpha, "asymsinh scale")->capture_default_str();
  portrait->add_option("--energies", po.energies, "comma list of energies")
      ->capture_default_str();
  portrait->add_option("--mass", po.mass, "particle mass")->capture_default_str();
  portrait->add_option("--dt", po.dt, "integrator step")->capture_default_str();
  portrait->add_option("--steps", po.steps, "steps per trajectory")->capture_default_str();
  portrait->add_option("--xmin", po.xmin, "scan interval lower end")->capture_default_str();
  portrait->add_option("--xmax", po.xmax, "scan interval upper end")->capture_default_str();
  detail::add_common(portrait, po.common);

  detail::SpectrumOpts so;
  auto* spectrum = app.add_subcommand("spectrum", "grid eigenlevels of a potential");
  spectrum->add_option("--potential", so.potential, "potential family")
      ->check(CLI::IsMember({"sombrero", "sextic", "doubleosc", "piecewise", "asymsinh"}))
      ->required();
  spectrum->add_option("--lambda", so.lambda)->capture_default_str();
  spectrum->add_option("--mu", so.mu)->capture_default_str();
  spectrum->add_option("--a", so.a, "shape parameter of sextic/doubleosc/piecewise")
      ->capture_default_str();
  spectrum->add_option("--omega", so.omega)->capture_default_str();
  spectrum->add_option("--alpha", so.alpha, "barrier height (piecewise) or scale (asymsinh)")
      ->capture_default_str();
  spectrum->add_option("--b", so.b, "barrier half-width")->capture_default_str();
  spectrum->add_option("--nu", so.nu)->capture_default_str();
  auto* sxmin = spectrum->add_option("--xmin", so.xmin)->capture_default_str();
  auto* sxmax = spectrum->add_option("--xmax", so.xmax)->capture_default_str();
  spectrum->add_option("--points", so.points)->capture_default_str();
  spectrum->add_option("--k", so.k, "number of levels")->capture_default_str();
  spectrum->add_option("--hbar", so.hbar)->capture_default_str();
  spectrum->add_option("--mass", so.mass)->capture_default_str();
  detail::add_common(spectrum, so.common);

  detail::DoublewellOpts dw;
  auto* doublewell = app.add_subcommand("doublewell", "piecewise double well exact levels");
  doublewell->add_option("--alpha", dw.alpha, "barrier height")->required();
  doublewell->add_option("--a", dw.a, "outer wall")->capture_default_str();
  doublewell->add_option("--b", dw.b, "barrier half-width")->capture_default_str();
  doublewell->add_option("--hbar", dw.hbar)->capture_default_str();
  doublewell->add_option("--mass", dw.mass)->capture_default_str();
  doublewell->add_option("--levels", dw.levels, "number of level entries")
      ->capture_default_str();
  doublewell->add_option("--gap-alphas", dw.gap_alphas,
                         "comma list of barrier heights for the gap sweep");
  doublewell->add_option("--gap-n", dw.gap_n, "pair index for the gap sweep")
      ->capture_default_str();
  doublewell->add_flag("--threshold", dw.threshold, "emit the lowest-level threshold height");
  doublewell->add_flag("--states", dw.states, "emit the assembled sub-barrier pair");
  doublewell->add_flag("--limit-states", dw.limit_states,
                       "emit the infinite-barrier concentrated states");
  doublewell->add_option("--state-n", dw.state_n, "pair index for state output")
      ->capture_default_str();
  doublewell->add_option("--points", dw.points, "grid points for state tabulation")
      ->capture_default_str();
  detail::add_common(doublewell, dw.common);

  detail::SpinorOpts sp;
  auto* spinor = app.add_subcommand("spinor", "two-oscillator spinor model");
  spinor->add_option("--omega-plus", sp.omega_plus, "upper branch frequency")->required();
  spinor->add_option("--omega-minus", sp.omega_minus, "lower branch frequency")->required();
  spinor->add_option("--hbar", sp.hbar)->capture_default_str();
  spinor->add_option("--mass", sp.mass)->capture_default_str();
  auto* emax = spinor->add_option("--emax", sp.emax, "energy cutoff (default 5 hbar max omega)");
  spinor->add_option("--nmax", sp.nmax, "degeneracy search depth")->capture_default_str();
  auto* tol = spinor->add_option("--tol", sp.tol, "degeneracy tolerance");
  detail::add_common(spinor, sp.common);

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (portrait->parsed()) return detail::run_portrait(po);
    if (spectrum->parsed()) {
      so.range_given = sxmin->count() > 0 || sxmax->count() > 0;
      return detail::run_spectrum(so);
    }
    if (doublewell->parsed()) return detail::run_doublewell(dw);
    if (spinor->parsed()) {
      sp.emax_given = emax->count() > 0;
      sp.tol_given = tol->count() > 0;
      return detail::run_spinor(sp);
    }
    if (verify->parsed()) return detail::run_verify();
    return 1;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return detail::classify_exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}

}  // namespace symbreak::cli
