#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "lle/io.hpp"
#include "lle/parallel.hpp"
#include "lle/semigroup.hpp"

namespace lle::cli {

namespace {

struct Options {
  double alpha = 1.0;
  double mu = 0.01;
  std::string out;
  std::string profile;
  std::string snapshots;
  int n_xi = 128;
  int K = -1;
  int cells = 64;
  int n_per_cell = 64;
  double dt = 0.02;
  double t_end = 400.0;
  int stride = 50;
  std::string part = "full";
  std::string window;
  std::uint64_t seed = 0;
  std::string init = "translational";
  double E0 = 1e-2;
  double sigma = 2.0;
  bool linearized = false;
  bool no_dealias = false;
  int j = 1;
  int samples = 16;
};

void check_writable(const std::string& path) {
  if (path.empty()) return;
  namespace fs = std::filesystem;
  fs::path p(path);
  fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ValidationError("output directory '" + dir.string() + "' does not exist");
  if (fs::is_directory(p, ec)) throw ValidationError("output path '" + path + "' is a directory");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

std::pair<double, double> parse_window(const std::string& s) {
  double a, b;
  char c;
  std::istringstream in(s);
  if (!(in >> a >> c >> b) || c != ',' || !(a < b))
    throw ValidationError("--window expects 'tmin,tmax' with tmin < tmax");
  return {a, b};
}

int default_K(const Options& o, int fallback) { return o.K < 0 ? fallback : o.K; }

ExtendedField initial_perturbation(const WaveProfile& p, const Options& o) {
  if (o.init == "noise") {
    // smooth random field: Gaussian-filtered white noise in Fourier space
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> nd;
    ExtendedField f(o.cells, o.n_per_cell, p.period);
    const int P = f.size();
    RVec kap = wavenumbers(P, f.length());
    CVec hr(P), hi(P);
    for (int k = 0; k < P; ++k) {
      double w = std::exp(-kap[k] * kap[k]);
      hr[k] = w * cplx(nd(rng), nd(rng));
      hi[k] = w * cplx(nd(rng), nd(rng));
    }
    CVec r = ifft(hr), i = ifft(hi);
    for (int k = 0; k < P; ++k) {
      f.r[k] = r[k].real();
      f.i[k] = i[k].real();
    }
    double scale = o.E0 > 0.0 ? o.E0 / initial_size(f) : 1.0 / l1_norm(f);
    return scale * f;
  }
  PerturbationSpec s;
  if (o.init == "gaussian")
    s.kind = "plain";
  else if (o.init == "translational")
    s.kind = "translational";
  else
    throw ValidationError("--init must be gaussian, translational or noise");
  s.sigma = o.sigma;
  s.E0 = o.E0;
  return make_perturbation(p, o.cells, o.n_per_cell, s);
}

std::string config_json() {
  Options o;
  SimConfig sc;
  NewtonOptions no;
  SeedOptions so;
  VerifyOptions vo;
  Xi1Options xo;
  DecayOptions dopt;
  PropagatorConfig pc;
  nlohmann::json j = {
      {"threads", thread_count()},
      {"solve", {{"alpha", o.alpha}, {"mu", o.mu}, {"K", so.n_modes}, {"mu_cap", so.mu_cap},
                 {"tol", no.tol}, {"max_iter", no.max_iter}, {"grid_factor", no.grid_factor}}},
      {"verify", {{"n_xi", o.n_xi}, {"K", 16}, {"tol_zero", vo.tol_zero},
                  {"pairing_min", vo.pairing_min}}},
      {"critical", {{"K", 16}, {"samples", o.samples}, {"delta1", xo.delta1}, {"n_scan", xo.n_scan}}},
      {"propagate", {{"cells", o.cells}, {"n_per_cell", 32}, {"part", o.part}, {"t_end", o.t_end},
                     {"sample_dt", 1.0}, {"init", "gaussian"}, {"cond_limit", pc.cond_limit},
                     {"xi1", pc.cutoffs.xi1}}},
      {"evolve", {{"cells", sc.m_cells}, {"n_per_cell", sc.n_per_cell}, {"dt", sc.dt},
                  {"t_end", sc.t_end}, {"stride", sc.snapshot_stride}, {"dealias", sc.dealias},
                  {"contour_points", sc.contour_points}, {"init", o.init}, {"E0", o.E0},
                  {"sigma", o.sigma}, {"seed_rng", o.seed}}},
      {"phase_decay", {{"t_min", dopt.t_min}, {"delta1", dopt.delta1}}},
      {"damping", {{"j", o.j}}}};
  return j.dump(2) + "\n";
}

int dispatch(const std::string& cmd, const Options& o, std::ostream& out) {
  if (cmd == "config") {
    emit(o.out, config_json(), out);
    return 0;
  }
  check_writable(o.out);
  if (cmd == "solve") {
    SeedOptions so;
    if (o.K >= 0) so.n_modes = o.K;
    WaveProfile p = solve_profile(bifurcation_seed(o.alpha, o.mu, so));
    save_profile(p, o.out);
    out << "residual_norm " << p.residual_norm << " newton_steps " << p.newton_history.size()
        << " amplitude " << p.first_harmonic_amplitude() << "\n";
    return 0;
  }
  WaveProfile p = load_profile(o.profile);
  if (cmd == "spectrum") {
    const int K = default_K(o, 16);
    if (o.n_xi < 2) throw ValidationError("--n-xi must be at least 2");
    MultiplierTables tab = multiplier_tables(p, K);
    std::vector<SpectrumSlice> slices(o.n_xi);
    const double half = std::numbers::pi / p.period;
    parallel_for(o.n_xi, [&](int k) {
      double xi = -half + 2.0 * half * k / o.n_xi;
      if (2 * k == o.n_xi) xi = 0.0;
      slices[k] = spectrum_slice(assemble_bloch(p, tab, xi));
    });
    emit(o.out, spectrum_csv(slices), out);
    return 0;
  }
  if (cmd == "verify") {
    StabilityReport r = verify_stability(p, o.n_xi, default_K(o, 16));
    emit(o.out, stability_json(r), out);
    if (!o.out.empty()) out << "verdict " << (r.verdict ? "true" : "false") << "\n";
    return 0;
  }
  if (cmd == "critical") {
    const int K = default_K(o, 16);
    double xi1 = choose_xi1(p, K);
    double xmax = xi1;
    if (!o.window.empty()) {
      xmax = std::stod(o.window);
      if (!(xmax > 0.0)) throw ValidationError("--window must be a positive xi range");
    }
    // the expansion fit uses the inner quarter of the window and needs 4 samples per side there
    if (o.samples < 16) throw ValidationError("--samples must be at least 16");
    CriticalCurve c = critical_curve(track_critical(p, xmax, o.samples, K), xmax / 4);
    emit(o.out, critical_json(c, xi1), out);
    return 0;
  }
  if (cmd == "propagate") {
    Part part = Part::parse(o.part);
    PropagatorConfig pc;
    pc.K = o.K;
    pc.cutoffs.xi1 = choose_xi1(p, std::min(16, p.n_modes));
    Propagator prop(p, o.cells, o.n_per_cell, pc);
    ExtendedField v0 = initial_perturbation(p, o);
    RVec times;
    if (!(o.dt > 0.0)) throw ValidationError("--dt must be positive");
    for (long k = 0; k * o.dt <= o.t_end + 1e-9; ++k) times.push_back(k * o.dt);
    auto series = decay_probe(prop, part, v0, times);
    std::string csv = "t,norm\n";
    char buf[80];
    for (const auto& [t, v] : series) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, v);
      csv += buf;
    }
    emit(o.out, csv, out);
    return 0;
  }
  if (cmd == "evolve") {
    check_writable(o.snapshots);
    SimConfig sc;
    sc.m_cells = o.cells;
    sc.n_per_cell = o.n_per_cell;
    sc.dt = o.dt;
    sc.t_end = o.t_end;
    sc.snapshot_stride = o.stride;
    sc.dealias = !o.no_dealias;
    sc.linearized = o.linearized;
    Trajectory tr = run_lle(p, initial_perturbation(p, o), sc);
    emit(o.out, norm_series_csv(tr), out);
    if (!o.snapshots.empty()) save_snapshots(tr, o.snapshots);
    return 0;
  }
  if (cmd == "phase-decay") {
    Trajectory tr = load_snapshots(o.snapshots);
    DecayOptions d;
    d.K = o.K;
    if (!o.window.empty()) {
      auto [a, b] = parse_window(o.window);
      d.t_min = a;
      d.t_max_cap = b;
    }
    DecayReport r = analyze_decay(p, tr, d);
    emit(o.out, decay_json(r), out);
    return 0;
  }
  if (cmd == "damping") {
    Trajectory tr = load_snapshots(o.snapshots);
    DampingReport r = damping_report(p, tr, o.j);
    emit(o.out, damping_json(r), out);
    if (!o.out.empty()) out << "verdict " << (r.verdict ? "true" : "false") << "\n";
    return 0;
  }
  throw ValidationError("unknown subcommand '" + cmd + "'");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Lugiato-Lefever periodic wave toolkit", "lle"};
  app.require_subcommand(1);
  auto profile_opt = [&](CLI::App* s) {
    s->add_option("--profile", o.profile, "profile JSON from 'solve'")->required();
  };
  auto grid_opts = [&](CLI::App* s) {
    s->add_option("--cells", o.cells, "number of periods M on the torus")->capture_default_str();
    s->add_option("--n-per-cell", o.n_per_cell, "grid points N per period")->capture_default_str();
  };
  auto init_opts = [&](CLI::App* s) {
    s->add_option("--init", o.init, "gaussian | translational | noise")->capture_default_str();
    s->add_option("--E0", o.E0, "initial size ||v0||_L1 + ||v0||_H4 (<= 0: unit L1 mass)")
        ->capture_default_str();
    s->add_option("--sigma", o.sigma, "Gaussian width")->capture_default_str();
    s->add_option("--seed-rng", o.seed, "seed for --init noise")->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Newton solve for the bifurcating periodic wave");
  solve->add_option("--alpha", o.alpha, "detuning, below 41/30")->required();
  solve->add_option("--mu", o.mu, "distance from onset, in (0, 0.05)")->required();
  solve->add_option("--K", o.K, "Fourier modes (default 32)");
  solve->add_option("--out", o.out, "profile JSON path")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Bloch spectrum over the Brillouin zone as CSV");
  profile_opt(spectrum);
  spectrum->add_option("--n-xi", o.n_xi, "number of Floquet exponents")->capture_default_str();
  spectrum->add_option("--K", o.K, "Bloch truncation (default 16)");
  spectrum->add_option("--out", o.out, "CSV path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "check diffusive spectral stability");
  profile_opt(verify);
  verify->add_option("--n-xi", o.n_xi, "number of Floquet exponents (even, >= 64)")->capture_default_str();
  verify->add_option("--K", o.K, "Bloch truncation (default 16)");
  verify->add_option("--out", o.out, "report JSON path (stdout if omitted)");

  auto* critical = app.add_subcommand("critical", "track the critical eigenvalue near xi = 0");
  profile_opt(critical);
  critical->add_option("--K", o.K, "Bloch truncation (default 16)");
  critical->add_option("--window", o.window, "xi range to track (default: xi1)");
  critical->add_option("--samples", o.samples, "samples per side")->capture_default_str();
  critical->add_option("--out", o.out, "JSON path (stdout if omitted)");

  auto* propagate = app.add_subcommand("propagate", "linear semigroup part norms over time");
  profile_opt(propagate);
  grid_opts(propagate);
  init_opts(propagate);
  propagate->add_option("--part", o.part, "full | Se | Sc_tilde | sp(l,j)")->capture_default_str();
  propagate->add_option("--K", o.K, "Bloch truncation (default N/2 - 1)");
  propagate->add_option("--t-end", o.t_end, "final time")->capture_default_str();
  propagate->add_option("--dt", o.dt, "output spacing");
  propagate->add_option("--out", o.out, "CSV path (stdout if omitted)");

  auto* evolve = app.add_subcommand("evolve", "ETDRK4 evolution of phi + v0");
  profile_opt(evolve);
  grid_opts(evolve);
  init_opts(evolve);
  evolve->add_option("--dt", o.dt, "time step")->capture_default_str();
  evolve->add_option("--t-end", o.t_end, "final time")->capture_default_str();
  evolve->add_option("--stride", o.stride, "steps between snapshots")->capture_default_str();
  evolve->add_flag("--linearized", o.linearized, "evolve the linearized perturbation");
  evolve->add_flag("--no-dealias", o.no_dealias, "disable the 2/3 rule");
  evolve->add_option("--out", o.out, "norm series CSV path (stdout if omitted)");
  evolve->add_option("--snapshots", o.snapshots, "binary snapshot container path");

  auto* phase = app.add_subcommand("phase-decay", "phase extraction and decay-rate fits");
  profile_opt(phase);
  phase->add_option("--snapshots", o.snapshots, "snapshot container from 'evolve'")->required();
  phase->add_option("--window", o.window, "fit window tmin,tmax");
  phase->add_option("--K", o.K, "Bloch truncation (default N/2 - 1)");
  phase->add_option("--out", o.out, "report JSON path (stdout if omitted)");

  auto* damping = app.add_subcommand("damping", "nonlinear damping diagnostic");
  profile_opt(damping);
  damping->add_option("--snapshots", o.snapshots, "snapshot container from 'evolve'")->required();
  damping->add_option("--j", o.j, "derivative order 1..4")->capture_default_str();
  damping->add_option("--out", o.out, "report JSON path (stdout if omitted)");

  auto* config = app.add_subcommand("config", "print default settings as JSON");
  config->add_option("--out", o.out, "JSON path (stdout if omitted)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  // propagate uses a coarser grid and a unit-mass Gaussian unless told otherwise
  CLI::App* sub = app.get_subcommands().front();
  std::string cmd = sub->get_name();
  if ((cmd == "propagate" || cmd == "evolve") && sub->count("--n-per-cell") == 0)
    o.n_per_cell = cmd == "propagate" ? 32 : 64;
  if (cmd == "propagate") {
    if (sub->count("--init") == 0) o.init = "gaussian";
    if (sub->count("--E0") == 0) o.E0 = 0.0;
    if (sub->count("--dt") == 0) o.dt = 1.0;
  }
  try {
    return dispatch(cmd, o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << " (last residual " << e.last_residual << ")\n";
    return 3;
  } catch (const BlowUpError& e) {
    err << "numerical failure: " << e.what() << " (last finite time " << e.last_finite_time << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: bad numeric argument (" << e.what() << ")\n";
    return 2;
  }
}

}  // namespace lle::cli
