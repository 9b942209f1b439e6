#include "lle/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace lle {

PhaseField extract_phase(const Propagator& eig, const WaveProfile& p, const ExtendedField& psi,
                         double t) {
  ExtendedField v = psi - tile_profile(p, psi.m_cells, psi.n);
  CVec g = eig.scalar_from_bloch(eig.projection_coefficients(v));
  PhaseField out;
  out.m_cells = psi.m_cells;
  out.n = psi.n;
  out.period = psi.period;
  out.t = t;
  out.values.resize(g.size());
  double gmax = 0.0, imax = 0.0;
  for (size_t k = 0; k < g.size(); ++k) {
    out.values[k] = g[k].real();
    gmax = std::max(gmax, std::abs(g[k].real()));
    imax = std::max(imax, std::abs(g[k].imag()));
  }
  // roundoff floor for perturbations with no critical content
  double vmax = 0.0;
  for (int k = 0; k < v.size(); ++k) vmax = std::max({vmax, std::abs(v.r[k]), std::abs(v.i[k])});
  if (imax > 1e-8 * gmax && imax > 1e-13 * vmax)
    throw NumericalError("extract_phase: imaginary residue " + std::to_string(imax) +
                         " exceeds 1e-8 of the phase");
  CVec gc(g.size());
  for (size_t k = 0; k < g.size(); ++k) gc[k] = out.values[k];
  CVec gx = spectral_derivative(gc, out.length(), 1);
  for (auto& z : gx)
    if (std::abs(z.real()) >= 0.5)
      throw ModulationTooLargeError("extract_phase: ||gamma_x||_inf >= 1/2");
  return out;
}

ExtendedField shifted_state(const ExtendedField& psi, const PhaseField& gamma) {
  const int P = psi.size();
  if (P % 2) throw ValidationError("shifted_state: barycentric form needs an even point count");
  const double L = psi.length();
  RVec C(P);
  for (int d = 1; d < P; ++d) C[d] = 1.0 / std::tan(std::numbers::pi * d / P);
  ExtendedField out = psi;
  for (int i = 0; i < P; ++i) {
    double b = std::numbers::pi * gamma.values[i] / L;
    if (std::abs(b) < 1e-300) continue;
    double cb = 1.0 / std::tan(b);
    // cot(pi (x_i - gamma_i - x_j)/L) = cot(a - b), a = pi (i - j)/P
    cplx nr = 0.0, ni = 0.0;
    double den = 0.0;
    for (int j = 0; j < P; ++j) {
      int d = ((i - j) % P + P) % P;
      double c = d == 0 ? -cb : (C[d] * cb + 1.0) / (cb - C[d]);
      double w = (j % 2 ? -1.0 : 1.0) * c;
      nr += w * psi.r[j];
      ni += w * psi.i[j];
      den += w;
    }
    out.r[i] = nr / den;
    out.i[i] = ni / den;
  }
  return out;
}

ExtendedField modulated_perturbation(const WaveProfile& p, const ExtendedField& psi,
                                     const PhaseField& gamma) {
  return shifted_state(psi, gamma) - tile_profile(p, psi.m_cells, psi.n);
}

double modulated_residual(const WaveProfile& p, const ExtendedField& psi, const PhaseField& gamma) {
  return l2_norm(modulated_perturbation(p, psi, gamma));
}

namespace {

DecayFit linear_fit(const std::vector<std::pair<double, double>>& series,
                    std::pair<double, double> window, bool loglog) {
  std::vector<double> X, Y;
  for (const auto& [t, v] : series) {
    if (t < window.first || t > window.second) continue;
    if (!(v > 0.0)) throw DomainError("fit_decay: non-positive value in the fit window");
    X.push_back(loglog ? std::log1p(t) : t);
    Y.push_back(std::log(v));
  }
  if (X.size() < 10) throw DomainError("fit_decay: need at least 10 samples in the window");
  const double n = static_cast<double>(X.size());
  double mx = 0, my = 0;
  for (size_t k = 0; k < X.size(); ++k) {
    mx += X[k];
    my += Y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t k = 0; k < X.size(); ++k) {
    sxx += (X[k] - mx) * (X[k] - mx);
    sxy += (X[k] - mx) * (Y[k] - my);
    syy += (Y[k] - my) * (Y[k] - my);
  }
  DecayFit f;
  f.n_samples = static_cast<int>(X.size());
  f.exponent = sxx > 0 ? sxy / sxx : 0.0;
  f.prefactor = std::exp(my - f.exponent * mx);
  double ssr = 0;
  for (size_t k = 0; k < X.size(); ++k) {
    double e = Y[k] - (my + f.exponent * (X[k] - mx));
    ssr += e * e;
  }
  f.r_squared = syy > 0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

}  // namespace

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series,
                   std::pair<double, double> window) {
  return linear_fit(series, window, true);
}

DecayFit fit_exponential(const std::vector<std::pair<double, double>>& series,
                         std::pair<double, double> window) {
  return linear_fit(series, window, false);
}

double initial_size(const ExtendedField& v) { return l1_norm(v) + sobolev_norm(v, 4); }

ExtendedField make_perturbation(const WaveProfile& p, int m_cells, int n, const PerturbationSpec& s) {
  if (!(s.sigma > 0.0)) throw ValidationError("make_perturbation: sigma must be positive");
  ExtendedField f(m_cells, n, p.period);
  const double L = f.length(), dx = f.dx();
  const double x0 = 0.5 * L + s.center_offset * p.period;
  CVec dphi;
  if (s.kind == "translational") {
    dphi = tile_profile(p, m_cells, n).scalar();
    dphi = spectral_derivative(dphi, L, 1);
  } else if (s.kind != "plain") {
    throw ValidationError("make_perturbation: kind must be 'plain' or 'translational'");
  }
  for (int k = 0; k < f.size(); ++k) {
    double x = k * dx;
    double g = std::exp(-(x - x0) * (x - x0) / (2.0 * s.sigma * s.sigma));
    if (dphi.empty()) {
      f.r[k] = g;
    } else {
      f.r[k] = g * dphi[k].real();
      f.i[k] = g * dphi[k].imag();
    }
  }
  double scale = s.E0 > 0.0 ? s.E0 / initial_size(f) : 1.0 / l1_norm(f);
  return scale * f;
}

std::vector<RVec> time_derivative(const std::vector<RVec>& g, double h) {
  const int n = static_cast<int>(g.size());
  if (n < 5) throw SamplingError("time_derivative: need at least 5 samples");
  const int P = static_cast<int>(g[0].size());
  std::vector<RVec> out(n, RVec(P));
  for (int k = 0; k < n; ++k) {
    for (int x = 0; x < P; ++x) {
      double v;
      if (k >= 2 && k <= n - 3) {
        v = -g[k + 2][x] + 8 * g[k + 1][x] - 8 * g[k - 1][x] + g[k - 2][x];
      } else if (k == 0) {
        v = -25 * g[0][x] + 48 * g[1][x] - 36 * g[2][x] + 16 * g[3][x] - 3 * g[4][x];
      } else if (k == 1) {
        v = -3 * g[0][x] - 10 * g[1][x] + 18 * g[2][x] - 6 * g[3][x] + g[4][x];
      } else if (k == n - 2) {
        v = 3 * g[n - 1][x] + 10 * g[n - 2][x] - 18 * g[n - 3][x] + 6 * g[n - 4][x] - g[n - 5][x];
      } else {
        v = 25 * g[n - 1][x] - 48 * g[n - 2][x] + 36 * g[n - 3][x] - 16 * g[n - 4][x] +
            3 * g[n - 5][x];
      }
      out[k][x] = v / (12.0 * h);
    }
  }
  return out;
}

DecayReport analyze_decay(const WaveProfile& p, const Trajectory& tr, const DecayOptions& opt) {
  if (tr.snapshots.size() < 10) throw SamplingError("analyze_decay: need at least 10 snapshots");
  if (tr.linearized) throw ValidationError("analyze_decay: needs a full nonlinear trajectory");
  const double h = tr.snapshot_times[1] - tr.snapshot_times[0];
  for (size_t k = 1; k < tr.snapshot_times.size(); ++k)
    if (std::abs(tr.snapshot_times[k] - tr.snapshot_times[k - 1] - h) > 1e-9 * h)
      throw SamplingError("analyze_decay: snapshots must be uniformly spaced");

  DecayReport rep;
  int K = opt.K < 0 ? tr.n / 2 - 1 : opt.K;
  Xi1Options xo;
  xo.delta1 = opt.delta1;
  rep.xi1 = choose_xi1(p, std::min(K, p.n_modes), xo);
  auto pairs = track_critical(p, rep.xi1, 16, std::min(K, p.n_modes));
  rep.d_fit = critical_curve(pairs, rep.xi1 / 4).d_fit;

  PropagatorConfig pc;
  pc.K = K;
  pc.cutoffs.xi1 = rep.xi1;
  pc.support_only = true;
  Propagator prop(p, tr.m_cells, tr.n, pc);

  const double L = tr.m_cells * tr.period, dx = tr.period / tr.n;
  ExtendedField phi = tile_profile(p, tr.m_cells, tr.n);
  rep.E0 = initial_size(tr.snapshots[0] - phi);
  const double t_end = tr.snapshot_times.back();
  double t_max = std::min(t_end, 0.05 * L * L / rep.d_fit);
  if (opt.t_max_cap > 0.0) t_max = std::min(t_max, opt.t_max_cap);
  rep.fit_window = {opt.t_min, t_max};

  const size_t ns = tr.snapshots.size();
  std::vector<RVec> gam(ns);
  for (size_t k = 0; k < ns; ++k)
    gam[k] = extract_phase(prop, p, tr.snapshots[k], tr.snapshot_times[k]).values;
  std::vector<RVec> gt = time_derivative(gam, h);

  for (size_t k = 0; k < ns; ++k) {
    double t = tr.snapshot_times[k];
    PhaseField g{tr.m_cells, tr.n, tr.period, t, gam[k]};
    CVec gc(gam[k].begin(), gam[k].end()), gtc(gt[k].begin(), gt[k].end());
    CVec gx = spectral_derivative(gc, L, 1);
    for (auto& z : gx) rep.max_gamma_x = std::max(rep.max_gamma_x, std::abs(z.real()));
    double unmod = l2_norm(tr.snapshots[k] - phi);
    double mod = modulated_residual(p, tr.snapshots[k], g);
    rep.series["unmod_L2"].emplace_back(t, unmod);
    rep.series["gamma_L2"].emplace_back(t, l2_norm(gc, dx));
    rep.series["mod_L2"].emplace_back(t, mod);
    rep.series["gamma_x_H3"].emplace_back(t, sobolev_norm(gx, L, 3));
    rep.series["gamma_t_H2"].emplace_back(t, sobolev_norm(gtc, L, 2));
    if (t >= opt.t_min && t <= t_max && mod > unmod) rep.ordering_holds = false;
  }
  for (const char* tag : kDecayTags) {
    DecayFit f = fit_decay(rep.series[tag], rep.fit_window);
    rep.fits[tag] = f;
    rep.confirmed[tag] = f.r_squared >= 0.9;
  }
  return rep;
}

namespace {

// <J M[phi] w, w> for the real 2-vector field w (componentwise real parts).
double jm_form(const CVec& phi, const ExtendedField& w) {
  double acc = 0.0;
  for (int k = 0; k < w.size(); ++k) {
    double pr = phi[k].real(), pi = phi[k].imag();
    double m11 = -4 * pr * pi, m12 = 2 * (pr * pr - pi * pi), m22 = 4 * pr * pi;
    double a = w.r[k].real(), b = w.i[k].real();
    // J M = [[-m12, -m22], [m11, m12]]
    double ja = -m12 * a - m22 * b, jb = m11 * a + m12 * b;
    acc += a * ja + b * jb;
  }
  return acc * w.dx();
}

double sq(double x) { return x * x; }

}  // namespace

DampingReport damping_report(const WaveProfile& p, const Trajectory& tr, int j) {
  if (j < 1 || j > 4) throw ValidationError("damping_report: j must be in 1..4");
  if (tr.snapshots.size() < 50) throw SamplingError("damping_report: need at least 50 snapshots");
  DampingReport rep;
  rep.j = j;
  ExtendedField phi = tile_profile(p, tr.m_cells, tr.n);
  CVec phis = phi.scalar();
  const double beta = p.params.beta;
  for (size_t k = 0; k < tr.snapshots.size(); ++k) {
    ExtendedField v = tr.linearized ? tr.snapshots[k] : tr.snapshots[k] - phi;
    ExtendedField dj = spectral_derivative(v, j), dj1 = spectral_derivative(v, j - 1);
    double e = sq(l2_norm(dj));
    rep.times.push_back(tr.snapshot_times[k]);
    rep.deriv_sq.push_back(e);
    rep.l2_sq.push_back(sq(l2_norm(v)));
    rep.energy.push_back(e - jm_form(phis, dj1) / (2.0 * beta));
  }
  // int_0^t e^{-(t-s)} ||v(s)||^2 ds, trapezoid per step on the dense norm series when present,
  // otherwise on the snapshots
  RVec dense_t = tr.times, dense_sq;
  if (dense_t.empty()) {
    dense_t = rep.times;
    dense_sq = rep.l2_sq;
  } else {
    for (const auto& nr : tr.norm_series) dense_sq.push_back(sq(nr[0]));
  }
  RVec acc(dense_t.size(), 0.0);
  for (size_t k = 1; k < dense_t.size(); ++k) {
    double hstep = dense_t[k] - dense_t[k - 1], decay = std::exp(-hstep);
    acc[k] = decay * acc[k - 1] + 0.5 * hstep * (decay * dense_sq[k - 1] + dense_sq[k]);
  }
  size_t pos = 0;
  for (double t : rep.times) {
    while (pos + 1 < dense_t.size() && dense_t[pos] < t - 1e-12) ++pos;
    rep.integral.push_back(acc[pos]);
  }

  const size_t n = rep.times.size();
  rep.K = 0.0;
  for (size_t k = 0; k < n; ++k)
    if (rep.l2_sq[k] > 0.0)
      rep.K = std::max(rep.K, (rep.deriv_sq[k] - 2.0 * rep.energy[k]) / rep.l2_sq[k]);
  rep.C = 0.0;
  for (size_t k = 0; k < n; ++k) {
    if (rep.integral[k] <= 0.0) continue;
    double slack = rep.deriv_sq[k] - 2.0 * std::exp(-rep.times[k]) * rep.energy[0] -
                   rep.K * rep.l2_sq[k];
    rep.C = std::max(rep.C, slack / (2.0 * rep.integral[k]));
  }
  const double margin = 1e-6, ceiling = 1e6;
  double Ku = rep.K * (1 + margin), Cu = rep.C * (1 + margin);
  rep.control_ok = std::isfinite(rep.K) && rep.K <= ceiling;
  rep.integrated_ok = std::isfinite(rep.C) && rep.C <= ceiling;
  for (size_t k = 0; k < n; ++k) {
    double tol = 1e-12 * std::max(rep.deriv_sq[k], 1e-300);
    if (rep.deriv_sq[k] > 2.0 * rep.energy[k] + Ku * rep.l2_sq[k] + tol) rep.control_ok = false;
    double bound = 2.0 * std::exp(-rep.times[k]) * rep.energy[0] + Ku * rep.l2_sq[k] +
                   2.0 * Cu * rep.integral[k];
    if (rep.deriv_sq[k] > bound + tol) rep.integrated_ok = false;
  }
  rep.verdict = rep.control_ok && rep.integrated_ok;
  return rep;
}

MeanValueReport mean_value_check(const WaveProfile& p, const ExtendedField& psi,
                                 const PhaseField& gamma) {
  const double L = psi.length();
  CVec gc(gamma.values.begin(), gamma.values.end());
  for (auto& z : spectral_derivative(gc, L, 1))
    if (std::abs(z.real()) >= 0.5)
      throw ModulationTooLargeError("mean_value_check: ||gamma_x||_inf >= 1/2");
  MeanValueReport r;
  ExtendedField phi = tile_profile(p, psi.m_cells, psi.n);
  r.lhs = l2_norm(shifted_state(psi, gamma) - psi);
  CVec dphi = spectral_derivative(phi.scalar(), L, 1);
  double dmax = 0.0;
  for (auto& z : dphi) dmax = std::max(dmax, std::abs(z));
  r.rhs = (dmax + sobolev_norm(psi - phi, 2)) * l2_norm(gc, psi.dx());
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.ok = r.ratio <= 1.0 + 1e-6;
  return r;
}

}  // namespace lle
