#include "lle/dynamics.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "lle/errors.hpp"

namespace lle {

void SimConfig::validate() const {
  if (m_cells < 1 || n_per_cell < 8 || n_per_cell % 2)
    throw ValidationError("SimConfig: need M >= 1 and even N >= 8");
  if (!(dt > 0.0)) throw ValidationError("SimConfig: dt must be positive");
  if (!(t_end >= dt)) throw ValidationError("SimConfig: t_end must be at least dt");
  if (snapshot_stride < 1) throw ValidationError("SimConfig: snapshot_stride must be >= 1");
  if (contour_points < 4) throw ValidationError("SimConfig: contour_points must be >= 4");
}

ExtendedField tile_profile(const WaveProfile& p, int m_cells, int n) {
  CVec cell = p.sample(n);
  CVec all(m_cells * n);
  for (int m = 0; m < m_cells; ++m)
    for (int j = 0; j < n; ++j) all[m * n + j] = cell[j];
  return ExtendedField::from_scalar(all, m_cells, n, p.period);
}

ExtendedField lle_rhs(const WaveProfile& p, const ExtendedField& psi) {
  const auto& pr = p.params;
  CVec s = psi.scalar();
  CVec s2 = spectral_derivative(s, psi.length(), 2);
  CVec out(s.size());
  for (size_t k = 0; k < s.size(); ++k)
    out[k] = cplx(0.0, -pr.beta) * s2[k] - cplx(1.0, pr.alpha) * s[k] +
             cplx(0.0, 1.0) * std::norm(s[k]) * s[k] + pr.F;
  return ExtendedField::from_scalar(out, psi.m_cells, psi.n, psi.period);
}

ExtendedField apply_linearization(const WaveProfile& p, const ExtendedField& v) {
  const auto& pr = p.params;
  CVec phi = tile_profile(p, v.m_cells, v.n).scalar();
  CVec s = v.scalar();
  CVec s2 = spectral_derivative(s, v.length(), 2);
  CVec out(s.size());
  for (size_t k = 0; k < s.size(); ++k)
    out[k] = cplx(0.0, -pr.beta) * s2[k] - cplx(1.0, pr.alpha) * s[k] +
             cplx(0.0, 1.0) * (2.0 * std::norm(phi[k]) * s[k] + phi[k] * phi[k] * std::conj(s[k]));
  return ExtendedField::from_scalar(out, v.m_cells, v.n, v.period);
}

namespace {

struct EtdCoeffs {
  CVec E, E2, Q, f1, f2, f3;
};

EtdCoeffs etd_coeffs(const CVec& Lsym, double dt, int mc) {
  const size_t P = Lsym.size();
  EtdCoeffs c{CVec(P), CVec(P), CVec(P), CVec(P), CVec(P), CVec(P)};
  CVec roots(mc);
  for (int j = 0; j < mc; ++j)
    roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / mc);
  for (size_t k = 0; k < P; ++k) {
    cplx z = dt * Lsym[k];
    c.E[k] = std::exp(z);
    c.E2[k] = std::exp(0.5 * z);
    cplx q = 0, a = 0, b = 0, d = 0;
    for (int j = 0; j < mc; ++j) {
      cplx lr = z + roots[j];
      cplx e = std::exp(lr), lr3 = lr * lr * lr;
      q += (std::exp(0.5 * lr) - 1.0) / lr;
      a += (-4.0 - lr + e * (4.0 - 3.0 * lr + lr * lr)) / lr3;
      b += (2.0 + lr + e * (-2.0 + lr)) / lr3;
      d += (-4.0 - 3.0 * lr - lr * lr + e * (4.0 - lr)) / lr3;
    }
    c.Q[k] = dt * q / double(mc);
    c.f1[k] = dt * a / double(mc);
    c.f2[k] = dt * b / double(mc);
    c.f3[k] = dt * d / double(mc);
  }
  return c;
}

}  // namespace

Trajectory run_lle(const WaveProfile& p, const ExtendedField& v0, const SimConfig& cfg) {
  cfg.validate();
  v0.validate();
  if (v0.m_cells != cfg.m_cells || v0.n != cfg.n_per_cell ||
      std::abs(v0.period - p.period) > 1e-12 * p.period)
    throw ValidationError("run_lle: v0 grid does not match the configuration");
  const int P = v0.size();
  const double L = v0.length();
  const auto& pr = p.params;
  RVec kap = wavenumbers(P, L);
  CVec Lsym(P);
  double maxsym = 0.0;
  for (int k = 0; k < P; ++k) {
    Lsym[k] = cplx(-1.0, pr.beta * kap[k] * kap[k] - pr.alpha);
    maxsym = std::max(maxsym, std::abs(Lsym[k]));
  }
  if (cfg.dt * maxsym > 50.0) {
    std::string msg = "run_lle: dt * max|symbol| = " + std::to_string(cfg.dt * maxsym) + " > 50";
    if (cfg.strict) throw ValidationError(msg);
    std::cerr << "warning: " << msg << "\n";
  }
  EtdCoeffs co = etd_coeffs(Lsym, cfg.dt, cfg.contour_points);

  CVec phi = tile_profile(p, cfg.m_cells, cfg.n_per_cell).scalar();
  CVec phihat = fft(phi);
  const int cut = P / 3;
  auto nonlinear = [&](const CVec& vhat) {
    CVec s = ifft(vhat);
    for (int k = 0; k < P; ++k) {
      cplx v = s[k];
      cplx out = 0.0;
      if (cfg.linearized) {
        out = cplx(0.0, 1.0) * (2.0 * std::norm(phi[k]) * v + phi[k] * phi[k] * std::conj(v));
      } else {
        if (cfg.cubic) out += cplx(0.0, 1.0) * std::norm(v) * v;
        if (cfg.forcing) out += pr.F;
      }
      s[k] = out;
    }
    CVec S = fft(s);
    if (cfg.dealias)
      for (int k = 0; k < P; ++k)
        if (std::abs(signed_index(k, P)) > cut) S[k] = 0.0;
    return S;
  };

  CVec state = v0.scalar();
  if (!cfg.linearized)
    for (int k = 0; k < P; ++k) state[k] += phi[k];
  CVec vh = fft(state);

  Trajectory tr;
  tr.m_cells = cfg.m_cells;
  tr.n = cfg.n_per_cell;
  tr.period = p.period;
  tr.linearized = cfg.linearized;
  auto record = [&](double t) {
    std::array<double, 5> nr{};
    for (int k = 0; k < P; ++k) {
      cplx d = cfg.linearized ? vh[k] : vh[k] - phihat[k];
      double a2 = std::norm(d), k2 = kap[k] * kap[k], w = 1.0;
      for (int j = 0; j < 5; ++j) {
        nr[j] += w * a2;
        w *= k2;
      }
    }
    for (auto& v : nr) v = std::sqrt(v * L / (double(P) * P));
    if (!std::isfinite(nr[0]) || nr[0] > 1e8)
      throw BlowUpError("run_lle: state blew up near t = " + std::to_string(t),
                        tr.times.empty() ? 0.0 : tr.times.back());
    tr.times.push_back(t);
    tr.norm_series.push_back(nr);
  };
  auto snapshot = [&](double t) {
    tr.snapshot_times.push_back(t);
    tr.snapshots.push_back(ExtendedField::from_scalar(ifft(vh), cfg.m_cells, cfg.n_per_cell, p.period));
  };
  record(0.0);
  snapshot(0.0);
  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  CVec a(P), b(P), c(P);
  for (long n = 1; n <= nsteps; ++n) {
    CVec Nv = nonlinear(vh);
    for (int k = 0; k < P; ++k) a[k] = co.E2[k] * vh[k] + co.Q[k] * Nv[k];
    CVec Na = nonlinear(a);
    for (int k = 0; k < P; ++k) b[k] = co.E2[k] * vh[k] + co.Q[k] * Na[k];
    CVec Nb = nonlinear(b);
    for (int k = 0; k < P; ++k) c[k] = co.E2[k] * a[k] + co.Q[k] * (2.0 * Nb[k] - Nv[k]);
    CVec Nc = nonlinear(c);
    for (int k = 0; k < P; ++k)
      vh[k] = co.E[k] * vh[k] + Nv[k] * co.f1[k] + 2.0 * (Na[k] + Nb[k]) * co.f2[k] + Nc[k] * co.f3[k];
    double t = n * cfg.dt;
    record(t);
    if (n % cfg.snapshot_stride == 0) snapshot(t);
  }
  return tr;
}

namespace {

cplx quad_part(cplx v, cplx phi) {
  double vr = v.real(), vi = v.imag(), pr = phi.real(), pi = phi.imag();
  return cplx((3 * vr * vr + vi * vi) * pr + 2 * vr * vi * pi,
              2 * vr * vi * pr + (vr * vr + 3 * vi * vi) * pi);
}

}  // namespace

ExtendedField unmod_nonlinearity(const WaveProfile& p, const ExtendedField& v) {
  CVec phi = tile_profile(p, v.m_cells, v.n).scalar();
  CVec s = v.scalar();
  CVec out(s.size());
  for (size_t k = 0; k < s.size(); ++k)
    out[k] = cplx(0.0, 1.0) * (quad_part(s[k], phi[k]) + std::norm(s[k]) * s[k]);
  return ExtendedField::from_scalar(out, v.m_cells, v.n, v.period);
}

ModNonlinearity mod_nonlinearity(const WaveProfile& p, const ExtendedField& v,
                                 const PhaseField& gamma, const PhaseField& gamma_t) {
  const int P = v.size();
  if (static_cast<int>(gamma.values.size()) != P || static_cast<int>(gamma_t.values.size()) != P)
    throw ValidationError("mod_nonlinearity: phase grid differs from field grid");
  const double L = v.length();
  CVec g(gamma.values.begin(), gamma.values.end());
  CVec gx = spectral_derivative(g, L, 1), gxx = spectral_derivative(g, L, 2);
  double gmax = 0.0;
  for (auto& z : gx) gmax = std::max(gmax, std::abs(z.real()));
  if (gmax >= 0.5) throw ModulationTooLargeError("mod_nonlinearity: ||gamma_x||_inf >= 1/2");
  CVec phi = tile_profile(p, v.m_cells, v.n).scalar();
  CVec dphi = spectral_derivative(phi, L, 1);
  CVec s = v.scalar();
  CVec sx = spectral_derivative(s, L, 1);
  const double be = p.params.beta;
  CVec Q(P), R(P);
  const cplx J(0.0, 1.0);
  for (int k = 0; k < P; ++k) {
    double a = gx[k].real(), aa = gxx[k].real();
    Q[k] = (1.0 - a) * J * (quad_part(s[k], phi[k]) + std::norm(s[k]) * s[k]);
    R[k] = -gamma_t.values[k] * s[k] -
           be * J * (aa * s[k] + 2.0 * a * sx[k] + a * a / (1.0 - a) * (dphi[k] + sx[k]));
  }
  CVec Rx = spectral_derivative(R, L, 1);
  CVec Nn(P);
  for (int k = 0; k < P; ++k) Nn[k] = Q[k] + Rx[k];
  ModNonlinearity out{ExtendedField::from_scalar(Q, v.m_cells, v.n, v.period),
                      ExtendedField::from_scalar(R, v.m_cells, v.n, v.period),
                      ExtendedField::from_scalar(Nn, v.m_cells, v.n, v.period)};
  return out;
}

}  // namespace lle
