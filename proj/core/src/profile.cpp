#include "lle/profile.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lle/errors.hpp"

namespace lle {

void LLEParams::validate() const {
  if (!(F > 0.0)) throw DomainError("forcing F must be positive");
  if (beta == 0.0) throw DomainError("dispersion beta must be nonzero");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(F))
    throw DomainError("parameters must be finite");
}

double WaveProfile::wavenumber() const { return 2.0 * std::numbers::pi / period; }

CVec WaveProfile::sample(int n, int order) const {
  CVec c(n);
  double q = wavenumber();
  for (int l = -n_modes; l <= n_modes; ++l) {
    cplx v = coeff(l);
    if (order > 0) v *= std::pow(cplx(0.0, q * l), order);
    c[((l % n) + n) % n] += v;
  }
  CVec out(n);
  fft_backward(c.data(), out.data(), n);
  return out;
}

CellField WaveProfile::cell(int n, int order) const {
  return CellField::from_scalar(sample(n, order), period);
}

double WaveProfile::first_harmonic_amplitude() const { return 2.0 * std::abs(coeff(1)); }

double WaveProfile::max_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

bool WaveProfile::resolved(double rel) const {
  double tail = std::max(std::abs(coeff(n_modes)), std::abs(coeff(-n_modes)));
  return tail <= rel * max_coeff();
}

std::vector<cplx> constant_states(const LLEParams& params) {
  params.validate();
  const double a = params.alpha, F2 = params.F * params.F;
  // rho^3 - 2 a rho^2 + (1 + a^2) rho - F^2 = 0
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(0, 0) = 2.0 * a;
  comp(0, 1) = -(1.0 + a * a);
  comp(0, 2) = F2;
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
  auto p = [&](double r) { return r * (1.0 + (a - r) * (a - r)) - F2; };
  auto dp = [&](double r) { return 1.0 + (a - r) * (a - r) - 2.0 * r * (a - r); };
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    cplx z = es.eigenvalues()(k);
    double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) > 1e-6 * scale) continue;
    double r = z.real();
    for (int it = 0; it < 50; ++it) {
      double d = dp(r);
      if (d == 0.0) break;
      double step = p(r) / d;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    bool dup = false;
    for (double q : roots)
      if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(r))) dup = true;
    if (!dup) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<cplx> out;
  for (double r : roots) out.push_back(params.F / cplx(1.0, a - r));
  return out;
}

WaveProfile constant_profile(const LLEParams& params, cplx phi_star, double period, int n_modes) {
  params.validate();
  WaveProfile p;
  p.params = params;
  p.period = period;
  p.n_modes = n_modes;
  p.coeffs.assign(2 * n_modes + 1, cplx{});
  p.coeffs[n_modes] = phi_star;
  p.even = true;
  p.residual_norm = profile_residual(p);
  return p;
}

WaveProfile bifurcation_seed(double alpha, double mu, const SeedOptions& opt) {
  if (!(alpha < 41.0 / 30.0))
    throw DomainError("bifurcation_seed: alpha must be below 41/30 (got " + std::to_string(alpha) +
                      ")");
  if (!(mu > 0.0) || !(mu < opt.mu_cap))
    throw DomainError("bifurcation_seed: mu must lie in (0, " + std::to_string(opt.mu_cap) + ")");
  if (opt.n_modes < 2) throw DomainError("bifurcation_seed: need at least 2 modes");
  const double F1sq = (1.0 - alpha) * (1.0 - alpha) + 1.0;
  const double F1 = std::sqrt(F1sq);
  WaveProfile p;
  p.params = {alpha, -1.0, std::sqrt(F1sq + mu)};
  p.period = 2.0 * std::numbers::pi / std::sqrt(2.0 - alpha);
  p.n_modes = opt.n_modes;
  p.coeffs.assign(2 * opt.n_modes + 1, cplx{});
  const cplx phi_star = F1 / cplx(1.0, alpha - 1.0);
  const cplx c = 3.0 * cplx(alpha, 2.0 - alpha) / (F1 * std::sqrt(41.0 - 30.0 * alpha));
  p.coeffs[opt.n_modes] = phi_star;
  p.coeffs[opt.n_modes + 1] = 0.5 * c * std::sqrt(mu);
  p.coeffs[opt.n_modes - 1] = 0.5 * c * std::sqrt(mu);
  p.even = true;
  p.residual_norm = profile_residual(p);
  return p;
}

namespace {

// Grid values of u, w, u'', w'' from cosine coefficients a_l, b_l (l = 0..K).
struct EvenState {
  CVec u, w, u2, w2;
};

EvenState eval_even(const Eigen::VectorXd& x, int K, int n, double q) {
  CVec cu(n), cw(n), cu2(n), cw2(n);
  for (int l = -K; l <= K; ++l) {
    int s = ((l % n) + n) % n;
    double a = x(std::abs(l)), b = x(K + 1 + std::abs(l));
    double k2 = (q * l) * (q * l);
    cu[s] += a;
    cw[s] += b;
    cu2[s] += -k2 * a;
    cw2[s] += -k2 * b;
  }
  EvenState st{CVec(n), CVec(n), CVec(n), CVec(n)};
  fft_backward(cu.data(), st.u.data(), n);
  fft_backward(cw.data(), st.w.data(), n);
  fft_backward(cu2.data(), st.u2.data(), n);
  fft_backward(cw2.data(), st.w2.data(), n);
  return st;
}

// Real and imaginary parts of the profile residual on the grid.
void residual_parts(const EvenState& st, const LLEParams& pr, RVec& R, RVec& I) {
  int n = static_cast<int>(st.u.size());
  R.assign(n, 0.0);
  I.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double u = st.u[j].real(), w = st.w[j].real();
    double s = u * u + w * w;
    R[j] = -pr.beta * st.w2[j].real() + u - pr.alpha * w + s * w - pr.F;
    I[j] = pr.beta * st.u2[j].real() + pr.alpha * u + w - s * u;
  }
}

double grid_norm(const RVec& R, const RVec& I, double T) {
  double acc = 0.0;
  for (size_t j = 0; j < R.size(); ++j) acc += R[j] * R[j] + I[j] * I[j];
  return std::sqrt(acc * T / R.size());
}

// Cosine-projected residual: the l = 0..K coefficients of R and I.
Eigen::VectorXd project(const RVec& R, const RVec& I, int K) {
  int n = static_cast<int>(R.size());
  CVec cr(R.begin(), R.end()), ci(I.begin(), I.end());
  CVec Fr = fft(cr), Fi = fft(ci);
  Eigen::VectorXd out(2 * (K + 1));
  for (int l = 0; l <= K; ++l) {
    out(l) = Fr[l].real() / n;
    out(K + 1 + l) = Fi[l].real() / n;
  }
  return out;
}

}  // namespace

double profile_residual(const WaveProfile& p, int grid_factor) {
  int n = std::max(8, grid_factor * p.n_modes);
  if (n % 2) ++n;
  CVec phi = p.sample(n), phi2 = p.sample(n, 2);
  const auto& pr = p.params;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    cplx r = cplx(0.0, pr.beta) * phi2[j] + cplx(1.0, pr.alpha) * phi[j] -
             cplx(0.0, 1.0) * std::norm(phi[j]) * phi[j] - pr.F;
    acc += std::norm(r);
  }
  return std::sqrt(acc * p.period / n);
}

WaveProfile solve_profile(const WaveProfile& seed, const NewtonOptions& opt) {
  seed.params.validate();
  const int K = seed.n_modes;
  if (K < 1) throw DomainError("solve_profile: need n_modes >= 1");
  for (int l = 1; l <= K; ++l)
    if (std::abs(seed.coeff(l) - seed.coeff(-l)) > 1e-12 * std::max(1.0, seed.max_coeff()))
      throw DomainError("solve_profile: seed is not even (cosine subspace)");
  int n = std::max(8, opt.grid_factor * K);
  if (n % 2) ++n;
  const double q = seed.wavenumber(), T = seed.period;
  const auto& pr = seed.params;

  // even real u, w: u_hat_l = Re(phi_hat_l) paired with the conjugate partner
  Eigen::VectorXd x(2 * (K + 1));
  for (int l = 0; l <= K; ++l) {
    cplx pl = seed.coeff(l), pm = seed.coeff(-l);
    // u = (phi + conj phi)/2 -> u_hat_l = (phi_l + conj(phi_{-l}))/2
    x(l) = (0.5 * (pl + std::conj(pm))).real();
    x(K + 1 + l) = (0.5 * (pl - std::conj(pm)) / cplx(0.0, 1.0)).real();
  }

  RVec R, I;
  EvenState st = eval_even(x, K, n, q);
  residual_parts(st, pr, R, I);
  double res = grid_norm(R, I, T);
  std::vector<double> history;

  int it = 0;
  while (res > opt.tol) {
    if (it >= opt.max_iter)
      throw ConvergenceError("solve_profile: no convergence after " + std::to_string(it) +
                                 " Newton steps (residual " + std::to_string(res) + ")",
                             res);
    ++it;
    const int D = 2 * (K + 1);
    Eigen::MatrixXd Jm(D, D);
    RVec dR(n), dI(n);
    for (int comp = 0; comp < 2; ++comp) {
      for (int m = 0; m <= K; ++m) {
        double scale = (m == 0) ? 1.0 : 2.0;
        double k2 = (q * m) * (q * m);
        for (int j = 0; j < n; ++j) {
          double e = scale * std::cos(2.0 * std::numbers::pi * m * j / n);
          double du = comp == 0 ? e : 0.0, dw = comp == 1 ? e : 0.0;
          double du2 = -k2 * du, dw2 = -k2 * dw;
          double u = st.u[j].real(), w = st.w[j].real();
          double s = u * u + w * w, ds = 2.0 * (u * du + w * dw);
          dR[j] = -pr.beta * dw2 + du - pr.alpha * dw + ds * w + s * dw;
          dI[j] = pr.beta * du2 + pr.alpha * du + dw - ds * u - s * du;
        }
        Jm.col(comp * (K + 1) + m) = project(dR, dI, K);
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Jm);
    Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
    if (diag.minCoeff() <= 1e-14 * diag.maxCoeff())
      throw NumericalError("solve_profile: Jacobian numerically singular");
    Eigen::VectorXd step = qr.solve(-project(R, I, K));

    double lam = 1.0, trial_res = 0.0;
    Eigen::VectorXd trial;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      trial = x + lam * step;
      EvenState ts = eval_even(trial, K, n, q);
      RVec tR, tI;
      residual_parts(ts, pr, tR, tI);
      trial_res = grid_norm(tR, tI, T);
      if (std::isfinite(trial_res) && trial_res < res) {
        accepted = true;
        x = trial;
        st = ts;
        R = tR;
        I = tI;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted)
      throw ConvergenceError(
          "solve_profile: line search failed to reduce residual " + std::to_string(res), res);
    res = trial_res;
    history.push_back(res);
  }

  WaveProfile out = seed;
  out.coeffs.assign(2 * K + 1, cplx{});
  for (int l = -K; l <= K; ++l)
    out.coeffs[l + K] = cplx(x(std::abs(l)), x(K + 1 + std::abs(l)));
  out.even = true;
  out.residual_norm = profile_residual(out, opt.grid_factor);
  out.newton_history = history;
  return out;
}

WaveProfile shift_profile(const WaveProfile& p, double s) {
  WaveProfile out = p;
  double q = p.wavenumber();
  for (int l = -p.n_modes; l <= p.n_modes; ++l)
    out.coeffs[l + p.n_modes] = p.coeff(l) * std::polar(1.0, q * l * s);
  out.even = false;
  out.residual_norm = profile_residual(out);
  out.newton_history.clear();
  return out;
}

WaveProfile with_modes(const WaveProfile& p, int n_modes) {
  WaveProfile out = p;
  out.n_modes = n_modes;
  out.coeffs.assign(2 * n_modes + 1, cplx{});
  for (int l = -std::min(n_modes, p.n_modes); l <= std::min(n_modes, p.n_modes); ++l)
    out.coeffs[l + n_modes] = p.coeff(l);
  out.newton_history.clear();
  return out;
}

}  // namespace lle
