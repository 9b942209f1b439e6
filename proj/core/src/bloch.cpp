#include "lle/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lle/parallel.hpp"

namespace lle {

int bloch_dim(int K) { return 2 * (2 * K + 1); }

CVecE cell_to_vec(const CellField& f, int K) {
  if (2 * K + 1 > f.n) throw ResolutionError("cell_to_vec: K exceeds cell resolution");
  CVec cr = f.coeffs_r(), ci = f.coeffs_i();
  const int n = 2 * K + 1;
  CVecE v(2 * n);
  for (int l = -K; l <= K; ++l) {
    int s = ((l % f.n) + f.n) % f.n;
    v(l + K) = cr[s];
    v(n + l + K) = ci[s];
  }
  return v;
}

CellField vec_to_cell(const CVecE& v, int n_points, double period) {
  const int n = static_cast<int>(v.size()) / 2, K = (n - 1) / 2;
  CVec cr(n_points), ci(n_points);
  for (int l = -K; l <= K; ++l) {
    int s = ((l % n_points) + n_points) % n_points;
    cr[s] += v(l + K);
    ci[s] += v(n + l + K);
  }
  return CellField::from_coeffs(cr, ci, period);
}

cplx vec_inner(const CVecE& a, const CVecE& b, double period) { return period * a.dot(b); }

double vec_norm(const CVecE& a, double period) { return std::sqrt(period) * a.norm(); }

CVecE profile_vec(const WaveProfile& p, int K, int order) {
  const int n = 2 * K + 1;
  const double q = p.wavenumber();
  CVecE v(2 * n);
  for (int l = -K; l <= K; ++l) {
    cplx d = std::pow(cplx(0.0, q * l), order);
    cplx pl = p.coeff(l) * d;
    cplx pm = std::conj(p.coeff(-l) * std::pow(cplx(0.0, -q * l), order));
    v(l + K) = 0.5 * (pl + pm);
    v(n + l + K) = (pl - pm) / cplx(0.0, 2.0);
  }
  return v;
}

MultiplierTables multiplier_tables(const WaveProfile& p, int K) {
  if (K > p.n_modes)
    throw ResolutionError("assemble_bloch: K = " + std::to_string(K) +
                          " exceeds profile resolution " + std::to_string(p.n_modes));
  int ng = 2 * (2 * p.n_modes + 2 * K) + 2;
  CVec phi = p.sample(ng);
  CVec a(ng), b(ng), c(ng);
  for (int j = 0; j < ng; ++j) {
    double u = phi[j].real(), w = phi[j].imag();
    a[j] = 3.0 * u * u + w * w;
    b[j] = 2.0 * u * w;
    c[j] = u * u + 3.0 * w * w;
  }
  CVec A = fft(a), B = fft(b), C = fft(c);
  MultiplierTables t;
  t.K = K;
  t.c11.resize(4 * K + 1);
  t.c12.resize(4 * K + 1);
  t.c22.resize(4 * K + 1);
  for (int d = -2 * K; d <= 2 * K; ++d) {
    int s = ((d % ng) + ng) % ng;
    t.c11[d + 2 * K] = A[s] / static_cast<double>(ng);
    t.c12[d + 2 * K] = B[s] / static_cast<double>(ng);
    t.c22[d + 2 * K] = C[s] / static_cast<double>(ng);
  }
  return t;
}

BlochOperatorMatrix assemble_bloch(const WaveProfile& p, const MultiplierTables& tab, double xi) {
  const int K = tab.K, n = 2 * K + 1;
  const double q = p.wavenumber(), al = p.params.alpha, be = p.params.beta;
  BlochOperatorMatrix m;
  m.xi = xi;
  m.K = K;
  m.period = p.period;
  m.entries = CMat::Zero(2 * n, 2 * n);
  // A = -I + J L with J = [[0,-1],[1,0]]: rows are (-L21, -L22 ; L11, L12)
  for (int a = 0; a < n; ++a) {
    double k = xi + q * (a - K);
    double diag = be * k * k - al;
    for (int b = 0; b < n; ++b) {
      int d = a - b + 2 * K;
      cplx t11 = tab.c11[d], t12 = tab.c12[d], t22 = tab.c22[d];
      m.entries(a, b) = -t12;
      m.entries(a, n + b) = -t22 - (a == b ? diag : 0.0);
      m.entries(n + a, b) = t11 + (a == b ? diag : 0.0);
      m.entries(n + a, n + b) = t12;
    }
  }
  m.entries -= CMat::Identity(2 * n, 2 * n);
  return m;
}

BlochOperatorMatrix assemble_bloch(const WaveProfile& p, double xi, int K) {
  double edge = std::numbers::pi / p.period;
  if (std::abs(xi) > edge * (1.0 + 1e-12))
    throw DomainError("assemble_bloch: |xi| must not exceed pi/T");
  return assemble_bloch(p, multiplier_tables(p, K), xi);
}

namespace {

bool by_real_desc(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

SpectrumSlice spectrum_slice(const BlochOperatorMatrix& m, bool want_vector) {
  Eigen::ComplexEigenSolver<CMat> es(m.entries, want_vector);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectrum_slice: eigensolver did not converge at xi = " +
                         std::to_string(m.xi) + " (size " + std::to_string(m.entries.rows()) +
                         ")");
  SpectrumSlice s;
  s.xi = m.xi;
  const int D = static_cast<int>(m.entries.rows());
  std::vector<int> idx(D);
  for (int k = 0; k < D; ++k) idx[k] = k;
  const auto& ev = es.eigenvalues();
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return by_real_desc(ev(a), ev(b)); });
  for (int k : idx) s.eigenvalues.push_back(ev(k));
  if (want_vector) s.leading_eigenvector = es.eigenvectors().col(idx[0]);
  return s;
}

std::pair<cplx, cplx> constant_state_dispersion(const LLEParams& params, cplx phi_star, double k) {
  params.validate();
  cplx res = cplx(1.0, params.alpha) * phi_star -
             cplx(0.0, 1.0) * std::norm(phi_star) * phi_star - params.F;
  if (std::abs(res) > 1e-10 * std::max(1.0, params.F))
    throw DomainError("constant_state_dispersion: phi* does not solve the constant-state equation");
  double u = phi_star.real(), w = phi_star.imag();
  double base = params.beta * k * k - params.alpha;
  double L11 = base + 3 * u * u + w * w, L12 = 2 * u * w, L22 = base + u * u + 3 * w * w;
  double det = L11 * L22 - L12 * L12;
  cplx root = std::sqrt(cplx(-det, 0.0));
  return {-1.0 + root, -1.0 - root};
}

StabilityReport verify_stability(const WaveProfile& p, int n_xi, int K, const VerifyOptions& opt) {
  if (n_xi < 64 || n_xi % 2 != 0)
    throw DomainError("verify_stability: n_xi must be even and >= 64");
  if (!p.resolved()) throw ResolutionError("verify_stability: profile tail coefficient not resolved");
  const double T = p.period;
  MultiplierTables tab = multiplier_tables(p, K);
  StabilityReport r;
  r.xi.resize(n_xi);
  r.max_re.resize(n_xi);
  std::vector<int> marginal(n_xi, 0);
  for (int j = 0; j < n_xi; ++j)
    r.xi[j] = -std::numbers::pi / T + 2.0 * std::numbers::pi * j / (n_xi * T);
  r.xi[n_xi / 2] = 0.0;
  parallel_for(n_xi, [&](int j) {
    SpectrumSlice s = spectrum_slice(assemble_bloch(p, tab, r.xi[j]));
    r.max_re[j] = s.eigenvalues.front().real();
    for (const auto& l : s.eigenvalues)
      if (l.real() >= -opt.tol_zero) ++marginal[j];
  });
  r.max_real_part = *std::max_element(r.max_re.begin(), r.max_re.end());
  for (int m : marginal) r.marginal_count += m;

  // (i) closed left half-plane, touching only once (the xi = 0 critical eigenvalue)
  r.cond_i = r.max_real_part <= opt.tol_zero && r.marginal_count == 1 && marginal[n_xi / 2] == 1;

  // (ii) quadratic tangency away from the origin sample
  double xi_min = 2.0 * std::numbers::pi / (n_xi * T);
  r.theta_fit = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_xi; ++j) {
    if (std::abs(r.xi[j]) < xi_min * (1.0 - 1e-9)) continue;
    r.theta_fit = std::min(r.theta_fit, -r.max_re[j] / (r.xi[j] * r.xi[j]));
  }
  r.cond_ii = r.theta_fit > 0.0;

  // (iii) simple zero eigenvalue carried by phi'
  BlochOperatorMatrix A0 = assemble_bloch(p, tab, 0.0);
  CVecE dphi = profile_vec(p, K, 1);
  r.translation_residual = dphi.norm() > 0.0 ? (A0.entries * dphi).norm() / dphi.norm()
                                             : std::numeric_limits<double>::infinity();
  Eigen::ComplexEigenSolver<CMat> es(A0.entries, true);
  Eigen::ComplexEigenSolver<CMat> esa(A0.entries.adjoint(), true);
  if (es.info() != Eigen::Success || esa.info() != Eigen::Success)
    throw NumericalError("verify_stability: eigensolver failed at xi = 0");
  int ic = 0;
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(ic))) ic = k;
  r.lambda_c0 = std::abs(es.eigenvalues()(ic));
  double next = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (k != ic) next = std::max(next, es.eigenvalues()(k).real());
  r.spectral_gap_delta = -next;
  int ia = 0;
  cplx target = std::conj(es.eigenvalues()(ic));
  for (int k = 0; k < esa.eigenvalues().size(); ++k)
    if (std::abs(esa.eigenvalues()(k) - target) < std::abs(esa.eigenvalues()(ia) - target)) ia = k;
  CVecE Phi = es.eigenvectors().col(ic).normalized();
  CVecE Psi = esa.eigenvectors().col(ia).normalized();
  r.adjoint_pairing = std::abs(Psi.dot(Phi));
  r.cond_iii = r.translation_residual <= opt.tol_zero && r.lambda_c0 <= opt.tol_zero &&
               r.spectral_gap_delta > 0.0 && r.adjoint_pairing >= opt.pairing_min;
  r.verdict = r.cond_i && r.cond_ii && r.cond_iii;
  return r;
}

}  // namespace lle
