#include "lle/critical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lle {

namespace {

double overlap(const CVecE& a, const CVecE& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.dot(b)) / (na * nb);
}

}  // namespace

EigenData decompose(const BlochOperatorMatrix& m, const CVecE& reference, const CVecE& dphi,
                    const TrackOptions& opt) {
  Eigen::ComplexEigenSolver<CMat> es(m.entries, true);
  if (es.info() != Eigen::Success)
    throw NumericalError("decompose: eigensolver failed at xi = " + std::to_string(m.xi));
  EigenData d;
  d.xi = m.xi;
  d.lambda = es.eigenvalues();
  d.V = es.eigenvectors();
  Eigen::PartialPivLU<CMat> lu(d.V);
  d.Vinv = lu.inverse();
  d.cond = d.V.norm() * d.Vinv.norm() / static_cast<double>(d.V.rows());

  const int D = static_cast<int>(d.lambda.size());
  int best = -1;
  double b1 = -1.0, b2 = -1.0;
  for (int k = 0; k < D; ++k) {
    double o = overlap(reference, d.V.col(k));
    if (o > b1) {
      b2 = b1;
      b1 = o;
      best = k;
    } else if (o > b2) {
      b2 = o;
    }
  }
  if (b1 - b2 < opt.ambiguity)
    throw TrackingAmbiguityError("track_critical: ambiguous eigenvector overlap at xi = " +
                                     std::to_string(m.xi) + " (" + std::to_string(b1) + " vs " +
                                     std::to_string(b2) + ")",
                                 m.xi);
  d.crit = best;

  BlochEigenpair& pr = d.pair;
  pr.xi = m.xi;
  pr.period = m.period;
  pr.lambda_c = d.lambda(best);
  CVecE v = d.V.col(best);
  cplx s = dphi.dot(v) / dphi.squaredNorm();
  pr.phi_vec = v / s;

  Eigen::ComplexEigenSolver<CMat> esa(m.entries.adjoint(), true);
  if (esa.info() != Eigen::Success)
    throw NumericalError("decompose: adjoint eigensolver failed at xi = " + std::to_string(m.xi));
  int ia = 0;
  cplx target = std::conj(pr.lambda_c);
  for (int k = 1; k < D; ++k)
    if (std::abs(esa.eigenvalues()(k) - target) < std::abs(esa.eigenvalues()(ia) - target)) ia = k;
  CVecE w = esa.eigenvectors().col(ia);
  cplx pairing = vec_inner(w, pr.phi_vec, m.period);
  pr.phi_tilde_vec = w / std::conj(pairing);
  return d;
}

std::vector<EigenData> track_grid(const WaveProfile& p, const MultiplierTables& tab,
                                  const RVec& xis, const TrackOptions& opt) {
  if (xis.empty() || xis[0] != 0.0) throw DomainError("track_grid: grid must start at xi = 0");
  const int K = tab.K;
  CVecE dphi = profile_vec(p, K, 1);
  EigenData zero = decompose(assemble_bloch(p, tab, 0.0), dphi, dphi, opt);
  std::vector<EigenData> pos{zero}, neg;
  CVecE ref = zero.pair.phi_vec;
  for (size_t k = 1; k < xis.size(); ++k) {
    pos.push_back(decompose(assemble_bloch(p, tab, xis[k]), ref, dphi, opt));
    ref = pos.back().pair.phi_vec;
  }
  ref = zero.pair.phi_vec;
  for (size_t k = 1; k < xis.size(); ++k) {
    neg.push_back(decompose(assemble_bloch(p, tab, -xis[k]), ref, dphi, opt));
    ref = neg.back().pair.phi_vec;
  }
  std::vector<EigenData> out(neg.rbegin(), neg.rend());
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

std::vector<BlochEigenpair> track_critical(const WaveProfile& p, double xi_max, int n, int K,
                                           const TrackOptions& opt) {
  if (n < 1) throw DomainError("track_critical: need n >= 1");
  if (!(xi_max > 0.0) || xi_max > std::numbers::pi / p.period * (1 + 1e-12))
    throw DomainError("track_critical: xi_max must lie in (0, pi/T]");
  MultiplierTables tab = multiplier_tables(p, K);
  RVec xis(n + 1);
  for (int k = 0; k <= n; ++k) xis[k] = xi_max * k / n;
  std::vector<BlochEigenpair> out;
  for (auto& d : track_grid(p, tab, xis, opt)) out.push_back(d.pair);
  return out;
}

ExpansionFit fit_expansion(const RVec& xi, const CVec& lambda, double xi_fit) {
  double sxx = 0, sxi = 0, sx4 = 0, sx2r = 0;
  int npos = 0, nneg = 0, used = 0;
  for (size_t k = 0; k < xi.size(); ++k) {
    double x = xi[k];
    if (std::abs(x) > xi_fit * (1 + 1e-12)) continue;
    ++used;
    if (x > 0) ++npos;
    if (x < 0) ++nneg;
    sxx += x * x;
    sxi += x * lambda[k].imag();
    sx4 += x * x * x * x;
    sx2r += x * x * lambda[k].real();
  }
  if (used < 9 || npos != nneg)
    throw DomainError("fit_expansion: need at least 9 samples symmetric about 0 in the window");
  ExpansionFit f;
  f.n_used = used;
  f.a = sxi / sxx;
  f.d = -sx2r / sx4;
  double num = 0, den = 0;
  for (size_t k = 0; k < xi.size(); ++k) {
    double x = xi[k];
    if (std::abs(x) > xi_fit * (1 + 1e-12)) continue;
    cplx model(-f.d * x * x, f.a * x);
    num += std::norm(lambda[k] - model);
    den += std::norm(lambda[k]);
  }
  f.residual = den > 0 ? std::sqrt(num / den) : 0.0;
  if (f.residual > 0.1)
    throw PoorFitError("fit_expansion: relative residual " + std::to_string(f.residual) +
                       " exceeds 10% (window too wide)");
  return f;
}

CriticalCurve critical_curve(const std::vector<BlochEigenpair>& pairs, double xi_fit) {
  CriticalCurve c;
  for (const auto& p : pairs) {
    c.xi_samples.push_back(p.xi);
    c.lambda_c.push_back(p.lambda_c);
  }
  ExpansionFit f = fit_expansion(c.xi_samples, c.lambda_c, xi_fit);
  c.a_fit = f.a;
  c.d_fit = f.d;
  c.fit_residual = f.residual;
  return c;
}

cplx spectral_projection_coefficient(const BlochEigenpair& pair, const CellField& sample) {
  return inner(pair.phi_tilde_xi(sample.n), sample);
}

double choose_xi1(const WaveProfile& p, int K, const Xi1Options& opt) {
  MultiplierTables tab = multiplier_tables(p, K);
  const double edge = std::numbers::pi / p.period;
  CVecE dphi = profile_vec(p, K, 1);
  CVecE ref = dphi;
  double window = 0.0;
  for (int k = 0; k <= opt.n_scan; ++k) {
    double xi = edge * k / opt.n_scan;
    EigenData d;
    try {
      d = decompose(assemble_bloch(p, tab, xi), ref, dphi);
    } catch (const TrackingAmbiguityError&) {
      break;
    }
    ref = d.pair.phi_vec;
    double next = -1e300;
    for (int j = 0; j < d.lambda.size(); ++j)
      if (j != d.crit) next = std::max(next, d.lambda(j).real());
    double gap = (d.pair.lambda_c.real() - next) / std::abs(next);
    if (gap < opt.delta1) break;
    window = xi;
  }
  if (window <= 0.0) throw NumericalError("choose_xi1: no window with the required spectral gap");
  return 0.5 * window;
}

}  // namespace lle
