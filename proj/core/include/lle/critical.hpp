#pragma once

#include <vector>

#include "lle/bloch.hpp"

namespace lle {

class TrackingAmbiguityError : public NumericalError {
 public:
  TrackingAmbiguityError(const std::string& what, double xi) : NumericalError(what), xi(xi) {}
  double xi;
};

class PoorFitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Critical eigenpair at one Floquet exponent. Phi is scaled so its component along phi'
// equals one (Phi_0 = phi'); Phi~ is scaled so <Phi~, Phi> = 1.
struct BlochEigenpair {
  double xi = 0.0;
  cplx lambda_c;
  CVecE phi_vec;
  CVecE phi_tilde_vec;
  double period = 0.0;
  CellField phi_xi(int n) const { return vec_to_cell(phi_vec, n, period); }
  CellField phi_tilde_xi(int n) const { return vec_to_cell(phi_tilde_vec, n, period); }
};

struct CriticalCurve {
  RVec xi_samples;
  CVec lambda_c;
  double a_fit = 0.0;
  double d_fit = 0.0;
  double fit_residual = 0.0;
};

struct ExpansionFit {
  double a = 0.0;
  double d = 0.0;
  double residual = 0.0;
  int n_used = 0;
};

// Full eigendecomposition of one Bloch matrix plus the selected critical index.
struct EigenData {
  double xi = 0.0;
  CVecE lambda;
  CMat V;
  CMat Vinv;
  double cond = 1.0;  // eigenvector condition number estimate
  int crit = -1;
  BlochEigenpair pair;
};

struct TrackOptions {
  double ambiguity = 1e-3;
};

// Eigendecomposition and critical selection by overlap with `reference`
// (phi' at xi = 0, the previous Phi otherwise).
EigenData decompose(const BlochOperatorMatrix& m, const CVecE& reference, const CVecE& dphi,
                    const TrackOptions& opt = {});

// Continuation from xi = 0 outward along the given nonnegative magnitudes, on both sides.
// Returns eigenpairs sorted by ascending xi (2 * xis.size() - 1 entries; xis[0] must be 0).
std::vector<EigenData> track_grid(const WaveProfile& p, const MultiplierTables& tab,
                                  const RVec& xis, const TrackOptions& opt = {});

// n samples per side on [-xi_max, xi_max], uniformly spaced.
std::vector<BlochEigenpair> track_critical(const WaveProfile& p, double xi_max, int n, int K,
                                           const TrackOptions& opt = {});

// Im lambda ~ a xi, Re lambda ~ -d xi^2 on |xi| <= xi_fit.
ExpansionFit fit_expansion(const RVec& xi, const CVec& lambda, double xi_fit);

CriticalCurve critical_curve(const std::vector<BlochEigenpair>& pairs, double xi_fit);

// <Phi~_xi, sample>_{L2(0,T)}
cplx spectral_projection_coefficient(const BlochEigenpair& pair, const CellField& sample);

struct Xi1Options {
  double delta1 = 0.05;
  int n_scan = 64;
};

// Half the largest window [0, w] on which the critical eigenvalue keeps relative gap >= delta1.
double choose_xi1(const WaveProfile& p, int K, const Xi1Options& opt = {});

}  // namespace lle
