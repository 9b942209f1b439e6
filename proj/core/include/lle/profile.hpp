#pragma once

#include <vector>

#include "lle/spectral.hpp"

namespace lle {

struct LLEParams {
  double alpha = 1.0;
  double beta = -1.0;
  double F = 1.0;
  void validate() const;
};

// T-periodic steady state phi = phi_r + i phi_i stored by its Fourier coefficients
// for l = -K..K (index l + K).
struct WaveProfile {
  LLEParams params;
  double period = 0.0;
  int n_modes = 0;
  CVec coeffs;
  double residual_norm = 0.0;
  bool even = false;
  std::vector<double> newton_history;  // residual after each Newton step (solver output only)

  cplx coeff(int l) const { return (l < -n_modes || l > n_modes) ? cplx{} : coeffs[l + n_modes]; }
  double wavenumber() const;
  // Values of d^order phi on the n-point grid of [0, T). Exact sampling of the trig polynomial.
  CVec sample(int n, int order = 0) const;
  CellField cell(int n, int order = 0) const;
  // Cosine amplitude of the first harmonic, 2|phi_1| for an even profile.
  double first_harmonic_amplitude() const;
  double max_coeff() const;
  // |phi_K| <= 1e-10 max |phi_l|
  bool resolved(double rel = 1e-10) const;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  int grid_factor = 4;  // collocation points per mode
};

struct SeedOptions {
  double mu_cap = 0.05;
  int n_modes = 32;
};

// Real roots rho of rho (1 + (alpha - rho)^2) = F^2 mapped to phi = F / (1 + i (alpha - rho)).
std::vector<cplx> constant_states(const LLEParams& params);

WaveProfile constant_profile(const LLEParams& params, cplx phi_star, double period, int n_modes);

// Small-amplitude wave emerging from the Turing instability of the constant state.
WaveProfile bifurcation_seed(double alpha, double mu, const SeedOptions& opt = {});

// Newton on the cosine subspace with step-halving line search.
WaveProfile solve_profile(const WaveProfile& seed, const NewtonOptions& opt = {});

// Discrete L2(0,T) norm of i beta phi'' + (1 + i alpha) phi - i |phi|^2 phi - F.
double profile_residual(const WaveProfile& p, int grid_factor = 4);

// Same profile with coefficients multiplied by e^{2 pi i l s / T}: phi(x + s).
WaveProfile shift_profile(const WaveProfile& p, double s);

// Resample onto a larger mode count (zero padding).
WaveProfile with_modes(const WaveProfile& p, int n_modes);

}  // namespace lle
