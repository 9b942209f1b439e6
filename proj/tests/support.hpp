#pragma once

#include <cmath>
#include <map>
#include <random>

#include "lle/io.hpp"
#include "lle/semigroup.hpp"

namespace lle::testing {

// Converged alpha = 1 wave, cached per mu.
inline const WaveProfile& wave(double mu) {
  static std::map<double, WaveProfile> cache;
  auto it = cache.find(mu);
  if (it == cache.end()) it = cache.emplace(mu, solve_profile(bifurcation_seed(1.0, mu))).first;
  return it->second;
}

inline ExtendedField gaussian(int m, int n, double T, double x0, double sigma, double ar, double ai) {
  ExtendedField f(m, n, T);
  for (int k = 0; k < f.size(); ++k) {
    double x = k * f.dx();
    double g = std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma));
    f.r[k] = ar * g;
    f.i[k] = ai * g;
  }
  return f;
}

// Periodic random field with Gaussian-damped Fourier content.
inline ExtendedField smooth_random(int m, int n, double T, std::mt19937_64& rng, double width = 1.0) {
  std::normal_distribution<double> nd;
  ExtendedField f(m, n, T);
  const int P = f.size();
  RVec kap = wavenumbers(P, f.length());
  CVec hr(P), hi(P);
  for (int k = 0; k < P; ++k) {
    double w = std::exp(-kap[k] * kap[k] * width * width);
    hr[k] = w * cplx(nd(rng), nd(rng));
    hi[k] = w * cplx(nd(rng), nd(rng));
  }
  CVec r = ifft(hr), i = ifft(hi);
  for (int k = 0; k < P; ++k) {
    f.r[k] = r[k].real();
    f.i[k] = i[k].real();
  }
  return f;
}

inline double max_abs(const CVec& v) {
  double m = 0.0;
  for (auto z : v) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const CVec& a, const CVec& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Propagator on an M x N torus with xi1 picked automatically.
inline Propagator make_propagator(const WaveProfile& p, int m, int n, bool support_only = false,
                                  ExpmMethod method = ExpmMethod::Auto) {
  PropagatorConfig cfg;
  cfg.cutoffs.xi1 = choose_xi1(p, std::min(15, p.n_modes));
  cfg.support_only = support_only;
  cfg.expm_method = method;
  return Propagator(p, m, n, cfg);
}

}  // namespace lle::testing
