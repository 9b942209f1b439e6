#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace lle;

namespace {

// Real roots of rho (1 + (alpha - rho)^2) = F^2 by bisection on sign changes of a fine scan.
std::vector<double> bisection_roots(double alpha, double F) {
  auto g = [&](double r) { return r * (1 + (alpha - r) * (alpha - r)) - F * F; };
  std::vector<double> roots;
  const double hi = F * F, step = hi / 4000;
  for (double a = 0.0; a < hi; a += step) {
    double b = std::min(a + step, hi);
    if (g(a) == 0.0) roots.push_back(a);
    if (g(a) * g(b) < 0) {
      double lo = a, up = b;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + up);
        (g(lo) * g(mid) <= 0 ? up : lo) = mid;
      }
      roots.push_back(0.5 * (lo + up));
    }
  }
  return roots;
}

}  // namespace

TEST(ConstantStates, AlphaOneIsUnique) {
  auto s = constant_states({1.0, -1.0, 1.0});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_LT(std::abs(s[0] - cplx(1.0, 0.0)), 1e-14);
}

TEST(ConstantStates, AlphaTwoMatchesBisection) {
  LLEParams par{2.0, -1.0, 1.0};
  auto s = constant_states(par);
  auto rho = bisection_roots(2.0, 1.0);
  ASSERT_EQ(s.size(), rho.size());
  std::vector<double> got;
  for (auto z : s) got.push_back(std::norm(z));
  std::sort(got.begin(), got.end());
  for (size_t k = 0; k < rho.size(); ++k) EXPECT_NEAR(got[k], rho[k], 1e-12);
  for (auto z : s) {
    cplx r = cplx(1.0, par.alpha) * z - cplx(0, 1) * std::norm(z) * z - par.F;
    EXPECT_LT(std::abs(r), 1e-12);
  }
}

TEST(ConstantStates, SmallForcingAtZeroDetuning) {
  auto s = constant_states({0.0, -1.0, 1e-4});
  ASSERT_EQ(s.size(), 1u);
  // phi* = F / (1 - i rho) with rho ~ F^2
  EXPECT_LT(std::abs(s[0] - cplx(1e-4, 1e-12)), 1e-18);
}

TEST(BifurcationSeed, ClosedFormCoefficients) {
  WaveProfile p = bifurcation_seed(1.0, 0.01);
  EXPECT_NEAR(p.period, 2 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(p.params.F, std::sqrt(1.01), 1e-14);
  double want = std::abs(3.0 * cplx(1, 1) / std::sqrt(11.0)) * 0.1;
  EXPECT_NEAR(want, 0.12792, 1e-5);
  EXPECT_NEAR(p.first_harmonic_amplitude(), want, 1e-12);
  EXPECT_TRUE(p.even);
}

TEST(BifurcationSeed, ResidualIsFirstOrderInMu) {
  std::vector<double> mus = {0.01, 0.005, 0.0025}, res;
  for (double mu : mus) res.push_back(profile_residual(bifurcation_seed(1.0, mu)));
  double slope = std::log(res[0] / res[2]) / std::log(mus[0] / mus[2]);
  EXPECT_NEAR(slope, 1.0, 0.05);
  for (size_t k = 0; k < mus.size(); ++k) EXPECT_LT(res[k] / mus[k], 10.0);
}

TEST(BifurcationSeed, SmallMuApproachesConstantState) {
  WaveProfile p = bifurcation_seed(1.0, 1e-12);
  EXPECT_LT(p.first_harmonic_amplitude(), 1e-5);
  EXPECT_LT(std::abs(p.coeff(0) - 1.0), 1e-14);
}

TEST(BifurcationSeed, ParameterGate) {
  EXPECT_THROW(bifurcation_seed(1.5, 0.01), DomainError);
  EXPECT_THROW(bifurcation_seed(41.0 / 30.0, 0.01), DomainError);
  EXPECT_THROW(bifurcation_seed(1.0, 0.0), DomainError);
  EXPECT_THROW(bifurcation_seed(1.0, 0.06), DomainError);
}

TEST(SolveProfile, ConstantSeedIsFixedPoint) {
  LLEParams par{1.0, -1.0, 1.0};
  WaveProfile seed = constant_profile(par, 1.0, 2 * std::numbers::pi, 8);
  EXPECT_LE(seed.residual_norm, 1e-14);
  WaveProfile p = solve_profile(seed);
  EXPECT_LE(p.residual_norm, 1e-14);
  for (size_t k = 0; k < p.coeffs.size(); ++k) EXPECT_LT(std::abs(p.coeffs[k] - seed.coeffs[k]), 1e-14);
}

TEST(SolveProfile, ConvergesFromSeed) {
  WaveProfile seed = bifurcation_seed(1.0, 0.01);
  WaveProfile p = solve_profile(seed);
  EXPECT_LE(p.residual_norm, 1e-12);
  EXPECT_LE(p.newton_history.size(), 8u);
  EXPECT_NEAR(p.first_harmonic_amplitude() / seed.first_harmonic_amplitude(), 1.0, 0.15);
  EXPECT_LE(profile_residual(p), 1e-12);
  EXPECT_TRUE(p.resolved());
}

TEST(SolveProfile, IteratesStayEven) {
  WaveProfile p = lle::testing::wave(0.01);
  for (int l = 1; l <= p.n_modes; ++l) EXPECT_LT(std::abs(p.coeff(l) - p.coeff(-l)), 1e-12);
}

TEST(SolveProfile, ZeroSeedConvergesToConstantState) {
  // Damped Newton from the zero field lands on the homogeneous state.
  WaveProfile seed = bifurcation_seed(1.0, 0.01);
  for (auto& c : seed.coeffs) c = 0.0;
  WaveProfile p = solve_profile(seed);
  EXPECT_LE(p.residual_norm, 1e-12);
  EXPECT_LT(p.first_harmonic_amplitude(), 1e-10);
  auto states = constant_states(p.params);
  double best = 1e300;
  for (auto z : states) best = std::min(best, std::abs(p.coeff(0) - z));
  EXPECT_LT(best, 1e-12);
}

TEST(SolveProfile, ReportsConvergenceFailure) {
  WaveProfile seed = bifurcation_seed(1.0, 0.01);
  for (auto& c : seed.coeffs) c *= 3.0;
  NewtonOptions opt;
  opt.max_iter = 1;
  try {
    solve_profile(seed, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.last_residual, 1e-12);
  }
}

TEST(SolveProfile, RejectsOddSeed) {
  WaveProfile seed = bifurcation_seed(1.0, 0.01);
  seed.coeffs[seed.n_modes + 1] += 0.01;
  EXPECT_THROW(solve_profile(seed), DomainError);
}

TEST(ProfileResidual, Tolerances) {
  EXPECT_LE(profile_residual(constant_profile({1.0, -1.0, 1.0}, 1.0, 2 * std::numbers::pi, 4)), 1e-14);
  EXPECT_LE(profile_residual(lle::testing::wave(0.01)), 1e-12);
  double r = profile_residual(bifurcation_seed(1.0, 0.01));
  EXPECT_GT(r, 1e-4);
}

TEST(ShiftProfile, ResidualIsTranslationInvariant) {
  const WaveProfile& p = lle::testing::wave(0.01);
  for (double s : {0.1, 1.3, -2.0}) {
    WaveProfile q = shift_profile(p, s);
    EXPECT_LE(profile_residual(q), 2 * std::max(profile_residual(p), 1e-15));
    CVec a = p.sample(16), b = q.sample(16);
    // q(x) = p(x + s)
    cplx direct = 0;
    for (int l = -p.n_modes; l <= p.n_modes; ++l)
      direct += p.coeff(l) * std::polar(1.0, l * p.wavenumber() * (3 * p.period / 16 + s));
    EXPECT_LT(std::abs(b[3] - direct), 1e-13);
  }
}

TEST(SolveProfile, MeshRefinementConsistency) {
  SeedOptions so;
  so.n_modes = 32;
  WaveProfile a = solve_profile(bifurcation_seed(1.0, 0.01, so));
  so.n_modes = 64;
  WaveProfile b = solve_profile(bifurcation_seed(1.0, 0.01, so));
  EXPECT_LT(lle::testing::max_abs_diff(a.sample(64), b.sample(64)), 1e-10);
}

TEST(WithModes, ZeroPaddingPreservesValues) {
  const WaveProfile& p = lle::testing::wave(0.01);
  WaveProfile q = with_modes(p, 48);
  EXPECT_EQ(q.n_modes, 48);
  EXPECT_LT(lle::testing::max_abs_diff(p.sample(32), q.sample(32)), 1e-15);
}
