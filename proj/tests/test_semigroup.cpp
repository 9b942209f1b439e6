#include <gtest/gtest.h>

#include <numbers>

#include "lle/modulation.hpp"
#include "support.hpp"

using namespace lle;
using lle::testing::make_propagator;

namespace {

constexpr double kT = 2 * std::numbers::pi;

const WaveProfile& W() { return lle::testing::wave(0.04); }

const Propagator& prop16() {
  static const Propagator p = make_propagator(W(), 16, 32);
  return p;
}

ExtendedField bump(int m, int n, double sigma = 1.0) {
  ExtendedField g = lle::testing::gaussian(m, n, kT, 0.5 * m * kT + 0.25 * kT, sigma, 1.0, 0.3);
  return (1.0 / l1_norm(g)) * g;
}

double rel_diff(const ExtendedField& a, const ExtendedField& b) {
  return l2_norm(a - b) / std::max(l2_norm(b), 1e-300);
}

}  // namespace

TEST(Part, ParseAndName) {
  for (std::string s : {"full", "Se", "Sc_tilde", "sp(0,0)", "sp(4,2)", "sp(1,0)"})
    EXPECT_EQ(Part::parse(s).name(), s);
  Part p = Part::parse("sp(3,1)");
  EXPECT_EQ(p.kind, PartKind::Sp);
  EXPECT_EQ(p.ell, 3);
  EXPECT_EQ(p.j, 1);
  EXPECT_THROW(Part::parse("sp(5,0)"), ConfigurationError);
  EXPECT_THROW(Part::parse("sp(0,3)"), ConfigurationError);
  EXPECT_THROW(Part::parse("Sc"), ValidationError);
  EXPECT_THROW(Part::parse(""), ValidationError);
}

TEST(Cutoffs, RhoValues) {
  CutoffSpec c{0.2};
  EXPECT_EQ(c.rho(0.0), 1.0);
  EXPECT_EQ(c.rho(0.1), 1.0);
  EXPECT_EQ(c.rho(-0.1), 1.0);
  EXPECT_EQ(c.rho(0.2), 0.0);
  EXPECT_EQ(c.rho(0.35), 0.0);
  EXPECT_NEAR(c.rho(0.15), std::exp(-1.0 / 3.0), 1e-15);
  EXPECT_EQ(c.rho(0.15), c.rho(-0.15));
  double prev = 1.0;
  for (double x = 0.1; x <= 0.2; x += 0.005) {
    EXPECT_LE(c.rho(x), prev);
    prev = c.rho(x);
  }
}

TEST(Cutoffs, ChiValues) {
  EXPECT_EQ(CutoffSpec::chi(0.0), 0.0);
  EXPECT_EQ(CutoffSpec::chi(1.0), 0.0);
  EXPECT_EQ(CutoffSpec::chi(2.0), 1.0);
  EXPECT_EQ(CutoffSpec::chi(10.0), 1.0);
  EXPECT_NEAR(CutoffSpec::chi(1.5), 0.5, 1e-15);
  EXPECT_NEAR(CutoffSpec::chi(1.3) + CutoffSpec::chi(1.7), 1.0, 1e-15);
  double prev = 0.0;
  for (double t = 1.0; t <= 2.0; t += 0.01) {
    EXPECT_GE(CutoffSpec::chi(t), prev);
    prev = CutoffSpec::chi(t);
  }
}

TEST(Propagator, IdentityAtTimeZero) {
  std::mt19937_64 rng(2);
  ExtendedField v = lle::testing::smooth_random(16, 32, kT, rng);
  EXPECT_LT(rel_diff(prop16().apply(Part::parse("full"), v, 0.0), v), 1e-10);
}

TEST(Propagator, PhasePartVanishesEarly) {
  ExtendedField v = bump(16, 32);
  for (double t : {0.0, 0.5, 1.0}) {
    CVec s = prop16().apply_sp(0, 0, v, t);
    EXPECT_EQ(lle::testing::max_abs(s), 0.0);
  }
  EXPECT_GT(lle::testing::max_abs(prop16().apply_sp(0, 0, v, 1.5)), 0.0);
}

TEST(Propagator, SemigroupProperty) {
  ExtendedField v = bump(16, 32);
  Part full = Part::parse("full");
  ExtendedField once = prop16().apply(full, v, 5.0);
  ExtendedField twice = prop16().apply(full, prop16().apply(full, v, 2.0), 3.0);
  EXPECT_LT(rel_diff(twice, once), 1e-9);
}

TEST(Propagator, Linearity) {
  std::mt19937_64 rng(8);
  ExtendedField f = lle::testing::smooth_random(16, 32, kT, rng), g = bump(16, 32);
  for (std::string s : {"full", "Se", "Sc_tilde"}) {
    Part p = Part::parse(s);
    ExtendedField lhs = prop16().apply(p, 2.0 * f + (-1.5) * g, 3.0);
    ExtendedField rhs = 2.0 * prop16().apply(p, f, 3.0) + (-1.5) * prop16().apply(p, g, 3.0);
    EXPECT_LT(rel_diff(lhs, rhs), 1e-11) << s;
  }
}

TEST(Propagator, ExponentialPartDecaysAtGapRate) {
  StabilityReport rep = verify_stability(W(), 64, 16);
  ASSERT_GT(rep.spectral_gap_delta, 0.0);
  Propagator prop = make_propagator(W(), 64, 32);
  ExtendedField v = bump(64, 32);
  RVec times;
  for (int k = 0; k <= 20; ++k) times.push_back(k);
  DecayFit f = fit_exponential(decay_probe(prop, Part::parse("Se"), v, times), {0.0, 20.0});
  EXPECT_GE(-f.exponent, 0.5 * rep.spectral_gap_delta);
}

TEST(Propagator, IntegrationByPartsIdentity) {
  const int M = 16, N = 32;
  ExtendedField g = bump(M, N, 1.5);
  const double L = M * kT;
  CVec f(M * N);
  for (int k = 0; k < M * N; ++k) {
    double x = k * g.dx();
    // smooth plateau, ~1 away from the seam
    f[k] = 0.5 * (std::tanh((x - 0.15 * L) / 3.0) - std::tanh((x - 0.85 * L) / 3.0));
  }
  EXPECT_LT(ibp_check(prop16(), f, g, 4.0), 1e-10);
  EXPECT_EQ(ibp_check(prop16(), f, ExtendedField(M, N, kT), 4.0), 0.0);
  ExtendedField flat(M, N, kT);
  for (auto& z : flat.r) z = 1.0;
  EXPECT_THROW(ibp_check(prop16(), f, flat, 4.0), DomainError);
  EXPECT_THROW(ibp_check(prop16(), CVec(8), g, 4.0), ValidationError);
}

TEST(Propagator, ExpmMethodsAgree) {
  ExtendedField v = bump(16, 32);
  Propagator a = make_propagator(W(), 16, 32, false, ExpmMethod::Eigen);
  Propagator b = make_propagator(W(), 16, 32, false, ExpmMethod::ScalingSquaring);
  for (double t : {0.5, 7.0}) {
    Part full = Part::parse("full");
    EXPECT_LT(rel_diff(b.apply(full, v, t), a.apply(full, v, t)), 1e-9) << t;
  }
}

TEST(Propagator, CacheValidation) {
  ExtendedField v = bump(16, 32);
  EXPECT_THROW(apply_propagator(prop16(), lle::testing::wave(0.01), Part::parse("full"), v, 1.0),
               ConfigurationError);
  EXPECT_NO_THROW(apply_propagator(prop16(), W(), Part::parse("full"), v, 1.0));
  EXPECT_THROW(prop16().apply(Part::parse("full"), bump(8, 32), 1.0), ValidationError);
  EXPECT_THROW(prop16().apply(Part::parse("full"), v, -1.0), DomainError);
  Propagator support = make_propagator(W(), 16, 32, true);
  EXPECT_THROW(support.apply(Part::parse("Se"), v, 1.0), ConfigurationError);
  EXPECT_NO_THROW(support.apply(Part::parse("Sc_tilde"), v, 1.0));
  EXPECT_NO_THROW(support.apply_sp(1, 1, v, 3.0));
}

TEST(Propagator, ConfigurationErrors) {
  PropagatorConfig cfg;
  EXPECT_THROW(Propagator(W(), 4, 7, cfg), ValidationError);
  cfg.K = 16;
  EXPECT_THROW(Propagator(W(), 4, 32, cfg), ValidationError);
  cfg.K = -1;
  cfg.cutoffs.xi1 = 0.0;
  EXPECT_THROW(Propagator(W(), 4, 32, cfg), ConfigurationError);
  RVec bad = {1.0, 0.5};
  EXPECT_THROW(decay_probe(prop16(), Part::parse("full"), bump(16, 32), bad), DomainError);
}
