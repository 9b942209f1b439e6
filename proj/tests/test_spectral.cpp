#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace lle;
using lle::testing::smooth_random;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kT = 2 * kPi;

}  // namespace

TEST(Fft, MatchesNaiveDft) {
  const int n = 12;
  CVec x(n);
  for (int k = 0; k < n; ++k) x[k] = cplx(std::sin(0.7 * k), std::cos(1.3 * k * k));
  CVec X = fft(x);
  for (int m = 0; m < n; ++m) {
    cplx acc = 0;
    for (int k = 0; k < n; ++k) acc += x[k] * std::polar(1.0, -2 * kPi * m * k / n);
    EXPECT_LT(std::abs(acc - X[m]), 1e-12);
  }
  EXPECT_LT(lle::testing::max_abs_diff(ifft(X), x), 1e-14);
}

TEST(CellField, CoefficientRoundtrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const int n = 32;
  CVec cr(n), ci(n);
  for (int k = -8; k <= 8; ++k) {
    cr[(k + n) % n] = cplx(nd(rng), nd(rng));
    ci[(k + n) % n] = cplx(nd(rng), nd(rng));
  }
  CellField f = CellField::from_coeffs(cr, ci, kT);
  CVec br = f.coeffs_r(), bi = f.coeffs_i();
  EXPECT_LT(lle::testing::max_abs_diff(br, cr), 1e-12 * lle::testing::max_abs(cr));
  EXPECT_LT(lle::testing::max_abs_diff(bi, ci), 1e-12 * lle::testing::max_abs(ci));
}

TEST(ExtendedField, RejectsInconsistentShape) {
  ExtendedField f(2, 8, kT);
  EXPECT_NO_THROW(f.validate());
  f.r.pop_back();
  EXPECT_THROW(f.validate(), ValidationError);
  ExtendedField g(2, 8, kT);
  g.period = 0.0;
  EXPECT_THROW(g.validate(), ValidationError);
}

TEST(BlochTransform, ZeroFieldGivesZeroSamples) {
  BlochSampleSet s = bloch_transform(ExtendedField(4, 16, kT));
  ASSERT_EQ(s.samples.size(), 4u);
  for (const auto& c : s.samples) {
    EXPECT_EQ(lle::testing::max_abs(c.r), 0.0);
    EXPECT_EQ(lle::testing::max_abs(c.i), 0.0);
  }
}

TEST(BlochTransform, FrequencyGrid) {
  for (int M : {1, 4, 5, 8}) {
    auto labels = bloch_labels(M);
    ASSERT_EQ(static_cast<int>(labels.size()), M);
    for (size_t k = 1; k < labels.size(); ++k) EXPECT_EQ(labels[k], labels[k - 1] + 1);
    for (int m : labels) {
      double xi = bloch_xi(m, M, kT);
      EXPECT_GE(xi, -kPi / kT - 1e-15);
      EXPECT_LT(xi, kPi / kT);
    }
  }
}

TEST(BlochTransform, CellPeriodicDataLivesAtZero) {
  const int M = 4, N = 16;
  ExtendedField f(M, N, kT);
  for (int k = 0; k < f.size(); ++k) f.r[k] = std::cos(2 * kPi * k * f.dx() / kT);
  BlochSampleSet s = bloch_transform(f);
  for (size_t m = 0; m < s.samples.size(); ++m) {
    double mag = lle::testing::max_abs(s.samples[m].r) + lle::testing::max_abs(s.samples[m].i);
    if (s.mtilde[m] == 0) {
      // the xi = 0 sample is the cell data times the torus length
      for (int k = 0; k < N; ++k) EXPECT_NEAR(s.samples[m].r[k].real(), M * kT * f.r[k].real(), 1e-12);
    } else {
      EXPECT_LT(mag, 1e-12);
    }
  }
}

TEST(BlochTransform, ParsevalAgainstPlainDft) {
  const int M = 8, N = 32;
  ExtendedField f = lle::testing::gaussian(M, N, kT, 0.5 * M * kT + 0.3, 1.5, 1.0, 0.0);
  f = (1.0 / l1_norm(f)) * f;
  // ||f||^2 = (L / P^2) sum |DFT|^2 over both components
  const int P = f.size();
  CVec R = fft(f.r), I = fft(f.i);
  double direct = 0.0;
  for (int k = 0; k < P; ++k) direct += std::norm(R[k]) + std::norm(I[k]);
  direct *= f.length() / (double(P) * P);
  EXPECT_NEAR(bloch_norm_sq(bloch_transform(f)) / direct, 1.0, 1e-10);
}

TEST(InverseBloch, ZeroSamplesGiveZeroField) {
  BlochSampleSet s = bloch_transform(ExtendedField(4, 16, kT));
  ExtendedField f = inverse_bloch(s);
  EXPECT_EQ(l2_norm(f), 0.0);
}

TEST(InverseBloch, RoundtripOnRandomSmoothField) {
  std::mt19937_64 rng(5);
  ExtendedField f = smooth_random(4, 32, kT, rng);
  ExtendedField g = inverse_bloch(bloch_transform(f));
  EXPECT_LE(l2_norm(g - f) / l2_norm(f), 1e-12);
}

TEST(InverseBloch, SingleSampleIsPlaneWave) {
  const int M = 8, N = 16;
  BlochSampleSet s = bloch_transform(ExtendedField(M, N, kT));
  const size_t pick = 5;
  const cplx c(0.3, -0.2);
  for (int k = 0; k < N; ++k) {
    s.samples[pick].r[k] = c;
    s.samples[pick].i[k] = 2.0 * c;
  }
  ExtendedField f = inverse_bloch(s);
  const double xi = s.xi[pick];
  // one-term sum with quadrature weight d(xi)/(2 pi) = 1/(M T)
  const double w = 1.0 / (M * kT);
  for (int k = 0; k < f.size(); ++k) {
    cplx e = std::polar(1.0, xi * k * f.dx());
    EXPECT_LT(std::abs(f.r[k] - w * c * e), 1e-14);
    EXPECT_LT(std::abs(f.i[k] - 2.0 * w * c * e), 1e-14);
  }
}

TEST(InverseBloch, RejectsInconsistentGrid) {
  BlochSampleSet s = bloch_transform(ExtendedField(4, 16, kT));
  s.xi[1] += 0.01;
  EXPECT_THROW(inverse_bloch(s), ValidationError);
}

TEST(BlochTransform, Linearity) {
  std::mt19937_64 rng(9);
  ExtendedField f = smooth_random(4, 16, kT, rng), g = smooth_random(4, 16, kT, rng);
  BlochSampleSet a = bloch_transform(2.0 * f + (-0.5) * g), b = bloch_transform(f), c = bloch_transform(g);
  for (size_t m = 0; m < a.samples.size(); ++m)
    for (int k = 0; k < 16; ++k) {
      EXPECT_LT(std::abs(a.samples[m].r[k] - (2.0 * b.samples[m].r[k] - 0.5 * c.samples[m].r[k])), 1e-13);
      EXPECT_LT(std::abs(a.samples[m].i[k] - (2.0 * b.samples[m].i[k] - 0.5 * c.samples[m].i[k])), 1e-13);
    }
}

TEST(BlochTransform, DerivativeCommutation) {
  std::mt19937_64 rng(21);
  const int M = 8, N = 32;
  ExtendedField f = smooth_random(M, N, kT, rng);
  BlochSampleSet s = bloch_transform(f), sd = bloch_transform(spectral_derivative(f, 1));
  for (size_t m = 0; m < s.samples.size(); ++m) {
    CellField d = spectral_derivative(s.samples[m], 1);
    for (int k = 0; k < N; ++k) {
      cplx want = sd.samples[m].r[k] - cplx(0, s.xi[m]) * s.samples[m].r[k];
      EXPECT_LT(std::abs(d.r[k] - want), 1e-10 * (1 + std::abs(want)));
    }
  }
}

TEST(SpectralDerivative, SineToCosine) {
  const int n = 32;
  CVec f(n);
  for (int k = 0; k < n; ++k) f[k] = std::sin(2 * kPi * k / n);
  CVec d = spectral_derivative(f, kT, 1);
  for (int k = 0; k < n; ++k) EXPECT_NEAR(d[k].real(), std::cos(2 * kPi * k / n), 1e-12);
}

TEST(SpectralDerivative, OrderZeroIsIdentity) {
  std::mt19937_64 rng(1);
  ExtendedField f = smooth_random(2, 16, kT, rng);
  EXPECT_EQ(l2_norm(spectral_derivative(f, 0) - f), 0.0);
}

TEST(SpectralDerivative, SecondDerivativeEigenfunction) {
  const int n = 32;
  CVec f(n);
  for (int k = 0; k < n; ++k) f[k] = std::polar(1.0, 4 * kPi * k / n);
  CVec d = spectral_derivative(f, kT, 2);
  const double kk = 4 * kPi / kT;
  for (int k = 0; k < n; ++k) EXPECT_LT(std::abs(d[k] + kk * kk * f[k]), 1e-12);
}

TEST(SpectralDerivative, RejectsUnsupportedOrder) {
  CVec f(16, 1.0);
  EXPECT_THROW(spectral_derivative(f, kT, 5), DomainError);
  EXPECT_THROW(spectral_derivative(f, kT, -1), DomainError);
}

TEST(Norms, SobolevOfSine) {
  const int n = 64;
  CVec f(n);
  for (int k = 0; k < n; ++k) f[k] = std::sin(3 * 2 * kPi * k / n);
  // ||sin(3x)||^2 = pi on [0, 2 pi); each derivative multiplies by 9
  double want = std::sqrt(kPi * (1 + 9 + 81));
  EXPECT_NEAR(sobolev_norm(f, kT, 2), want, 1e-12);
  EXPECT_NEAR(l2_norm(f, kT / n), std::sqrt(kPi), 1e-12);
}

TEST(Norms, L1OfConstant) {
  ExtendedField f(3, 16, kT);
  for (auto& z : f.r) z = 2.0;
  EXPECT_NEAR(l1_norm(f), 2.0 * 3 * kT, 1e-12);
}
