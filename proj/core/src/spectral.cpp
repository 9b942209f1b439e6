#include "lle/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "lle/errors.hpp"

namespace lle {

namespace {

std::mutex plan_mu;

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lk(plan_mu);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_complex* a = fftw_alloc_complex(n);
  fftw_complex* b = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft_1d(n, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  cache.emplace(key, p);
  return p;
}

void run(const cplx* in, cplx* out, int n, int sign) {
  fftw_plan p = get_plan(n, sign);
  if (in == out) {
    CVec tmp(in, in + n);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out));
  } else {
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
}

void check_order(int order) {
  if (order < 0 || order > 4)
    throw DomainError("spectral_derivative: unsupported order " + std::to_string(order) +
                      " (0..4)");
}

}  // namespace

void fft_forward(const cplx* in, cplx* out, int n) { run(in, out, n, FFTW_FORWARD); }
void fft_backward(const cplx* in, cplx* out, int n) { run(in, out, n, FFTW_BACKWARD); }

CVec fft(const CVec& x) {
  CVec X(x.size());
  fft_forward(x.data(), X.data(), static_cast<int>(x.size()));
  return X;
}

CVec ifft(const CVec& X) {
  CVec x(X.size());
  fft_backward(X.data(), x.data(), static_cast<int>(X.size()));
  double s = 1.0 / static_cast<double>(X.size());
  for (auto& v : x) v *= s;
  return x;
}

RVec wavenumbers(int n, double length) {
  RVec k(n);
  double q = 2.0 * std::numbers::pi / length;
  for (int s = 0; s < n; ++s) k[s] = q * signed_index(s, n);
  return k;
}

CellField::CellField(int n, double period) : n(n), period(period), r(n), i(n) {}

CellField CellField::from_scalar(const CVec& psi, double period) {
  CellField f(static_cast<int>(psi.size()), period);
  for (int j = 0; j < f.n; ++j) {
    f.r[j] = psi[j].real();
    f.i[j] = psi[j].imag();
  }
  return f;
}

CellField CellField::from_coeffs(const CVec& cr, const CVec& ci, double period) {
  int n = static_cast<int>(cr.size());
  CellField f(n, period);
  fft_backward(cr.data(), f.r.data(), n);
  fft_backward(ci.data(), f.i.data(), n);
  return f;
}

CVec CellField::scalar() const {
  CVec out(n);
  for (int j = 0; j < n; ++j) out[j] = cplx(r[j].real(), i[j].real());
  return out;
}

CVec CellField::coeffs_r() const {
  CVec c = fft(r);
  for (auto& v : c) v /= n;
  return c;
}

CVec CellField::coeffs_i() const {
  CVec c = fft(i);
  for (auto& v : c) v /= n;
  return c;
}

ExtendedField::ExtendedField(int m_cells, int n, double period)
    : m_cells(m_cells), n(n), period(period), r(m_cells * n), i(m_cells * n) {}

ExtendedField ExtendedField::from_scalar(const CVec& psi, int m_cells, int n, double period) {
  if (static_cast<int>(psi.size()) != m_cells * n)
    throw ValidationError("ExtendedField: value length does not equal M*N");
  ExtendedField f(m_cells, n, period);
  for (int j = 0; j < f.size(); ++j) {
    f.r[j] = psi[j].real();
    f.i[j] = psi[j].imag();
  }
  return f;
}

CVec ExtendedField::scalar() const {
  CVec out(size());
  for (int j = 0; j < size(); ++j) out[j] = cplx(r[j].real(), i[j].real());
  return out;
}

void ExtendedField::validate() const {
  if (m_cells <= 0 || n <= 0 || !(period > 0.0))
    throw ValidationError("ExtendedField: M, N and T must be positive");
  if (static_cast<int>(r.size()) != m_cells * n || static_cast<int>(i.size()) != m_cells * n)
    throw ValidationError("ExtendedField: declared M*N = " + std::to_string(m_cells * n) +
                          " but value length is " + std::to_string(r.size()));
}

ExtendedField operator+(const ExtendedField& a, const ExtendedField& b) {
  ExtendedField c = a;
  for (int j = 0; j < c.size(); ++j) {
    c.r[j] += b.r[j];
    c.i[j] += b.i[j];
  }
  return c;
}

ExtendedField operator-(const ExtendedField& a, const ExtendedField& b) {
  ExtendedField c = a;
  for (int j = 0; j < c.size(); ++j) {
    c.r[j] -= b.r[j];
    c.i[j] -= b.i[j];
  }
  return c;
}

ExtendedField operator*(double s, const ExtendedField& a) {
  ExtendedField c = a;
  for (int j = 0; j < c.size(); ++j) {
    c.r[j] *= s;
    c.i[j] *= s;
  }
  return c;
}

std::vector<int> bloch_labels(int m_cells) {
  std::vector<int> out;
  for (int m = -(m_cells / 2); m <= (m_cells + 1) / 2 - 1; ++m) out.push_back(m);
  return out;
}

double bloch_xi(int mtilde, int m_cells, double period) {
  return 2.0 * std::numbers::pi * mtilde / (m_cells * period);
}

// Cell coefficient l at label m sits at extended DFT slot (l*M + m) mod P, scaled by dx.
BlochSampleSet bloch_transform(const ExtendedField& f) {
  f.validate();
  const int M = f.m_cells, N = f.n, P = f.size();
  const double dx = f.dx();
  CVec Gr = fft(f.r), Gi = fft(f.i);
  BlochSampleSet s;
  s.m_cells = M;
  s.n = N;
  s.period = f.period;
  s.mtilde = bloch_labels(M);
  for (int m : s.mtilde) {
    s.xi.push_back(bloch_xi(m, M, f.period));
    CVec cr(N), ci(N);
    for (int slot = 0; slot < N; ++slot) {
      int l = signed_index(slot, N);
      int k = ((l * M + m) % P + P) % P;
      cr[slot] = dx * Gr[k];
      ci[slot] = dx * Gi[k];
    }
    s.samples.push_back(CellField::from_coeffs(cr, ci, f.period));
  }
  return s;
}

ExtendedField inverse_bloch(const BlochSampleSet& s) {
  const int M = s.m_cells, N = s.n, P = M * N;
  if (static_cast<int>(s.samples.size()) != M || static_cast<int>(s.xi.size()) != M ||
      s.mtilde != bloch_labels(M))
    throw ValidationError("inverse_bloch: xi grid inconsistent with M");
  for (int a = 0; a < M; ++a) {
    if (std::abs(s.xi[a] - bloch_xi(s.mtilde[a], M, s.period)) > 1e-12 / s.period)
      throw ValidationError("inverse_bloch: xi grid inconsistent with M");
    if (s.samples[a].n != N) throw ValidationError("inverse_bloch: sample length mismatch");
  }
  ExtendedField f(M, N, s.period);
  const double dx = f.dx();
  CVec Gr(P), Gi(P);
  for (int a = 0; a < M; ++a) {
    CVec cr = s.samples[a].coeffs_r(), ci = s.samples[a].coeffs_i();
    for (int slot = 0; slot < N; ++slot) {
      int l = signed_index(slot, N);
      int k = ((l * M + s.mtilde[a]) % P + P) % P;
      Gr[k] = cr[slot] / dx;
      Gi[k] = ci[slot] / dx;
    }
  }
  f.r = ifft(Gr);
  f.i = ifft(Gi);
  return f;
}

CVec spectral_derivative(const CVec& f, double length, int order) {
  check_order(order);
  if (order == 0) return f;
  int n = static_cast<int>(f.size());
  CVec F = fft(f);
  RVec k = wavenumbers(n, length);
  for (int s = 0; s < n; ++s) {
    if (order % 2 == 1 && n % 2 == 0 && s == n / 2) {
      F[s] = 0.0;
      continue;
    }
    F[s] *= std::pow(cplx(0.0, k[s]), order);
  }
  return ifft(F);
}

CellField spectral_derivative(const CellField& f, int order) {
  CellField g = f;
  g.r = spectral_derivative(f.r, f.period, order);
  g.i = spectral_derivative(f.i, f.period, order);
  return g;
}

ExtendedField spectral_derivative(const ExtendedField& f, int order) {
  ExtendedField g = f;
  g.r = spectral_derivative(f.r, f.length(), order);
  g.i = spectral_derivative(f.i, f.length(), order);
  return g;
}

double l2_norm(const CVec& f, double dx) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s * dx);
}

double l2_norm(const CellField& f) {
  return std::hypot(l2_norm(f.r, f.dx()), l2_norm(f.i, f.dx()));
}

double l2_norm(const ExtendedField& f) {
  return std::hypot(l2_norm(f.r, f.dx()), l2_norm(f.i, f.dx()));
}

double l1_norm(const ExtendedField& f) {
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += std::sqrt(std::norm(f.r[j]) + std::norm(f.i[j]));
  return s * f.dx();
}

double sobolev_norm(const CVec& f, double length, int s) {
  int n = static_cast<int>(f.size());
  CVec F = fft(f);
  RVec k = wavenumbers(n, length);
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    double w = 0.0, kp = 1.0;
    for (int j = 0; j <= s; ++j) {
      w += kp;
      kp *= k[a] * k[a];
    }
    acc += w * std::norm(F[a]);
  }
  return std::sqrt(acc * length / (static_cast<double>(n) * n));
}

double sobolev_norm(const ExtendedField& f, int s) {
  return std::hypot(sobolev_norm(f.r, f.length(), s), sobolev_norm(f.i, f.length(), s));
}

cplx inner(const CellField& f, const CellField& g) {
  cplx s = 0.0;
  for (int j = 0; j < f.n; ++j) s += std::conj(f.r[j]) * g.r[j] + std::conj(f.i[j]) * g.i[j];
  return s * f.dx();
}

double bloch_norm_sq(const BlochSampleSet& s) {
  double dxi = 2.0 * std::numbers::pi / (s.m_cells * s.period);
  double acc = 0.0;
  for (const auto& c : s.samples) {
    double nrm = l2_norm(c);
    acc += nrm * nrm;
  }
  return acc * dxi / (2.0 * std::numbers::pi * s.period);
}

}  // namespace lle
