#pragma once

#include <complex>
#include <vector>

namespace lle {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

// Unnormalized DFTs (FFTW sign conventions). Plans are cached per size.
void fft_forward(const cplx* in, cplx* out, int n);
void fft_backward(const cplx* in, cplx* out, int n);
CVec fft(const CVec& x);
// Normalized inverse: ifft(fft(x)) == x.
CVec ifft(const CVec& X);

// Signed integer frequency of DFT slot s on n points (Nyquist slot reported as -n/2).
inline int signed_index(int s, int n) { return s < (n + 1) / 2 ? s : s - n; }
// Angular wavenumbers 2*pi*k/L in DFT order.
RVec wavenumbers(int n, double length);

// One period [0,T) sampled on n points; two complex components (v_r, v_i).
struct CellField {
  int n = 0;
  double period = 0.0;
  CVec r, i;

  CellField() = default;
  CellField(int n, double period);
  static CellField from_scalar(const CVec& psi, double period);
  static CellField from_coeffs(const CVec& cr, const CVec& ci, double period);
  CVec scalar() const;  // r + i*i, meaningful when both components are real
  double dx() const { return period / n; }
  // Fourier coefficients in DFT order, normalized so values = sum c_l e^{2 pi i l x / T}.
  CVec coeffs_r() const;
  CVec coeffs_i() const;
};

// M cells of a T-periodic lattice, N samples per cell, on the torus [0, MT).
struct ExtendedField {
  int m_cells = 0;
  int n = 0;
  double period = 0.0;
  CVec r, i;

  ExtendedField() = default;
  ExtendedField(int m_cells, int n, double period);
  static ExtendedField from_scalar(const CVec& psi, int m_cells, int n, double period);
  CVec scalar() const;
  int size() const { return m_cells * n; }
  double dx() const { return period / n; }
  double length() const { return m_cells * period; }
  void validate() const;
};

ExtendedField operator+(const ExtendedField& a, const ExtendedField& b);
ExtendedField operator-(const ExtendedField& a, const ExtendedField& b);
ExtendedField operator*(double s, const ExtendedField& a);

// Samples v_check(xi_m, .) for the M Floquet exponents xi_m = 2 pi m / (M T), ascending.
struct BlochSampleSet {
  int m_cells = 0;
  int n = 0;
  double period = 0.0;
  std::vector<int> mtilde;
  RVec xi;
  std::vector<CellField> samples;
};

// Floquet exponent grid and integer labels, ascending, inside [-pi/T, pi/T).
std::vector<int> bloch_labels(int m_cells);
double bloch_xi(int mtilde, int m_cells, double period);

BlochSampleSet bloch_transform(const ExtendedField& f);
ExtendedField inverse_bloch(const BlochSampleSet& s);

CellField spectral_derivative(const CellField& f, int order);
ExtendedField spectral_derivative(const ExtendedField& f, int order);
// Derivative of a single sampled periodic array of given length.
CVec spectral_derivative(const CVec& f, double length, int order);

// Discrete L2 norms and inner products, both components summed.
double l2_norm(const CellField& f);
double l2_norm(const ExtendedField& f);
double l2_norm(const CVec& f, double dx);
double l1_norm(const ExtendedField& f);
// sqrt(sum_{j<=s} ||d^j f||^2)
double sobolev_norm(const ExtendedField& f, int s);
double sobolev_norm(const CVec& f, double length, int s);
cplx inner(const CellField& f, const CellField& g);

// Parseval check: ||f||^2 vs (1/(2 pi T)) * sum_m dxi * ||v_check(xi_m)||^2.
double bloch_norm_sq(const BlochSampleSet& s);

}  // namespace lle
