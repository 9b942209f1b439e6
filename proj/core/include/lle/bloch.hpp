#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "lle/errors.hpp"
#include "lle/profile.hpp"
#include "lle/spectral.hpp"

namespace lle {

using CMat = Eigen::MatrixXcd;
using CVecE = Eigen::VectorXcd;

class ResolutionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Truncated Fourier basis {e^{2 pi i l x/T}}, l = -K..K, for each of the (r, i) components.
// A coefficient vector has length 2(2K+1): r block then i block.
int bloch_dim(int K);
CVecE cell_to_vec(const CellField& f, int K);
CellField vec_to_cell(const CVecE& v, int n, double period);
// L2(0,T) inner product in coefficient space: T * sum conj(a) b.
cplx vec_inner(const CVecE& a, const CVecE& b, double period);
double vec_norm(const CVecE& a, double period);
// Coefficients of d^order phi split into components.
CVecE profile_vec(const WaveProfile& p, int K, int order = 0);

struct BlochOperatorMatrix {
  double xi = 0.0;
  int K = 0;
  double period = 0.0;
  CMat entries;
};

struct SpectrumSlice {
  double xi = 0.0;
  CVec eigenvalues;  // descending real part
  std::optional<CVecE> leading_eigenvector;
};

struct StabilityReport {
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_iii = false;
  bool verdict = false;
  double theta_fit = 0.0;
  double spectral_gap_delta = 0.0;
  double max_real_part = 0.0;
  double lambda_c0 = 0.0;          // |eigenvalue nearest 0| at xi = 0
  double translation_residual = 0.0;  // ||A_0 phi'|| / ||phi'||
  double adjoint_pairing = 0.0;    // |<Phi~_0, Phi_0>| for unit vectors
  int marginal_count = 0;          // eigenvalues with Re >= -tol over the whole grid
  RVec xi;
  RVec max_re;                     // per-xi max real part
};

// Toeplitz coefficient tables of 3u^2+w^2, 2uw, u^2+3w^2 at offsets -2K..2K.
struct MultiplierTables {
  int K = 0;
  CVec c11, c12, c22;
};
MultiplierTables multiplier_tables(const WaveProfile& p, int K);

BlochOperatorMatrix assemble_bloch(const WaveProfile& p, double xi, int K);
BlochOperatorMatrix assemble_bloch(const WaveProfile& p, const MultiplierTables& tab, double xi);

SpectrumSlice spectrum_slice(const BlochOperatorMatrix& m, bool want_vector = false);

// lambda = -1 +/- sqrt(-det L_k) for the 2x2 symbol of a constant state.
std::pair<cplx, cplx> constant_state_dispersion(const LLEParams& params, cplx phi_star, double k);

struct VerifyOptions {
  double tol_zero = 1e-8;
  double pairing_min = 1e-6;
};

StabilityReport verify_stability(const WaveProfile& p, int n_xi, int K,
                                 const VerifyOptions& opt = {});

}  // namespace lle
