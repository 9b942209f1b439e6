#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lle/errors.hpp"
#include "lle/profile.hpp"
#include "lle/spectral.hpp"

namespace lle {

class ModulationTooLargeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct SimConfig {
  int m_cells = 64;
  int n_per_cell = 64;
  double dt = 0.02;
  double t_end = 400.0;
  int snapshot_stride = 50;
  bool dealias = true;  // 2/3 rule on the nonlinear term
  bool strict = true;   // dt * max|symbol| > 50 is an error rather than a warning
  bool cubic = true;    // i|psi|^2 psi
  bool forcing = true;  // F
  // Evolve the perturbation under the linearization about phi instead of the full equation.
  bool linearized = false;
  int contour_points = 16;
  void validate() const;
};

// Real scalar phase on the extended grid.
struct PhaseField {
  int m_cells = 0;
  int n = 0;
  double period = 0.0;
  double t = 0.0;
  RVec values;
  double length() const { return m_cells * period; }
  double dx() const { return period / n; }
};

struct Trajectory {
  int m_cells = 0;
  int n = 0;
  double period = 0.0;
  RVec times;
  // ||d^j (psi - phi)||_{L2}, j = 0..4, at every step
  std::vector<std::array<double, 5>> norm_series;
  RVec snapshot_times;
  std::vector<ExtendedField> snapshots;  // psi (or the perturbation in linearized mode)
  bool linearized = false;
};

// phi tiled over M cells of N points.
ExtendedField tile_profile(const WaveProfile& p, int m_cells, int n);

// Right side of the LLE, -i beta psi'' - (1 + i alpha) psi + i |psi|^2 psi + F.
ExtendedField lle_rhs(const WaveProfile& p, const ExtendedField& psi);
// A[phi] v in the (v_r, v_i) form.
ExtendedField apply_linearization(const WaveProfile& p, const ExtendedField& v);

Trajectory run_lle(const WaveProfile& p, const ExtendedField& v0, const SimConfig& cfg);

// J[(3vr^2+vi^2, 2vrvi; 2vrvi, vr^2+3vi^2) phi + |v|^2 v]
ExtendedField unmod_nonlinearity(const WaveProfile& p, const ExtendedField& v);

struct ModNonlinearity {
  ExtendedField Q;
  ExtendedField R;
  ExtendedField N;  // Q + dR/dx
};

ModNonlinearity mod_nonlinearity(const WaveProfile& p, const ExtendedField& v,
                                 const PhaseField& gamma, const PhaseField& gamma_t);

}  // namespace lle
