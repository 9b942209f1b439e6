#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lle/critical.hpp"

namespace lle {

class ConfigurationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// rho: 1 on |xi| <= xi1/2, 0 on |xi| >= xi1, exp(1 - 1/(1 - z^2)) in between
// with z = (|xi| - xi1/2)/(xi1/2). chi: 0 on [0,1], 1 on [2,inf), exponential smoothstep.
struct CutoffSpec {
  double xi1 = 0.25;
  double rho(double xi) const;
  static double chi(double t);
};

enum class PartKind { Full, Se, ScTilde, Sp };

struct Part {
  PartKind kind = PartKind::Full;
  int ell = 0;  // x-derivatives (sp only)
  int j = 0;    // t-derivatives (sp only)
  // "full", "Se", "Sc_tilde", "sp(l,j)"
  static Part parse(const std::string& s);
  std::string name() const;
};

enum class ExpmMethod { Auto, Eigen, ScalingSquaring };

struct PropagatorConfig {
  int K = -1;  // Fourier truncation; -1 means n_points/2 - 1
  CutoffSpec cutoffs;
  ExpmMethod expm_method = ExpmMethod::Auto;
  double cond_limit = 1e8;
  bool support_only = false;  // only decompose xi inside supp(rho) (projection work)
};

// Per-xi eigendata of A_xi on the Floquet grid of an M-cell torus, cached once per profile.
class Propagator {
 public:
  Propagator(const WaveProfile& p, int m_cells, int n_points, const PropagatorConfig& cfg);

  int m_cells() const { return m_cells_; }
  int n_points() const { return n_points_; }
  int K() const { return K_; }
  double period() const { return period_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  const PropagatorConfig& config() const { return cfg_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<EigenData>& eigendata() const { return data_; }
  const std::vector<bool>& in_support() const { return support_; }
  int fallback_count() const { return fallback_count_; }
  const CVecE& dphi_vec() const { return dphi_; }

  // Per-label truncated Bloch coefficient vectors and their reassembly.
  std::vector<CVecE> to_vectors(const ExtendedField& f) const;
  ExtendedField from_vectors(const std::vector<CVecE>& v) const;
  // Scalar field whose Bloch transform has only the l = 0 cell mode, with value s[m].
  CVec scalar_from_bloch(const CVec& s) const;

  ExtendedField apply(const Part& part, const ExtendedField& v0, double t) const;
  // sp(l,j) as a scalar phase field.
  CVec apply_sp(int ell, int j, const ExtendedField& v0, double t) const;
  // Phase coefficients rho(xi) <Phi~_xi, v_check(xi)> per label (zero off support).
  CVec projection_coefficients(const ExtendedField& v) const;
  // As above with d/dx applied to Phi~ (cell derivative).
  CVec projection_coefficients_dx(const ExtendedField& v) const;

 private:
  void check_field(const ExtendedField& f) const;
  CVecE evolve(int a, const CVecE& c, double t, bool drop_critical) const;

  int m_cells_, n_points_, K_;
  double period_;
  std::uint64_t fingerprint_;
  PropagatorConfig cfg_;
  std::vector<int> labels_;
  std::vector<EigenData> data_;
  std::vector<CMat> fallback_;  // A_xi kept for scaling-and-squaring
  std::vector<bool> support_;
  CVecE dphi_;
  int fallback_count_ = 0;
};

std::uint64_t profile_fingerprint(const WaveProfile& p);

// apply_propagator with cache validation.
ExtendedField apply_propagator(const Propagator& prop, const WaveProfile& p, const Part& part,
                               const ExtendedField& v0, double t);

// L2 norms of the propagated field (scalar L2 for sp parts).
std::vector<std::pair<double, double>> decay_probe(const Propagator& prop, const Part& part,
                                                   const ExtendedField& v0, const RVec& times);

// Relative discrepancy of the s_p integration-by-parts identity for scalar f and field g.
double ibp_check(const Propagator& prop, const CVec& f, const ExtendedField& g, double t);

// Multiply a field componentwise by a real scalar function.
ExtendedField scale_field(const CVec& f, const ExtendedField& g);

}  // namespace lle
