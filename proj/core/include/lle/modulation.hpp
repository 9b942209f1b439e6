#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lle/dynamics.hpp"
#include "lle/semigroup.hpp"

namespace lle {

class SamplingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// gamma = inverse Bloch of rho(xi) <Phi~_xi, (psi - phi)_check(xi)>. Needs the propagator's
// critical eigendata on supp(rho).
PhaseField extract_phase(const Propagator& eig, const WaveProfile& p, const ExtendedField& psi,
                         double t = 0.0);

// psi(x - gamma(x)) via barycentric trigonometric interpolation on the torus.
ExtendedField shifted_state(const ExtendedField& psi, const PhaseField& gamma);
// v = psi(x - gamma) - phi
ExtendedField modulated_perturbation(const WaveProfile& p, const ExtendedField& psi,
                                     const PhaseField& gamma);
// ||psi(. - gamma) - phi||_{L2}
double modulated_residual(const WaveProfile& p, const ExtendedField& psi, const PhaseField& gamma);

struct DecayFit {
  double exponent = 0.0;
  double r_squared = 0.0;
  double prefactor = 0.0;
  int n_samples = 0;
};

// Least squares of log(value) against log(1 + t) on [t_min, t_max].
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series,
                   std::pair<double, double> window);
// Least squares of log(value) against t; exponent holds the slope (-rate).
DecayFit fit_exponential(const std::vector<std::pair<double, double>>& series,
                         std::pair<double, double> window);

inline const std::array<const char*, 5> kDecayTags = {"unmod_L2", "gamma_L2", "mod_L2",
                                                      "gamma_x_H3", "gamma_t_H2"};

struct DecayReport {
  std::pair<double, double> fit_window;
  std::map<std::string, DecayFit> fits;
  std::map<std::string, bool> confirmed;  // r^2 >= 0.9
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double E0 = 0.0;
  double xi1 = 0.0;
  double d_fit = 0.0;
  double max_gamma_x = 0.0;
  bool ordering_holds = true;  // modulated residual <= unmodulated for t >= t_min
};

struct PerturbationSpec {
  std::string kind = "translational";  // "plain": Gaussian in v_r; "translational": G(x) phi'(x)
  double sigma = 2.0;
  double center_offset = 0.25;  // cells past the torus midpoint
  double E0 = 1e-2;             // target ||v0||_{L1} + ||v0||_{H4}; <= 0 selects unit L1 mass
};

// ||v||_{L1} + ||v||_{H4}
double initial_size(const ExtendedField& v);
ExtendedField make_perturbation(const WaveProfile& p, int m_cells, int n, const PerturbationSpec& s);

struct DecayOptions {
  double t_min = 10.0;
  double t_max_cap = -1.0;  // optional user cap on the fit window
  int K = -1;
  double delta1 = 0.05;
};

// Phase extraction and decay fits over the snapshots of a trajectory.
DecayReport analyze_decay(const WaveProfile& p, const Trajectory& tr, const DecayOptions& opt);

struct DampingReport {
  int j = 0;
  RVec times;
  RVec energy;       // E~_j(t)
  RVec deriv_sq;     // ||d^j v||^2
  RVec l2_sq;        // ||v||^2
  RVec integral;     // int_0^t e^{-(t-s)} ||v(s)||^2 ds
  double K = 0.0;
  double C = 0.0;
  bool control_ok = false;
  bool integrated_ok = false;
  bool verdict = false;
};

DampingReport damping_report(const WaveProfile& p, const Trajectory& tr, int j);

struct MeanValueReport {
  double lhs = 0.0;  // ||v - v~||
  double rhs = 0.0;  // (||phi'||_inf + ||v~||_H2) ||gamma||_L2
  double ratio = 0.0;
  bool ok = false;
};

MeanValueReport mean_value_check(const WaveProfile& p, const ExtendedField& psi,
                                 const PhaseField& gamma);

// 4th-order finite differences in time on uniformly spaced samples (one-sided at the ends).
std::vector<RVec> time_derivative(const std::vector<RVec>& g, double h);

}  // namespace lle
