#pragma once

#include <string>
#include <vector>

#include "lle/bloch.hpp"
#include "lle/critical.hpp"
#include "lle/dynamics.hpp"
#include "lle/modulation.hpp"
#include "lle/profile.hpp"

namespace lle {

inline constexpr int kProfileSchemaVersion = 1;

class FormatVersionError : public ParseError {
 public:
  FormatVersionError(const std::string& what, int found) : ParseError(what), found(found) {}
  int found;
};

// Profile document: schema_version, alpha, beta, F, T, K, coeff_re, coeff_im, residual_norm.
std::string profile_to_json(const WaveProfile& p);
WaveProfile profile_from_json(const std::string& text);
void save_profile(const WaveProfile& p, const std::string& path);
WaveProfile load_profile(const std::string& path);

// "xi,re,im" with rows grouped by ascending xi, eigenvalues by descending real part.
std::string spectrum_csv(const std::vector<SpectrumSlice>& slices);
std::vector<SpectrumSlice> parse_spectrum_csv(const std::string& text);

std::string stability_json(const StabilityReport& r);
std::string critical_json(const CriticalCurve& c, double xi1);
std::string decay_json(const DecayReport& r);
std::string damping_json(const DampingReport& r);

// t, ||v||, ||v_x||, ..., ||d^4 v||
std::string norm_series_csv(const Trajectory& tr);

// Snapshot container, all little-endian:
//   8 bytes  magic "LLESNAP1"
//   int32    M, N
//   float64  T
//   int32    dtype (1 = complex128 as (re, im) float64 pairs)
//   int32    content (0 = full state psi, 1 = perturbation from a linearized run)
//   int32    snapshot count S
//   S times: float64 t, then M*N complex pairs of the scalar field
// The dense norm series is not stored; a loaded trajectory carries snapshots only.
void save_snapshots(const Trajectory& tr, const std::string& path);
Trajectory load_snapshots(const std::string& path);

// Whole-file helpers; failures raise ValidationError naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lle
