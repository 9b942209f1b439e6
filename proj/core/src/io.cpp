#include "lle/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lle {

using nlohmann::json;

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("profile: missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("profile: field '") + key + "' is not a number");
  return v.get<double>();
}

std::vector<double> get_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ParseError(std::string("profile: field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ParseError(std::string("profile: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

json series_json(const std::vector<std::pair<double, double>>& s) {
  json t = json::array(), v = json::array();
  for (const auto& [a, b] : s) {
    t.push_back(a);
    v.push_back(finite_or_null(b));
  }
  return {{"t", t}, {"value", v}};
}

}  // namespace

std::string profile_to_json(const WaveProfile& p) {
  json re = json::array(), im = json::array();
  for (const auto& c : p.coeffs) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  json j = {{"schema_version", kProfileSchemaVersion},
            {"alpha", p.params.alpha},
            {"beta", p.params.beta},
            {"F", p.params.F},
            {"T", p.period},
            {"K", p.n_modes},
            {"coeff_re", re},
            {"coeff_im", im},
            {"residual_norm", p.residual_norm}};
  return j.dump(2) + "\n";
}

WaveProfile profile_from_json(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ParseError("profile: empty document");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("profile: top level must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw ParseError("profile: missing field 'schema_version'");
  int ver = j["schema_version"].get<int>();
  if (ver != kProfileSchemaVersion)
    throw FormatVersionError("profile: schema_version " + std::to_string(ver) +
                                 " is not supported (expected " +
                                 std::to_string(kProfileSchemaVersion) + ")",
                             ver);
  if (!j.contains("K") || !j["K"].is_number_integer()) throw ParseError("profile: field 'K' must be an integer");
  int K = j["K"].get<int>();
  if (K < 0) throw ParseError("profile: field 'K' must be nonnegative");
  auto re = get_array(j, "coeff_re"), im = get_array(j, "coeff_im");
  const size_t want = 2 * static_cast<size_t>(K) + 1;
  if (re.size() != want)
    throw ParseError("profile: field 'coeff_re' has length " + std::to_string(re.size()) +
                     ", expected 2K+1 = " + std::to_string(want));
  if (im.size() != want)
    throw ParseError("profile: field 'coeff_im' has length " + std::to_string(im.size()) +
                     ", expected 2K+1 = " + std::to_string(want));
  WaveProfile p;
  p.params.alpha = get_num(j, "alpha");
  p.params.beta = get_num(j, "beta");
  p.params.F = get_num(j, "F");
  p.period = get_num(j, "T");
  p.residual_norm = get_num(j, "residual_norm");
  if (!(p.period > 0.0)) throw ParseError("profile: field 'T' must be positive");
  p.n_modes = K;
  p.coeffs.resize(want);
  bool even = true;
  for (size_t k = 0; k < want; ++k) p.coeffs[k] = cplx(re[k], im[k]);
  for (int l = 1; l <= K; ++l)
    if (p.coeffs[K + l] != p.coeffs[K - l]) even = false;
  p.even = even;
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

void save_profile(const WaveProfile& p, const std::string& path) { write_file(path, profile_to_json(p)); }

WaveProfile load_profile(const std::string& path) { return profile_from_json(read_file(path)); }

std::string spectrum_csv(const std::vector<SpectrumSlice>& slices) {
  std::string out = "xi,re,im\n";
  for (const auto& s : slices)
    for (const auto& z : s.eigenvalues)
      out += num17(s.xi) + "," + num17(z.real()) + "," + num17(z.imag()) + "\n";
  return out;
}

std::vector<SpectrumSlice> parse_spectrum_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "xi,re,im") throw ParseError("spectrum: bad header");
  std::vector<SpectrumSlice> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double xi, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &xi, &re, &im) != 3)
      throw ParseError("spectrum: malformed row '" + line + "'");
    if (out.empty() || out.back().xi != xi) out.push_back({xi, {}, std::nullopt});
    out.back().eigenvalues.emplace_back(re, im);
  }
  return out;
}

std::string stability_json(const StabilityReport& r) {
  json j = {{"verdict", r.verdict},
            {"cond_i", r.cond_i},
            {"cond_ii", r.cond_ii},
            {"cond_iii", r.cond_iii},
            {"theta_fit", finite_or_null(r.theta_fit)},
            {"spectral_gap_delta", finite_or_null(r.spectral_gap_delta)},
            {"max_real_part", finite_or_null(r.max_real_part)},
            {"lambda_c0", finite_or_null(r.lambda_c0)},
            {"translation_residual", finite_or_null(r.translation_residual)},
            {"adjoint_pairing", finite_or_null(r.adjoint_pairing)},
            {"marginal_count", r.marginal_count}};
  return j.dump(2) + "\n";
}

std::string critical_json(const CriticalCurve& c, double xi1) {
  json xs = json::array(), re = json::array(), im = json::array();
  for (size_t k = 0; k < c.xi_samples.size(); ++k) {
    xs.push_back(c.xi_samples[k]);
    re.push_back(c.lambda_c[k].real());
    im.push_back(c.lambda_c[k].imag());
  }
  json j = {{"a_fit", c.a_fit},   {"d_fit", c.d_fit}, {"fit_residual", c.fit_residual},
            {"xi1", xi1},         {"xi", xs},         {"lambda_re", re},
            {"lambda_im", im}};
  return j.dump(2) + "\n";
}

std::string decay_json(const DecayReport& r) {
  json fits = json::object();
  for (const auto& [tag, f] : r.fits)
    fits[tag] = {{"exponent", f.exponent},
                 {"r_squared", f.r_squared},
                 {"prefactor", f.prefactor},
                 {"n_samples", f.n_samples},
                 {"confirmed", r.confirmed.at(tag)}};
  json series = json::object();
  for (const auto& [tag, s] : r.series) series[tag] = series_json(s);
  json j = {{"fit_window", {r.fit_window.first, r.fit_window.second}},
            {"E0", r.E0},
            {"xi1", r.xi1},
            {"d_fit", r.d_fit},
            {"max_gamma_x", r.max_gamma_x},
            {"ordering_holds", r.ordering_holds},
            {"fits", fits},
            {"series", series}};
  return j.dump(2) + "\n";
}

std::string damping_json(const DampingReport& r) {
  auto arr = [](const RVec& v) {
    json a = json::array();
    for (double x : v) a.push_back(finite_or_null(x));
    return a;
  };
  json j = {{"j", r.j},
            {"K", finite_or_null(r.K)},
            {"C", finite_or_null(r.C)},
            {"control_ok", r.control_ok},
            {"integrated_ok", r.integrated_ok},
            {"verdict", r.verdict},
            {"t", arr(r.times)},
            {"energy", arr(r.energy)},
            {"deriv_sq", arr(r.deriv_sq)},
            {"l2_sq", arr(r.l2_sq)},
            {"integral", arr(r.integral)}};
  return j.dump(2) + "\n";
}

std::string norm_series_csv(const Trajectory& tr) {
  std::string out = "t,l2,d1,d2,d3,d4\n";
  for (size_t k = 0; k < tr.times.size(); ++k) {
    out += num17(tr.times[k]);
    for (double v : tr.norm_series[k]) out += "," + num17(v);
    out += "\n";
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'L', 'L', 'E', 'S', 'N', 'A', 'P', '1'};

template <class T>
void put(std::string& buf, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (size_t k = 0; k < sizeof(T); ++k) buf.push_back(static_cast<char>(b[sizeof(T) - 1 - k]));
  } else {
    buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(const std::string& buf, size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw ParseError("snapshots: truncated file");
  unsigned char b[sizeof(T)];
  std::memcpy(b, buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(b[k], b[sizeof(T) - 1 - k]);
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void save_snapshots(const Trajectory& tr, const std::string& path) {
  std::string buf(kMagic, 8);
  put<std::int32_t>(buf, tr.m_cells);
  put<std::int32_t>(buf, tr.n);
  put<double>(buf, tr.period);
  put<std::int32_t>(buf, 1);
  put<std::int32_t>(buf, tr.linearized ? 1 : 0);
  put<std::int32_t>(buf, static_cast<std::int32_t>(tr.snapshots.size()));
  for (size_t s = 0; s < tr.snapshots.size(); ++s) {
    put<double>(buf, tr.snapshot_times[s]);
    for (const auto& z : tr.snapshots[s].scalar()) {
      put<double>(buf, z.real());
      put<double>(buf, z.imag());
    }
  }
  write_file(path, buf);
}

Trajectory load_snapshots(const std::string& path) {
  std::string buf = read_file(path);
  if (buf.size() < 8 || std::memcmp(buf.data(), kMagic, 8) != 0)
    throw ParseError("snapshots: bad magic in '" + path + "'");
  size_t pos = 8;
  Trajectory tr;
  tr.m_cells = get<std::int32_t>(buf, pos);
  tr.n = get<std::int32_t>(buf, pos);
  tr.period = get<double>(buf, pos);
  int dtype = get<std::int32_t>(buf, pos);
  int content = get<std::int32_t>(buf, pos);
  int S = get<std::int32_t>(buf, pos);
  if (dtype != 1) throw ParseError("snapshots: unsupported dtype " + std::to_string(dtype));
  if (content != 0 && content != 1) throw ParseError("snapshots: unknown content flag");
  tr.linearized = content == 1;
  if (tr.m_cells < 1 || tr.n < 1 || S < 0 || !(tr.period > 0.0))
    throw ParseError("snapshots: invalid header");
  const size_t P = static_cast<size_t>(tr.m_cells) * tr.n;
  if (buf.size() != pos + static_cast<size_t>(S) * (8 + 16 * P))
    throw ParseError("snapshots: payload size does not match the header");
  for (int s = 0; s < S; ++s) {
    tr.snapshot_times.push_back(get<double>(buf, pos));
    CVec v(P);
    for (size_t k = 0; k < P; ++k) {
      double re = get<double>(buf, pos);
      v[k] = cplx(re, get<double>(buf, pos));
    }
    tr.snapshots.push_back(ExtendedField::from_scalar(v, tr.m_cells, tr.n, tr.period));
  }
  return tr;
}

}  // namespace lle
