#include "lle/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstring>
#include <numbers>
#include <regex>

#include "lle/parallel.hpp"

namespace lle {

double CutoffSpec::rho(double xi) const {
  double s = std::abs(xi);
  if (s <= 0.5 * xi1) return 1.0;
  if (s >= xi1) return 0.0;
  double z = (s - 0.5 * xi1) / (0.5 * xi1);
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

double CutoffSpec::chi(double t) {
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return 1.0;
  auto f = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
  double z = t - 1.0;
  return f(z) / (f(z) + f(1.0 - z));
}

Part Part::parse(const std::string& s) {
  if (s == "full") return {PartKind::Full};
  if (s == "Se") return {PartKind::Se};
  if (s == "Sc_tilde") return {PartKind::ScTilde};
  std::smatch m;
  static const std::regex re(R"(sp\((\d),(\d)\))");
  if (std::regex_match(s, m, re)) {
    Part p{PartKind::Sp, std::stoi(m[1]), std::stoi(m[2])};
    if (p.ell > 4 || p.j > 2) throw ConfigurationError("sp derivative orders limited to l<=4, j<=2");
    return p;
  }
  throw ValidationError("unknown semigroup part '" + s + "' (full|Se|Sc_tilde|sp(l,j))");
}

std::string Part::name() const {
  switch (kind) {
    case PartKind::Full: return "full";
    case PartKind::Se: return "Se";
    case PartKind::ScTilde: return "Sc_tilde";
    case PartKind::Sp: return "sp(" + std::to_string(ell) + "," + std::to_string(j) + ")";
  }
  return "?";
}

std::uint64_t profile_fingerprint(const WaveProfile& p) {
  // FNV-1a over the raw coefficient bytes and parameters
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* data, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (size_t k = 0; k < n; ++k) {
      h ^= b[k];
      h *= 1099511628211ull;
    }
  };
  mix(&p.params.alpha, sizeof(double));
  mix(&p.params.beta, sizeof(double));
  mix(&p.params.F, sizeof(double));
  mix(&p.period, sizeof(double));
  mix(p.coeffs.data(), p.coeffs.size() * sizeof(cplx));
  return h;
}

namespace {

EigenData plain_decompose(const BlochOperatorMatrix& m) {
  Eigen::ComplexEigenSolver<CMat> es(m.entries, true);
  if (es.info() != Eigen::Success)
    throw NumericalError("propagator: eigensolver failed at xi = " + std::to_string(m.xi));
  EigenData d;
  d.xi = m.xi;
  d.lambda = es.eigenvalues();
  d.V = es.eigenvectors();
  d.Vinv = Eigen::PartialPivLU<CMat>(d.V).inverse();
  d.cond = d.V.norm() * d.Vinv.norm() / static_cast<double>(d.V.rows());
  return d;
}

}  // namespace

Propagator::Propagator(const WaveProfile& p, int m_cells, int n_points, const PropagatorConfig& cfg)
    : m_cells_(m_cells),
      n_points_(n_points),
      K_(cfg.K < 0 ? n_points / 2 - 1 : cfg.K),
      period_(p.period),
      fingerprint_(profile_fingerprint(p)),
      cfg_(cfg) {
  if (m_cells < 1 || n_points < 8 || n_points % 2)
    throw ValidationError("propagator: need M >= 1 and even N >= 8");
  if (2 * K_ + 1 >= n_points) throw ValidationError("propagator: K must satisfy 2K+1 < N");
  if (!(cfg.cutoffs.xi1 > 0.0)) throw ConfigurationError("propagator: xi1 must be positive");
  labels_ = bloch_labels(m_cells);
  const int nl = static_cast<int>(labels_.size());
  MultiplierTables tab = multiplier_tables(p, K_);
  dphi_ = profile_vec(p, K_, 1);
  data_.resize(nl);
  fallback_.resize(nl);
  support_.assign(nl, false);
  for (int a = 0; a < nl; ++a)
    support_[a] = cfg.cutoffs.rho(bloch_xi(labels_[a], m_cells, period_)) > 0.0;

  // critical continuation outward from xi = 0 through the support
  int zero = -1;
  for (int a = 0; a < nl; ++a)
    if (labels_[a] == 0) zero = a;
  data_[zero] = decompose(assemble_bloch(p, tab, 0.0), dphi_, dphi_);
  for (int dir : {1, -1}) {
    CVecE ref = data_[zero].pair.phi_vec;
    for (int a = zero + dir; a >= 0 && a < nl && support_[a]; a += dir) {
      data_[a] = decompose(assemble_bloch(p, tab, bloch_xi(labels_[a], m_cells, period_)), ref, dphi_);
      ref = data_[a].pair.phi_vec;
    }
  }
  for (int a = 0; a < nl; ++a)
    if (support_[a] && data_[a].crit < 0)
      throw NumericalError("propagator: rho support is not connected to xi = 0");
  if (!cfg.support_only) {
    std::vector<int> rest;
    for (int a = 0; a < nl; ++a)
      if (!support_[a]) rest.push_back(a);
    parallel_for(static_cast<int>(rest.size()), [&](int k) {
      int a = rest[k];
      data_[a] = plain_decompose(assemble_bloch(p, tab, bloch_xi(labels_[a], m_cells, period_)));
    });
  }
  for (int a = 0; a < nl; ++a) {
    if (cfg.support_only && !support_[a]) continue;
    bool fb = cfg.expm_method == ExpmMethod::ScalingSquaring ||
              (cfg.expm_method == ExpmMethod::Auto && data_[a].cond > cfg.cond_limit);
    if (fb) {
      fallback_[a] = assemble_bloch(p, tab, bloch_xi(labels_[a], m_cells, period_)).entries;
      ++fallback_count_;
    }
  }
}

void Propagator::check_field(const ExtendedField& f) const {
  f.validate();
  if (f.m_cells != m_cells_ || f.n != n_points_ || std::abs(f.period - period_) > 1e-12 * period_)
    throw ValidationError("propagator: field grid is not commensurate with the cached eigendata");
}

std::vector<CVecE> Propagator::to_vectors(const ExtendedField& f) const {
  check_field(f);
  const int M = m_cells_, P = f.size(), n = 2 * K_ + 1;
  const double dx = f.dx();
  CVec Gr = fft(f.r), Gi = fft(f.i);
  std::vector<CVecE> out(labels_.size(), CVecE(2 * n));
  for (size_t a = 0; a < labels_.size(); ++a) {
    for (int l = -K_; l <= K_; ++l) {
      int k = ((l * M + labels_[a]) % P + P) % P;
      out[a](l + K_) = dx * Gr[k];
      out[a](n + l + K_) = dx * Gi[k];
    }
  }
  return out;
}

ExtendedField Propagator::from_vectors(const std::vector<CVecE>& v) const {
  const int M = m_cells_, P = M * n_points_, n = 2 * K_ + 1;
  ExtendedField f(M, n_points_, period_);
  const double dx = f.dx();
  CVec Gr(P), Gi(P);
  for (size_t a = 0; a < labels_.size(); ++a) {
    for (int l = -K_; l <= K_; ++l) {
      int k = ((l * M + labels_[a]) % P + P) % P;
      Gr[k] = v[a](l + K_) / dx;
      Gi[k] = v[a](n + l + K_) / dx;
    }
  }
  f.r = ifft(Gr);
  f.i = ifft(Gi);
  return f;
}

CVec Propagator::scalar_from_bloch(const CVec& s) const {
  const int P = m_cells_ * n_points_;
  const double dx = period_ / n_points_;
  CVec G(P);
  for (size_t a = 0; a < labels_.size(); ++a) G[((labels_[a] % P) + P) % P] = s[a] / dx;
  return ifft(G);
}

CVecE Propagator::evolve(int a, const CVecE& c, double t, bool drop_critical) const {
  const EigenData& d = data_[a];
  if (d.V.size() == 0) throw ConfigurationError("propagator: eigendata missing for this xi");
  if (fallback_[a].size() != 0) {
    CVecE out = (fallback_[a] * t).exp() * c;
    if (drop_critical) {
      cplx g = vec_inner(d.pair.phi_tilde_vec, c, period_);
      out -= std::exp(d.pair.lambda_c * t) * g * d.pair.phi_vec;
    }
    return out;
  }
  CVecE coef = d.Vinv * c;
  for (int k = 0; k < coef.size(); ++k) coef(k) *= std::exp(d.lambda(k) * t);
  if (drop_critical) coef(d.crit) = 0.0;
  return d.V * coef;
}

ExtendedField Propagator::apply(const Part& part, const ExtendedField& v0, double t) const {
  if (t < 0.0) throw DomainError("apply_propagator: t must be nonnegative");
  if (part.kind == PartKind::Sp) {
    ExtendedField out(m_cells_, n_points_, period_);
    out.r = apply_sp(part.ell, part.j, v0, t);
    return out;
  }
  if (cfg_.support_only && part.kind != PartKind::ScTilde)
    throw ConfigurationError("propagator: eigendata cached on supp(rho) only");
  std::vector<CVecE> c = to_vectors(v0);
  const int nl = static_cast<int>(labels_.size());
  std::vector<CVecE> out(nl);
  const double chi = CutoffSpec::chi(t);
  parallel_for(nl, [&](int a) {
    double xi = bloch_xi(labels_[a], m_cells_, period_);
    double r = support_[a] ? cfg_.cutoffs.rho(xi) : 0.0;
    switch (part.kind) {
      case PartKind::Full:
        out[a] = evolve(a, c[a], t, false);
        break;
      case PartKind::Se:
        out[a] = (1.0 - r) * evolve(a, c[a], t, false);
        if (r > 0.0) out[a] += r * evolve(a, c[a], t, true);
        break;
      case PartKind::ScTilde: {
        out[a] = CVecE::Zero(c[a].size());
        if (r > 0.0) {
          const BlochEigenpair& pr = data_[a].pair;
          cplx g = vec_inner(pr.phi_tilde_vec, c[a], period_);
          out[a] = (r * std::exp(pr.lambda_c * t) * g) * (pr.phi_vec - chi * dphi_);
        }
        break;
      }
      case PartKind::Sp:
        break;
    }
  });
  return from_vectors(out);
}

CVec Propagator::projection_coefficients(const ExtendedField& v) const {
  std::vector<CVecE> c = to_vectors(v);
  CVec s(labels_.size());
  for (size_t a = 0; a < labels_.size(); ++a) {
    if (!support_[a]) continue;
    double r = cfg_.cutoffs.rho(bloch_xi(labels_[a], m_cells_, period_));
    s[a] = r * vec_inner(data_[a].pair.phi_tilde_vec, c[a], period_);
  }
  return s;
}

CVec Propagator::projection_coefficients_dx(const ExtendedField& v) const {
  std::vector<CVecE> c = to_vectors(v);
  const int n = 2 * K_ + 1;
  const double q = 2.0 * std::numbers::pi / period_;
  CVec s(labels_.size());
  for (size_t a = 0; a < labels_.size(); ++a) {
    if (!support_[a]) continue;
    CVecE d = data_[a].pair.phi_tilde_vec;
    for (int l = -K_; l <= K_; ++l) {
      d(l + K_) *= cplx(0.0, q * l);
      d(n + l + K_) *= cplx(0.0, q * l);
    }
    double r = cfg_.cutoffs.rho(bloch_xi(labels_[a], m_cells_, period_));
    s[a] = r * vec_inner(d, c[a], period_);
  }
  return s;
}

CVec Propagator::apply_sp(int ell, int j, const ExtendedField& v0, double t) const {
  if (t < 0.0) throw DomainError("apply_propagator: t must be nonnegative");
  if (ell < 0 || ell > 4 || j < 0 || j > 2)
    throw ConfigurationError("sp derivative orders limited to l<=4, j<=2");
  CVec s = projection_coefficients(v0);
  const double chi = CutoffSpec::chi(t);
  for (size_t a = 0; a < labels_.size(); ++a) {
    if (!support_[a]) continue;
    double xi = bloch_xi(labels_[a], m_cells_, period_);
    cplx lam = data_[a].pair.lambda_c;
    s[a] *= chi * std::pow(cplx(0.0, xi), ell) * std::pow(lam, j) * std::exp(lam * t);
  }
  return scalar_from_bloch(s);
}

ExtendedField apply_propagator(const Propagator& prop, const WaveProfile& p, const Part& part,
                               const ExtendedField& v0, double t) {
  if (profile_fingerprint(p) != prop.fingerprint())
    throw ConfigurationError("apply_propagator: cached eigendata belong to a different profile");
  return prop.apply(part, v0, t);
}

std::vector<std::pair<double, double>> decay_probe(const Propagator& prop, const Part& part,
                                                   const ExtendedField& v0, const RVec& times) {
  for (size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw DomainError("decay_probe: times must increase");
  std::vector<std::pair<double, double>> out;
  const double dx = prop.period() / prop.n_points();
  for (double t : times) {
    if (part.kind == PartKind::Sp) {
      out.emplace_back(t, l2_norm(prop.apply_sp(part.ell, part.j, v0, t), dx));
    } else {
      out.emplace_back(t, l2_norm(prop.apply(part, v0, t)));
    }
  }
  return out;
}

ExtendedField scale_field(const CVec& f, const ExtendedField& g) {
  ExtendedField out = g;
  for (int k = 0; k < g.size(); ++k) {
    out.r[k] *= f[k];
    out.i[k] *= f[k];
  }
  return out;
}

double ibp_check(const Propagator& prop, const CVec& f, const ExtendedField& g, double t) {
  const int P = g.size(), N = g.n;
  if (static_cast<int>(f.size()) != P) throw ValidationError("ibp_check: f and g grids differ");
  double fmax = 0.0, gmax = 0.0, fedge = 0.0, gedge = 0.0;
  for (int k = 0; k < P; ++k) {
    double gv = std::sqrt(std::norm(g.r[k]) + std::norm(g.i[k]));
    fmax = std::max(fmax, std::abs(f[k]));
    gmax = std::max(gmax, gv);
    if (k < N || k >= P - N) {
      fedge = std::max(fedge, std::abs(f[k]));
      gedge = std::max(gedge, gv);
    }
  }
  // the product f g must vanish near the torus seam
  if (fedge * gedge > 1e-12 * std::max(fmax * gmax, 1e-300) && fmax * gmax > 0.0)
    throw DomainError("ibp_check: support of f*g touches the domain boundary");
  const double L = g.length(), dx = g.dx();
  CVec fx = spectral_derivative(f, L, 1);
  ExtendedField gx = spectral_derivative(g, 1);
  ExtendedField f_gx = scale_field(f, gx), fx_g = scale_field(fx, g), fg = scale_field(f, g);

  CVec lhs = prop.apply_sp(0, 0, f_gx, t);
  CVec a = prop.apply_sp(0, 0, fx_g, t);
  CVec b = prop.apply_sp(1, 0, fg, t);
  CVec s = prop.projection_coefficients_dx(fg);
  const double chi = CutoffSpec::chi(t);
  for (size_t k = 0; k < prop.labels().size(); ++k) {
    if (!prop.in_support()[k]) continue;
    s[k] *= chi * std::exp(prop.eigendata()[k].pair.lambda_c * t);
  }
  CVec corr = prop.scalar_from_bloch(s);
  CVec diff(P);
  for (int k = 0; k < P; ++k) diff[k] = lhs[k] - (-a[k] + b[k] - corr[k]);
  double nl = l2_norm(lhs, dx), nd = l2_norm(diff, dx);
  if (nl == 0.0) return nd;
  return nd / nl;
}

}  // namespace lle
