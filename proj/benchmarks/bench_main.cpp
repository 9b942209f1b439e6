#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "lle/modulation.hpp"

using namespace lle;

namespace {

constexpr double kT = 2 * std::numbers::pi;

const WaveProfile& wave() {
  static const WaveProfile p = solve_profile(bifurcation_seed(1.0, 0.04));
  return p;
}

ExtendedField noise(int m, int n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  ExtendedField f(m, n, kT);
  for (int k = 0; k < f.size(); ++k) f.r[k] = 1e-3 * nd(rng);
  return f;
}

Propagator propagator(int m, int n) {
  PropagatorConfig cfg;
  cfg.cutoffs.xi1 = 0.25;
  return Propagator(wave(), m, n, cfg);
}

}  // namespace

static void BM_Fft(benchmark::State& st) {
  CVec x(st.range(0), cplx(1.0, 0.5));
  for (auto _ : st) benchmark::DoNotOptimize(fft(x));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

static void BM_BlochTransform(benchmark::State& st) {
  ExtendedField f = noise(st.range(0), 64);
  for (auto _ : st) benchmark::DoNotOptimize(bloch_transform(f));
}
BENCHMARK(BM_BlochTransform)->Arg(16)->Arg(64)->Arg(256);

static void BM_AssembleAndEigensolve(benchmark::State& st) {
  const int K = st.range(0);
  MultiplierTables tab = multiplier_tables(wave(), K);
  for (auto _ : st) benchmark::DoNotOptimize(spectrum_slice(assemble_bloch(wave(), tab, 0.1)));
}
BENCHMARK(BM_AssembleAndEigensolve)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_VerifyStability(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(verify_stability(wave(), 64, 16));
}
BENCHMARK(BM_VerifyStability)->Unit(benchmark::kMillisecond);

static void BM_PropagatorSetup(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(propagator(st.range(0), 32));
}
BENCHMARK(BM_PropagatorSetup)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PropagatorApply(benchmark::State& st) {
  Propagator prop = propagator(64, 32);
  ExtendedField v = noise(64, 32);
  Part full = Part::parse("full");
  for (auto _ : st) benchmark::DoNotOptimize(prop.apply(full, v, 10.0));
}
BENCHMARK(BM_PropagatorApply)->Unit(benchmark::kMillisecond);

static void BM_EtdRk4Steps(benchmark::State& st) {
  SimConfig cfg;
  cfg.m_cells = st.range(0);
  cfg.n_per_cell = 64;
  cfg.dt = 0.02;
  cfg.t_end = 2.0;  // 100 steps
  cfg.snapshot_stride = 100;
  ExtendedField v0 = noise(cfg.m_cells, 64);
  for (auto _ : st) benchmark::DoNotOptimize(run_lle(wave(), v0, cfg));
  st.SetItemsProcessed(st.iterations() * 100);
}
BENCHMARK(BM_EtdRk4Steps)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ShiftedState(benchmark::State& st) {
  const int m = st.range(0), n = 32;
  ExtendedField psi = noise(m, n);
  PhaseField g;
  g.m_cells = m;
  g.n = n;
  g.period = kT;
  g.values.resize(m * n);
  for (int k = 0; k < m * n; ++k) g.values[k] = 0.01 * std::sin(2 * std::numbers::pi * k / (m * n));
  for (auto _ : st) benchmark::DoNotOptimize(shifted_state(psi, g));
}
BENCHMARK(BM_ShiftedState)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
