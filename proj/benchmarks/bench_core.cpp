#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "slag/subsol.hpp"

using namespace slag;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> sample_vector(int n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& v : a) v = u(rng);
  return a;
}

void BM_ElemSymDouble(benchmark::State& state) {
  const auto a = sample_vector(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(elem_sym_all(std::span<const double>(a)));
}
BENCHMARK(BM_ElemSymDouble)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_ElemSymRational(benchmark::State& state) {
  std::vector<Rational> a;
  for (int i = 0; i < state.range(0); ++i) a.emplace_back(i + 2, 2 * i + 3);
  for (auto _ : state) benchmark::DoNotOptimize(elem_sym_all(std::span<const Rational>(a)));
}
BENCHMARK(BM_ElemSymRational)->Arg(4)->Arg(8)->Arg(16);

void BM_RayRoots(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhaseSpec spec(n, (n - 1) * pi / 2);
  std::mt19937_64 rng(2);
  const EigenVector a = random_level_set_point(spec, rng, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(Z_ray_roots(spec, a.values()));
}
BENCHMARK(BM_RayRoots)->DenseRange(3, 8);

void BM_ImplicitPsi(benchmark::State& state) {
  const PhaseSpec spec(5, 2 * pi);
  const ImplicitPsi implicit{PsiField(spec, isotropic_point(spec))};
  double r = 1.0;
  for (auto _ : state) {
    r = r > 1e4 ? 1.0 : r * 1.37;
    benchmark::DoNotOptimize(implicit.excess(3.0, r));
  }
}
BENCHMARK(BM_ImplicitPsi);

void BM_NumericPsi(benchmark::State& state) {
  const PhaseSpec spec(5, 2 * pi);
  const PsiField field(spec, isotropic_point(spec));
  const auto radii = log_spaced_radii(1e4, 16);
  for (auto _ : state) benchmark::DoNotOptimize(solve_psi_numeric(field, 3.0, radii));
}
BENCHMARK(BM_NumericPsi);

void BM_VerifyShells(benchmark::State& state) {
  SubsolutionSpec s;
  s.beta = 3;
  s.theta = 3 * pi / 2;
  s.A = Eigen::MatrixXd::Identity(4, 4) * std::tan(3 * pi / 8);
  const Subsolution sub(s);
  VerificationGrid grid;
  grid.shells = static_cast<int>(state.range(0));
  grid.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(verify_subsolution(sub, grid));
}
BENCHMARK(BM_VerifyShells)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
