#include <benchmark/benchmark.h>

#include "brisk/asymptotics.hpp"
#include "brisk/covariance.hpp"
#include "brisk/frontier.hpp"
#include "brisk/gaussian.hpp"
#include "brisk/qp.hpp"
#include "brisk/rng.hpp"
#include "brisk/simulator.hpp"
#include "brisk/tail.hpp"

namespace {

using namespace brisk;

void BM_NormalSource(benchmark::State& state) {
  rng::NormalSource normals(1, rng::StreamTag::sim_path, 0);
  double acc = 0.0;
  for (auto _ : state) {
    for (int i = 0; i < 1024; ++i) acc += normals();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_NormalSource);

void BM_SolveQp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto model = CovarianceModel::equicorrelated(d, 0.3);
  Eigen::VectorXd a(d);
  for (int i = 0; i < d; ++i) a[i] = 1.0 - 0.9 * i / d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_qp(model, a).objective);
  }
}
BENCHMARK(BM_SolveQp)->Arg(2)->Arg(6)->Arg(10)->Arg(14);

void BM_SolveEquicorrelated(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Eigen::VectorXd a(d);
  for (int i = 0; i < d; ++i) a[i] = 1.0 - 0.9 * i / d;
  const EquicorrSpec spec(d, 0.3, a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_equicorrelated(spec).objective);
  }
}
BENCHMARK(BM_SolveEquicorrelated)->Arg(6)->Arg(14);

void BM_StaircaseInsert(benchmark::State& state) {
  rng::NormalSource normals(2, rng::StreamTag::ia_path, 0);
  for (auto _ : state) {
    Staircase2d stairs;
    double w0 = 0.0, w1 = 0.0;
    for (int k = 0; k < 4096; ++k) {
      w0 += 0.015 * normals() - 2e-4;
      w1 += 0.015 * normals() - 2e-4;
      stairs.insert(w0, w1);
    }
    benchmark::DoNotOptimize(stairs.integral(1.0, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_StaircaseInsert);

void BM_SimulateRuin1d(benchmark::State& state) {
  const auto model = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(1, 1));
  Eigen::VectorXd a(1);
  a << 1.0;
  for (auto _ : state) {
    RuinScenario s{model, a, TrendDistribution::point_mass(Eigen::VectorXd::Zero(1)),
                   1.0, 2.0, 1024, 10000, 7};
    benchmark::DoNotOptimize(simulate_ruin(s).point);
  }
  state.SetItemsProcessed(state.iterations() * 10000 * 1024);
}
BENCHMARK(BM_SimulateRuin1d);

void BM_TiltedTail(benchmark::State& state) {
  const auto model = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd b(2);
  b << 5.0, 5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tail_probability(model, b, 100000, 7).point);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_TiltedTail);

}  // namespace

BENCHMARK_MAIN();
