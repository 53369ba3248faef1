// Parallel kernels against their serial references.

#include <random>

#include <benchmark/benchmark.h>

#include "gcnet/causality.hpp"
#include "gcnet/netmetrics.hpp"
#include "gcnet/pena_rodriguez.hpp"

namespace {

std::vector<gcnet::QInput> pair_batch(std::size_t pairs, std::size_t length) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  std::vector<gcnet::QInput> out(pairs);
  for (auto& in : out) {
    in.effect.resize(length);
    in.cause.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
      in.effect[t] = z(rng);
      in.cause[t] = z(rng);
    }
  }
  return out;
}

gcnet::WindowNetwork random_network(std::size_t n, double density) {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(density);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && coin(rng)) edges.emplace_back(i, j);
    }
  }
  return gcnet::network_from_edges(n, edges);
}

void BM_QBatch(benchmark::State& state) {
  const auto batch = pair_batch(380, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gcnet::hong_q_batch(batch, 5));
}

void BM_QBatchSerial(benchmark::State& state) {
  const auto batch = pair_batch(380, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gcnet::hong_q_batch_serial(batch, 5));
}

void BM_PenaNull(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gcnet::pena_rodriguez_null(64, 10, 500, 3));
}

void BM_PenaNullSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gcnet::pena_rodriguez_null_serial(64, 10, 500, 3));
}

void BM_Harmonic(benchmark::State& state) {
  const auto net = random_network(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(gcnet::harmonic_all(net));
}

void BM_HarmonicSerial(benchmark::State& state) {
  const auto net = random_network(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(gcnet::harmonic_all_serial(net));
}

}  // namespace

BENCHMARK(BM_QBatch)->Arg(64)->Arg(500);
BENCHMARK(BM_QBatchSerial)->Arg(64)->Arg(500);
BENCHMARK(BM_PenaNull);
BENCHMARK(BM_PenaNullSerial);
BENCHMARK(BM_Harmonic)->Arg(20)->Arg(500);
BENCHMARK(BM_HarmonicSerial)->Arg(20)->Arg(500);

BENCHMARK_MAIN();
