// Races each OpenMP kernel against its serial reference on realistic shapes.
// The parallel variants are element-parallel with a fixed per-element
// accumulation order, so the outputs are bitwise identical; this target shows
// what the parallelism buys (nothing on one core, proportionally more with
// OMP_NUM_THREADS > 1).
#include <cstddef>
#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "xaudit/kernels.hpp"
#include "xaudit/matrix.hpp"
#include "xaudit/rng.hpp"

namespace {

using namespace xaudit;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (double& v : m.data) v = rng.normal();
  return m;
}

void BM_GemmOmp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  const Matrix b = random_matrix(n, n, 2);
  Matrix c;
  for (auto _ : state) {
    gemm(a, false, b, false, c);
    benchmark::DoNotOptimize(c.data.data());
  }
}
BENCHMARK(BM_GemmOmp)->Arg(64)->Arg(256)->Arg(512);

void BM_GemmSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  const Matrix b = random_matrix(n, n, 2);
  Matrix c;
  for (auto _ : state) {
    gemm_serial(a, false, b, false, c);
    benchmark::DoNotOptimize(c.data.data());
  }
}
BENCHMARK(BM_GemmSerial)->Arg(64)->Arg(256)->Arg(512);

void BM_PearsonOmp(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(4096, d, 3);
  const ColumnStats stats = column_stats(x);
  Matrix r;
  std::vector<std::uint8_t> defined;
  for (auto _ : state) {
    pearson_kernel(x, stats, r, defined);
    benchmark::DoNotOptimize(r.data.data());
  }
}
BENCHMARK(BM_PearsonOmp)->Arg(16)->Arg(64);

void BM_PearsonSerial(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(4096, d, 3);
  const ColumnStats stats = column_stats(x);
  Matrix r;
  std::vector<std::uint8_t> defined;
  for (auto _ : state) {
    pearson_kernel_serial(x, stats, r, defined);
    benchmark::DoNotOptimize(r.data.data());
  }
}
BENCHMARK(BM_PearsonSerial)->Arg(16)->Arg(64);

struct SplitFixture {
  Matrix x;
  std::vector<int> y;
  std::vector<std::size_t> rows;

  explicit SplitFixture(std::size_t n, std::size_t d) {
    x = random_matrix(n, d, 4);
    Rng rng(5);
    y.resize(n);
    rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < 0.3 ? 1 : 0;
      rows[i] = i;
    }
  }
};

void BM_SplitScanOmp(benchmark::State& state) {
  const SplitFixture f(static_cast<std::size_t>(state.range(0)), 20);
  for (auto _ : state) {
    SplitCandidate c = best_split_scan(f.x, f.y, f.rows, SplitCriterion::kGini);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_SplitScanOmp)->Arg(2048)->Arg(16384);

void BM_SplitScanSerial(benchmark::State& state) {
  const SplitFixture f(static_cast<std::size_t>(state.range(0)), 20);
  for (auto _ : state) {
    SplitCandidate c =
        best_split_scan_serial(f.x, f.y, f.rows, SplitCriterion::kGini);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_SplitScanSerial)->Arg(2048)->Arg(16384);

// A linear value function keeps the benchmark about the hybrid-row assembly
// and batching, not about any particular model.
BatchFn linear_fn(std::size_t d) {
  std::vector<double> w(d);
  Rng rng(6);
  for (double& v : w) v = rng.normal();
  return [w](const Matrix& x) {
    std::vector<double> out(x.rows, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double* row = x.row_ptr(i);
      double s = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * row[j];
      out[i] = s;
    }
    return out;
  };
}

struct CoalitionFixture {
  std::size_t m;
  Matrix background;
  std::vector<double> x;
  std::vector<std::uint8_t> masks;
  std::size_t n_masks;
  BatchFn fn;

  explicit CoalitionFixture(std::size_t features)
      : m(features),
        background(random_matrix(100, features, 7)),
        fn(linear_fn(features)) {
    Rng rng(8);
    x.resize(m);
    for (double& v : x) v = rng.normal();
    n_masks = 1024;
    masks.resize(n_masks * m);
    for (std::uint8_t& b : masks) b = rng.uniform() < 0.5 ? 1 : 0;
  }
};

void BM_CoalitionOmp(benchmark::State& state) {
  const CoalitionFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = coalition_values(f.fn, f.x.data(), f.m, f.background, f.masks,
                              f.n_masks);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_CoalitionOmp)->Arg(12)->Arg(24);

void BM_CoalitionSerial(benchmark::State& state) {
  const CoalitionFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = coalition_values_serial(f.fn, f.x.data(), f.m, f.background,
                                     f.masks, f.n_masks);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_CoalitionSerial)->Arg(12)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
