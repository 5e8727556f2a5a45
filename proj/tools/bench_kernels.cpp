// Serial reference kernels against their OpenMP versions.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "ratapprox/kernels.hpp"
#include "ratapprox/loewner.hpp"
#include "ratapprox/sampling.hpp"
#include "ratapprox/special_fn.hpp"

using namespace ratapprox;

namespace {

const loewner::DataPartition& bessel_partition()
{
    static const auto part = loewner::partition(
        sample_oracle(structured_grid(Domain::omega(), 101, 21), special::bessel_oracle()));
    return part;
}

struct Columns {
    std::vector<Complex> mu, v, lambda, w;
};

const Columns& columns()
{
    static const Columns c = [] {
        Columns out;
        for (const auto& s : bessel_partition().left) {
            out.mu.push_back(s.point);
            out.v.push_back(s.value);
        }
        for (const auto& s : bessel_partition().right) {
            out.lambda.push_back(s.point);
            out.w.push_back(s.value);
        }
        return out;
    }();
    return c;
}

std::vector<Complex> dense_grid(std::size_t n)
{
    std::vector<Complex> pts;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            pts.emplace_back(10.0 * static_cast<double>(i) / static_cast<double>(n - 1),
                             -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1));
        }
    }
    return pts;
}

void BM_LoewnerSerial(benchmark::State& state)
{
    const auto& c = columns();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::serial::loewner_matrices(c.mu, c.v, c.lambda, c.w));
    }
}

void BM_LoewnerParallel(benchmark::State& state)
{
    const auto& c = columns();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::parallel::loewner_matrices(c.mu, c.v, c.lambda, c.w));
    }
}

void BM_OracleSerial(benchmark::State& state)
{
    const auto pts = dense_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::serial::evaluate(special::bessel_j0, pts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_OracleParallel(benchmark::State& state)
{
    const auto pts = dense_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::parallel::evaluate(special::bessel_j0, pts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

} // namespace

BENCHMARK(BM_LoewnerSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoewnerParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv)
{
    benchmark::Initialize(&argc, argv);
    benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
