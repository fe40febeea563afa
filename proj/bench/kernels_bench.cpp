// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "noncyclic/classgroup.hpp"
#include "noncyclic/density.hpp"
#include "noncyclic/families.hpp"
#include "noncyclic/sieve.hpp"

using namespace noncyclic;

namespace {

Exec mode(const benchmark::State & s)
{
    return s.range(0) ? Exec::parallel : Exec::serial;
}

void squarefree_sieve(benchmark::State & s)
{
    for (auto _ : s)
        benchmark::DoNotOptimize(arith::squarefree_sieve(20'000'000, mode(s)));
}

void class_group_sweep(benchmark::State & s)
{
    std::vector<classgroup::Discriminant> discs;
    for (std::uint64_t d = 1'000'000; d < 1'002'000; ++d) {
        if (arith::is_squarefree(big_u(d)))
            discs.push_back(classgroup::fundamental_discriminant(big_u(d)));
    }
    for (auto _ : s)
        benchmark::DoNotOptimize(classgroup::sweep(discs, mode(s)));
}

void census(benchmark::State & s)
{
    const classgroup::AbelianStructure H{{3, 3}};
    for (auto _ : s)
        benchmark::DoNotOptimize(density::census_nh(20000, H, mode(s)));
}

void rho_brute(benchmark::State & s)
{
    const auto f = density::PolySpec::rank2(5);
    for (auto _ : s)
        benchmark::DoNotOptimize(density::rho(f, 121, mode(s)));
}

void scan_rank2(benchmark::State & s)
{
    families::ScanOptions o;
    o.exec = mode(s);
    for (auto _ : s)
        benchmark::DoNotOptimize(families::scan_rank2(5, {1, 15}, {1, 15}, {1, 8}, o));
}

void n_p_empirical(benchmark::State & s)
{
    const auto f = density::PolySpec::rank2(3);
    const families::IntRange box[] = {{1, 40}, {1, 40}, {1, 12}};
    for (auto _ : s)
        benchmark::DoNotOptimize(density::n_p_empirical(f, box, mode(s)));
}

} // namespace

BENCHMARK(squarefree_sieve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(class_group_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(census)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(rho_brute)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(scan_rank2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(n_p_empirical)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
