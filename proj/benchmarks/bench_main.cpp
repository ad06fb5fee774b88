#include "fdisk/factor.hpp"
#include "fdisk/jets.hpp"

#include <benchmark/benchmark.h>

using namespace fdisk;

static void BM_DualBasisResidue(benchmark::State& st) {
    auto ps = PointSet::symbolic(static_cast<int>(st.range(0)));
    for (auto _ : st)
        for (int k = -3; k <= 3; ++k) {
            ACoeff r = (DiskFun::dual_basis(ps, {1, k}) * DiskFun::basis(ps, {1, -k - 1})).residue();
            benchmark::DoNotOptimize(r);
        }
}
BENCHMARK(BM_DualBasisResidue)->Arg(1)->Arg(2)->Arg(3);

static void BM_PointSetBuild(benchmark::State& st) {
    int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(PointSet::symbolic(n));
}
BENCHMARK(BM_PointSetBuild)->Arg(2)->Arg(3)->Arg(4);

static void BM_TaylorRemainder(benchmark::State& st) {
    auto ps = PointSet::symbolic(2);
    std::mt19937 rng(1);
    DiskFun f = random_disk_fun(ps, rng, 3, 2);
    int N = static_cast<int>(st.range(0));
    for (auto _ : st) {
        TwoVar rem = TwoVar::tensor(f, DiskFun::constant(ps, 1)) - taylor(f, N);
        benchmark::DoNotOptimize(rem.divisible_by_diagonal(N + 1));
    }
}
BENCHMARK(BM_TaylorRemainder)->Arg(1)->Arg(3);

// Fresh algebra per iteration so the normal-ordering memo starts empty.
static void BM_SugawaraEvaluate(benchmark::State& st) {
    const auto& g = LieData::get("sl2");
    int n = static_cast<int>(st.range(0)), N = static_cast<int>(st.range(1));
    auto ps = PointSet::symbolic(n);
    for (auto _ : st) {
        auto S = sugawara(PlainRealization::make(g, g.critical_level(), ps));
        benchmark::DoNotOptimize(S->evaluate(DiskFun::dual_basis(ps, {1, -2}), N));
    }
}
BENCHMARK(BM_SugawaraEvaluate)->Args({1, 2})->Args({2, 2})->Args({2, 3})->Unit(benchmark::kMillisecond);

static void BM_CentralityCheck(benchmark::State& st) {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        auto S = sugawara(PlainRealization::make(g, g.critical_level(), ps));
        benchmark::DoNotOptimize(centrality_check(S, 2, -2, 0).pass);
    }
}
BENCHMARK(BM_CentralityCheck)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_JetLift(benchmark::State& st) {
    auto ps = PointSet::symbolic(2);
    Poly p = parse_base_poly("x^2*y", {"x", "y"});
    for (auto _ : st) {
        JetEngine eng(ps);
        benchmark::DoNotOptimize(eng.lift(p, BasisIndex{1, -2}, 2));
    }
}
BENCHMARK(BM_JetLift)->Unit(benchmark::kMillisecond);

static void BM_CanonicalForm(benchmark::State& st) {
    const auto& g = LieData::get(st.range(0) == 2 ? "sl2" : "sl3");
    auto ps = PointSet::symbolic(2);
    std::mt19937 rng(3);
    auto A = gauge(random_gauge(g, ps, rng, 2), canonical_connection(random_canonical(g, ps, rng, 2)));
    for (auto _ : st) benchmark::DoNotOptimize(canonical_form(A));
}
BENCHMARK(BM_CanonicalForm)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_CoordChange(benchmark::State& st) {
    const auto& g = LieData::get("sl2");
    auto ps = PointSet::symbolic(1);
    std::mt19937 rng(4);
    DiskFun psi = random_coordinate_change(ps, rng);
    auto c = random_canonical(g, ps, rng, 2);
    int prec = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(coord_change(psi, c, prec));
}
BENCHMARK(BM_CoordChange)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Expand(benchmark::State& st) {
    auto ps = PointSet::symbolic(2);
    auto d = Decomposition::make(ps, {{0}, {1}});
    DiskFun f = DiskFun::point_factor(ps, 0, -2) * DiskFun::point_factor(ps, 1, -1);
    int M = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(expand(d, f, M));
}
BENCHMARK(BM_Expand)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK_MAIN();
