#include <benchmark/benchmark.h>

#include "conduche/ckalgebra.hpp"
#include "conduche/examples.hpp"
#include "conduche/graded.hpp"

using namespace conduche;

namespace {

void BM_KGraphCompose(benchmark::State& state) {
    auto ex = make_example("kgraph22");
    auto kc = std::dynamic_pointer_cast<const KGraphCategory>(ex.category);
    auto words = kc->morphisms_into("v", (int)state.range(0));
    size_t i = 0;
    for (auto _ : state) {
        const auto& a = words[i % words.size()];
        const auto& b = words[(i * 7 + 3) % words.size()];
        benchmark::DoNotOptimize(kc->try_compose(a, b));
        ++i;
    }
}
BENCHMARK(BM_KGraphCompose)->Arg(2)->Arg(4)->Arg(6);

void BM_CheckDcf(benchmark::State& state) {
    auto ex = make_example("kgraph22");
    for (auto _ : state) benchmark::DoNotOptimize(check_dcf(ex.fibration, (int)state.range(0)));
}
BENCHMARK(BM_CheckDcf)->Arg(2)->Arg(3)->Arg(4);

void BM_CylinderIntersection(benchmark::State& state) {
    auto ex = make_example("o3");
    auto kc = std::dynamic_pointer_cast<const KGraphCategory>(ex.category);
    auto words = kc->morphisms_into("v", (int)state.range(0));
    size_t i = 0;
    for (auto _ : state) {
        const auto& a = words[i % words.size()];
        const auto& b = words[(i * 5 + 1) % words.size()];
        benchmark::DoNotOptimize(cylinder_intersection(ex.fibration, a, b));
        ++i;
    }
}
BENCHMARK(BM_CylinderIntersection)->Arg(2)->Arg(3)->Arg(4);

void BM_AlgebraMultiply(benchmark::State& state) {
    auto ex = make_example("o2");
    const auto& E = ex.fibration.domain();
    std::vector<AlgebraElement> words;
    for (const auto& a : E.morphisms_up_to((int)state.range(0)))
        for (const auto& b : E.morphisms_up_to((int)state.range(0)))
            if (E.source(a) == E.source(b))
                words.push_back(AlgebraElement::word(ex.fibration, a, b));
    size_t i = 0;
    for (auto _ : state) {
        const auto& a = words[i % words.size()];
        const auto& b = words[(i * 11 + 5) % words.size()];
        benchmark::DoNotOptimize(multiply(a, b));
        ++i;
    }
}
BENCHMARK(BM_AlgebraMultiply)->Arg(1)->Arg(2)->Arg(3);

void BM_AlgebraEqualAfterRefinement(benchmark::State& state) {
    auto ex = make_example("o2");
    auto p = AlgebraElement::projection(ex.fibration, "v");
    auto refined = refine(p, degree_id({(int)state.range(0)}));
    for (auto _ : state) benchmark::DoNotOptimize(equal(p, refined));
}
BENCHMARK(BM_AlgebraEqualAfterRefinement)->Arg(1)->Arg(2)->Arg(3);

void BM_PathEval(benchmark::State& state) {
    auto ex = make_example("kgraph22");
    const MorphismId at = degree_id({(int)state.range(0), (int)state.range(0)});
    for (auto _ : state) {
        state.PauseTiming();
        auto x = canonical_splitting(ex.fibration, "v", 0);
        state.ResumeTiming();
        benchmark::DoNotOptimize(x.eval(at));
    }
}
BENCHMARK(BM_PathEval)->Arg(1)->Arg(2)->Arg(3);

void BM_Convolve(benchmark::State& state) {
    auto ex = make_example("o2");
    auto f = GroupoidFunction::indicator(ex.fibration, {"e1", "e2"});
    auto g = GroupoidFunction::indicator(ex.fibration, {"e2", "e1.e1"});
    for (auto _ : state) benchmark::DoNotOptimize(convolve(f, g));
}
BENCHMARK(BM_Convolve);

}  // namespace

BENCHMARK_MAIN();
