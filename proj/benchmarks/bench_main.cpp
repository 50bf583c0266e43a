#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mpv/corpus.hpp"
#include "mpv/kinetic.hpp"
#include "mpv/momentdyn.hpp"
#include "mpv/momvlasov.hpp"
#include "mpv/phasealg.hpp"
#include "mpv/schouten.hpp"

using namespace mpv;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PhaseFn landau(const PhaseGrid& g) {
    return PhaseFn::from(g, [](double q, double p) {
        return (1 + 0.05 * std::cos(q)) * std::exp(-p * p / 2) / std::sqrt(kTwoPi);
    });
}

void BM_SchoutenBracket(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    Lcg64 rng(1);
    const SymTensor X = random_tensor(rng, dim, 3, 3);
    const SymTensor Y = random_tensor(rng, dim, 3, 3);
    for (auto _ : state) benchmark::DoNotOptimize(schouten_bracket(X, Y));
}
BENCHMARK(BM_SchoutenBracket)->Arg(1)->Arg(2);

void BM_CanonicalBracket(benchmark::State& state) {
    Lcg64 rng(2);
    const PhasePoly h = kappa(random_graded(rng, 2, 0, 4, 3));
    const PhasePoly k = kappa(random_graded(rng, 2, 0, 4, 3));
    for (auto _ : state) benchmark::DoNotOptimize(canonical_bracket(h, k));
}
BENCHMARK(BM_CanonicalBracket);

void BM_Ddq(benchmark::State& state) {
    const PhaseGrid g(SpatialGrid(kTwoPi, static_cast<int>(state.range(0))), 8.0, 256);
    const PhaseFn f = landau(g);
    const auto scheme = state.range(1) ? DiffScheme::Fourier : DiffScheme::FD4;
    for (auto _ : state) benchmark::DoNotOptimize(ddq(f, scheme));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Ddq)->Args({64, 0})->Args({64, 1})->Args({256, 0})->Args({256, 1});

void BM_LpRhs(benchmark::State& state) {
    const SpatialGrid sg(kTwoPi, 256);
    Lcg64 rng(3);
    std::vector<GridFn> a;
    for (int m = 0; m <= 6; ++m) a.push_back(random_trig(rng, sg, 4));
    const MomentState S(a);
    Variational H{SField(random_trig(rng, sg, 4), random_trig(rng, sg, 4)), {}};
    H.n.emplace(2, random_trig(rng, sg, 4));
    for (auto _ : state) benchmark::DoNotOptimize(lp_rhs(H, S));
}
BENCHMARK(BM_LpRhs);

void BM_VlasovStep(benchmark::State& state) {
    const PhaseGrid g(SpatialGrid(4 * std::numbers::pi, 64), 8.0, 128);
    VlasovParams p;
    p.threads = static_cast<int>(state.range(0));
    KineticState s = make_state(landau(g), p);
    for (auto _ : state) s = step(s, p, 0.01);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_VlasovStep)->Arg(1)->Arg(4)->UseRealTime();

void BM_DecomposeF(benchmark::State& state) {
    const PhaseGrid g(SpatialGrid(kTwoPi, 64), 8.0, 256);
    const PhaseFn f = landau(g);
    for (auto _ : state) benchmark::DoNotOptimize(decompose_f(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DecomposeF)->Arg(2)->Arg(4)->Arg(8);

void BM_MomVlasovRhs(benchmark::State& state) {
    const PhaseGrid g(SpatialGrid(kTwoPi, 64), 8.0, 256);
    Lcg64 rng(4);
    const OneFormGrid Pi(random_phase(rng, g, 3), random_phase(rng, g, 3));
    VlasovParams p;
    p.field_mode = FieldMode::Prescribed;
    p.prescribed_phi = random_trig(rng, g.spatial, 2);
    for (auto _ : state) benchmark::DoNotOptimize(momvlasov_rhs(Pi, p));
}
BENCHMARK(BM_MomVlasovRhs);

}  // namespace
BENCHMARK_MAIN();
