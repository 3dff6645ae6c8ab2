#include <benchmark/benchmark.h>

#include <canonform/modules.hpp>

#include <random>

using namespace canonform;

namespace {

std::string data(const std::string& name) { return std::string(CANONFORM_BENCH_DATA) + "/" + name; }

template <class F>
LinearMatrixProblem<F> load(const std::string& name, const F& field) {
    return load_problem(read_problem_file(data(name)), field).linear();
}

template <class F>
Matrix<F> random_member(const Engine<F>& e, std::mt19937_64& rng) {
    const auto& f = e.problem().gamma.field();
    Matrix<F> m(f, e.size(), e.size());
    for (const auto& b : e.space().basis()) m += b * f.random(rng);
    return m;
}

}  // namespace

static void BM_CanonicalizeExampleGF2(benchmark::State& state) {
    PrimeField f(2);
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    Engine<PrimeField> e(load("example.prob", f), StepSequence{{k, k}});
    std::mt19937_64 rng(1);
    std::vector<Matrix<PrimeField>> inputs;
    while (inputs.size() < 64) {
        auto m = random_member(e, rng);
        try {
            e.canonicalize(m);
            inputs.push_back(m);
        } catch (const Error&) {  // not split over GF(2)
        }
    }
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(e.canonicalize(inputs[i++ % inputs.size()]));
}
BENCHMARK(BM_CanonicalizeExampleGF2)->Arg(1)->Arg(2)->Arg(3);

static void BM_CanonicalizeExampleQ(benchmark::State& state) {
    RationalField q;
    Engine<RationalField> e(load("example.prob", q), StepSequence{{2, 2}});
    auto m = parse_matrix(q, "-1 1 2 0\n0 -1 0 1\n3 0 0 0\n0 3 0 0\n");
    for (auto _ : state) benchmark::DoNotOptimize(e.canonicalize(m));
}
BENCHMARK(BM_CanonicalizeExampleQ);

static void BM_WeyrForm(benchmark::State& state) {
    PrimeField f(7);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    // upper triangular inputs always split
    std::vector<Matrix<PrimeField>> inputs;
    for (int i = 0; i < 32; ++i) {
        Matrix<PrimeField> a(f, n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r; c < n; ++c) a(r, c) = f.from_int(static_cast<long>(rng() % 3));
        auto s = sample_invertible(BasicAlgebra<PrimeField>::validate(f, 1, {Matrix<PrimeField>::identity(f, 1)}),
                                   StepSequence{{n}}, rng);
        inputs.push_back(inverse(s) * a * s);
    }
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(weyr_form(inputs[i++ % inputs.size()]));
}
BENCHMARK(BM_WeyrForm)->Arg(3)->Arg(6)->Arg(10);

static void BM_CensusSimilarity(benchmark::State& state) {
    PrimeField f(static_cast<std::uint32_t>(state.range(0)));
    auto p = load("similarity.prob", f);
    CensusOptions opts;
    opts.parametrize = false;
    for (auto _ : state) benchmark::DoNotOptimize(full_census(p, StepSequence{{2}}, f, opts));
}
BENCHMARK(BM_CensusSimilarity)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_ClassifyA2(benchmark::State& state) {
    auto mp = build_module_problem(load_algebra(read_problem_file(data("a2.prob")), PrimeField(2)));
    for (auto _ : state) benchmark::DoNotOptimize(classify_modules(mp, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ClassifyA2)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
