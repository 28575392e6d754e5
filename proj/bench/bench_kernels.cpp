#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "ptcl/kernels.hpp"
#include "ptcl/polaron.hpp"

using namespace ptcl;

namespace {

struct Fixture {
    SpinOrbitalSystem sys;
    BathSpec bath;
    std::unique_ptr<Generator> gen;

    explicit Fixture(int n_occ, int n_virt) {
        ModelBuilder mb;
        mb.seed = 11;
        mb.n_occ = n_occ;
        mb.n_virt = n_virt;
        const SpinOrbitalSystem bare = build_model(mb);
        bath.n_orb = bare.n();
        bath.beta = 1000.0;
        Mode m;
        m.omega = 0.0073;
        m.coupling = Eigen::MatrixXd::Zero(bare.n(), bare.n());
        for (int p = 0; p < bare.n(); ++p) m.coupling(p, p) = 0.02 * m.omega * (1 + p % 3);
        bath.modes.push_back(m);
        sys = transform_integrals(bare, bath).dressed();
        GeneratorOptions opt;
        opt.mode = Theory::Transformed;
        gen = std::make_unique<Generator>(sys, bath, opt);
        VectorXc K;
        gen->kernels().advance(1.0, K);
        gen->kernels().commit(1.0, K);
    }
};

Fixture& fixture(int size) {
    static std::map<int, std::unique_ptr<Fixture>> cache;
    auto& f = cache[size];
    if (!f) f = std::make_unique<Fixture>(size, size + 2);
    return *f;
}

void BM_AdvanceReference(benchmark::State& st) {
    Fixture& f = fixture(static_cast<int>(st.range(0)));
    VectorXc K;
    for (auto _ : st) {
        f.gen->kernels().advance_reference(0.05, K);
        benchmark::DoNotOptimize(K.data());
    }
    st.counters["kernels"] = f.gen->kernels().size();
}

void BM_AdvanceParallel(benchmark::State& st) {
    Fixture& f = fixture(static_cast<int>(st.range(0)));
    VectorXc K;
    for (auto _ : st) {
        f.gen->kernels().advance(0.05, K);
        benchmark::DoNotOptimize(K.data());
    }
    st.counters["kernels"] = f.gen->kernels().size();
}

void BM_AssembleReference(benchmark::State& st) {
    Fixture& f = fixture(static_cast<int>(st.range(0)));
    MatrixXc G;
    for (auto _ : st) {
        f.gen->assemble_reference(f.gen->kernels().value(), G);
        benchmark::DoNotOptimize(G.data());
    }
}

void BM_AssembleParallel(benchmark::State& st) {
    Fixture& f = fixture(static_cast<int>(st.range(0)));
    MatrixXc G;
    for (auto _ : st) {
        f.gen->assemble(f.gen->kernels().value(), G);
        benchmark::DoNotOptimize(G.data());
    }
}

}  // namespace

BENCHMARK(BM_AdvanceReference)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AdvanceParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AssembleReference)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AssembleParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
