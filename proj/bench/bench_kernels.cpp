// Serial reference vs OpenMP kernel, same inputs, same outputs.

#include <benchmark/benchmark.h>

#include "abc/eval/cluster.hpp"
#include "abc/masquerade/corpus_gen.hpp"
#include "abc/masquerade/synth.hpp"
#include "abc/wallet/hd.hpp"

using namespace abc;

namespace {

const wallet::ExtendedPrivateKey& shared_esk()
{
    static const wallet::ExtendedPrivateKey esk = wallet::master_from_seed(from_hex("000102030405060708090a0b0c0d0e0f"));
    return esk;
}

const masquerade::TrainedPipeline& pipeline()
{
    static const masquerade::TrainedPipeline p = [] {
        auto rows = masquerade::generate_synthetic_corpus(50000, crypto::seed_from_string("bench-corpus"));
        return masquerade::train_pipeline(masquerade::ingest_corpus(rows), 5, {},
                                          crypto::seed_from_string("bench-fit"));
    }();
    return p;
}

const std::vector<eval::FeatureRow>& feature_rows()
{
    static const std::vector<eval::FeatureRow> rows = [] {
        const auto& p = pipeline();
        auto s = masquerade::sample_features(p.synth, p.fees, 100000, crypto::seed_from_string("bench-rows"));
        std::vector<eval::FeatureRow> out;
        for (const auto& r : s.records) out.push_back(eval::to_features(r));
        return out;
    }();
    return rows;
}

void BM_derive_addresses_serial(benchmark::State& st)
{
    for (auto _ : st) {
        benchmark::DoNotOptimize(wallet::derive_addresses_serial(shared_esk(), 0, static_cast<std::size_t>(st.range(0)),
                                                                 wallet::Network::testnet));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_derive_addresses_parallel(benchmark::State& st)
{
    for (auto _ : st) {
        benchmark::DoNotOptimize(
            wallet::derive_addresses(shared_esk(), 0, static_cast<std::size_t>(st.range(0)), wallet::Network::testnet));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_kmeans_serial(benchmark::State& st)
{
    const auto& rows = feature_rows();
    for (auto _ : st) benchmark::DoNotOptimize(eval::kmeans2_serial(rows, crypto::seed_from_string("km")));
}

void BM_kmeans_parallel(benchmark::State& st)
{
    const auto& rows = feature_rows();
    for (auto _ : st) benchmark::DoNotOptimize(eval::kmeans2(rows, crypto::seed_from_string("km")));
}

void BM_sample_features_serial(benchmark::State& st)
{
    const auto& p = pipeline();
    for (auto _ : st) {
        benchmark::DoNotOptimize(masquerade::sample_features_serial(
            p.synth, p.fees, static_cast<std::size_t>(st.range(0)), crypto::seed_from_string("draw")));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_sample_features_parallel(benchmark::State& st)
{
    const auto& p = pipeline();
    for (auto _ : st) {
        benchmark::DoNotOptimize(masquerade::sample_features(p.synth, p.fees, static_cast<std::size_t>(st.range(0)),
                                                             crypto::seed_from_string("draw")));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

} // namespace

BENCHMARK(BM_derive_addresses_serial)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_derive_addresses_parallel)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_kmeans_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_kmeans_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sample_features_serial)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sample_features_parallel)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
