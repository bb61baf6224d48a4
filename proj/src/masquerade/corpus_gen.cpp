#include "abc/masquerade/corpus_gen.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace abc::masquerade {

namespace {

constexpr std::array<double, 5> kInputProbs{0.777, 0.140, 0.047, 0.022, 0.014};
constexpr std::array<double, 5> kOutputProbs{0.25, 0.60, 0.07, 0.04, 0.04};
constexpr std::array<std::uint64_t, 10> kFeerates{1, 2, 3, 5, 8, 10, 15, 20, 30, 50};
constexpr std::array<double, 10> kFeerateProbs{0.22, 0.14, 0.12, 0.11, 0.10, 0.09, 0.08, 0.06, 0.05, 0.03};
constexpr std::size_t kRowsPerBlock = 2500;
constexpr std::uint64_t kSubsidy = 625000000;

template <std::size_t N>
std::size_t draw(crypto::HashStream& rng, const std::array<double, N>& probs)
{
    double u = rng.uniform();
    for (std::size_t i = 0; i < N; ++i) {
        if (u < probs[i]) return i;
        u -= probs[i];
    }
    return N - 1;
}

double gauss(crypto::HashStream& rng)
{
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace

std::vector<CorpusRow> generate_synthetic_corpus(std::size_t count, const crypto::Seed& seed,
                                                 const GeneratorConfig& cfg)
{
    std::vector<CorpusRow> rows;
    rows.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        crypto::HashStream rng = crypto::HashStream::derive(seed, "corpus-row", n);
        CorpusRow row;
        row.txid = to_hex(rng.next32());
        row.block_height = static_cast<std::int64_t>(cfg.start_height + n / kRowsPerBlock);
        row.timestamp = 1654041600 + (n / kRowsPerBlock) * 600;

        const double kind = rng.uniform();
        if (kind < cfg.coinbase_rate) {
            row.is_coinbase = true;
            row.input_cnt = 1;
            row.output_cnt = 1 + rng.below(2);
            row.inputs_amount = kSubsidy + rng.below(50000000);
            row.outputs_amount = row.inputs_amount;
            row.fee = 0;
            rows.push_back(std::move(row));
            continue;
        }

        row.input_cnt = draw(rng, kInputProbs) + 1;
        row.output_cnt = draw(rng, kOutputProbs) + 1;
        if (kind < cfg.coinbase_rate + cfg.oversize_rate) {
            if (rng.below(2) == 0) {
                row.input_cnt = 6 + rng.below(3);
            } else {
                row.output_cnt = 6 + rng.below(3);
            }
        }

        const std::uint64_t vsize = 10 + 148 * row.input_cnt + 34 * row.output_cnt;
        for (;;) {
            const bool high = rng.uniform() >= 0.55;
            const double mu = high ? 14.5 : 11.5;
            const double sigma = high ? 1.5 : 1.2;
            const double log_amount = mu + sigma * gauss(rng) + 0.35 * static_cast<double>(row.input_cnt - 1);
            row.inputs_amount = std::max<Satoshi>(1000, static_cast<Satoshi>(std::llround(std::exp(log_amount))));
            row.fee = vsize * kFeerates[draw(rng, kFeerateProbs)];
            if (row.fee < row.inputs_amount) break;
        }
        row.outputs_amount = row.inputs_amount - row.fee;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace abc::masquerade
