#pragma once

#include "abc/crypto/rng.hpp"
#include "abc/masquerade/records.hpp"

namespace abc::masquerade {

/// Parameters of the synthetic corpus generator that substitutes for real
/// chain data. Defaults:
///   input count    1..5 with probabilities 0.777/0.140/0.047/0.022/0.014
///   output count   1..5 with probabilities 0.25/0.60/0.07/0.04/0.04
///   inputs_amount  exp(N(mu, sigma)) + 0.35 * (inputs - 1) in log space,
///                  mu/sigma from a two-component mixture
///                  (0.55: 11.5 / 1.2, 0.45: 14.5 / 1.5), floor 1000 sat
///   fee            vsize * feerate, vsize = 10 + 148 * inputs + 34 * outputs,
///                  feerate from a fixed tier table (1..50 sat/vB)
///   noise          coinbase_rate coinbase rows and oversize_rate rows with
///                  6..8 inputs or outputs, both dropped by ingestion
struct GeneratorConfig {
    double coinbase_rate = 0.01;
    double oversize_rate = 0.02;
    std::uint64_t start_height = 740000;
};

std::vector<CorpusRow> generate_synthetic_corpus(std::size_t count, const crypto::Seed& seed,
                                                 const GeneratorConfig& cfg = {});

} // namespace abc::masquerade
