#pragma once

#include <array>
#include <filesystem>

#include "abc/masquerade/fee_model.hpp"

namespace abc::masquerade {

struct MixtureComponent {
    double weight = 0;
    double mean = 0;   // of ln(amount)
    double stddev = 0; // of ln(amount)
};

/// Gaussian mixture over ln(inputs_amount), i.e. a log-normal mixture over
/// amounts.
struct LogNormalMixture {
    std::vector<MixtureComponent> components;
    double log_likelihood = 0;
    int iterations = 0;
    bool converged = false;

    /// Draw in log space.
    double sample_log(crypto::HashStream& rng) const;
};

struct MixtureConfig {
    int components = 5;
    int max_iterations = 200;
    double tolerance = 1e-6; // on the mean log-likelihood
    double min_variance = 1e-4;
};

/// EM on 1-D data with k-means++ seeding from `seed`. The component count is
/// capped at the number of distinct values.
LogNormalMixture fit_log_mixture(const std::vector<double>& log_values, const MixtureConfig& cfg,
                                 const crypto::Seed& seed);

struct SynthCell {
    CellKey key;
    std::uint64_t count = 0;
    LogNormalMixture mixture;
};

/// One inputs_amount percentile band (1-20, 20-80, 80-99 by default).
struct MacroBucket {
    double lower = 0; // inclusive amount bounds
    double upper = 0;
    std::uint64_t count = 0;
    std::vector<SynthCell> cells;
};

/// Stand-in for the learned tabular generator: per macro bucket a joint
/// categorical over (input count, output count) plus a log-amount mixture per
/// cell.
struct SynthModel {
    static constexpr int kFormatVersion = 1;

    std::array<double, 4> percentile_edges{1, 20, 80, 99};
    double clip_lower = 0;
    double clip_upper = 0;
    MixtureConfig config;
    crypto::Seed seed{};
    std::uint64_t training_records = 0;
    std::vector<MacroBucket> buckets;

    nlohmann::json to_json() const;
    static SynthModel from_json(const nlohmann::json& j);
};

/// Clips to the outer percentile pair, splits at the inner pair and fits
/// each macro bucket. Throws InsufficientData when a macro bucket is empty.
SynthModel fit_synth_model(const std::vector<TxFeatureRecord>& records,
                           std::array<double, 4> percentile_edges = {1, 20, 80, 99}, const MixtureConfig& cfg = {},
                           const crypto::Seed& seed = {});

struct SampledFeatures {
    std::vector<TxFeatureRecord> records;
    /// Ordinals whose amount fell outside the trained fee bucket range and
    /// took the nearest bucket.
    std::vector<std::size_t> fallback_ordinals;
};

/// Record `first + i` depends only on (model, fees, seed, first + i).
/// OpenMP-parallel over records.
SampledFeatures sample_features(const SynthModel& model, const FeeModel& fees, std::size_t count,
                                const crypto::Seed& seed, std::size_t first = 0);
/// Single-threaded reference for sample_features.
SampledFeatures sample_features_serial(const SynthModel& model, const FeeModel& fees, std::size_t count,
                                       const crypto::Seed& seed, std::size_t first = 0);

/// One record, as drawn for ordinal `ordinal`.
TxFeatureRecord sample_one(const SynthModel& model, const FeeModel& fees, const crypto::Seed& seed,
                           std::size_t ordinal, bool* fallback = nullptr);

/// Fitted synthesizer and fee model persisted together.
struct TrainedPipeline {
    SynthModel synth;
    FeeModel fees;

    void save(const std::filesystem::path& path) const;
    static TrainedPipeline load(const std::filesystem::path& path);
};

TrainedPipeline train_pipeline(const Corpus& corpus, std::size_t n_intervals = 5, const MixtureConfig& cfg = {},
                               const crypto::Seed& seed = {});

} // namespace abc::masquerade
