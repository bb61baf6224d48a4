#pragma once

#include <span>
#include <vector>

#include "json.hpp"

#include "abc/crypto/rng.hpp"
#include "abc/eval/dataset.hpp"

namespace abc::eval {

/// Adjusted Rand Index, pair-counting form. Both labelings being a single
/// cluster, or both all singletons, scores 1.
double ari(std::span<const int> pred, std::span<const int> truth);
/// Mutual information over the arithmetic mean of the two entropies.
/// Two constant labelings score 1.
double nmi(std::span<const int> pred, std::span<const int> truth);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// KS distance between a sample and a discrete distribution given by its
/// ascending support and probabilities.
double ks_discrete(std::vector<double> sample, std::span<const double> support,
                   std::span<const double> probabilities);

std::vector<int> label_ids(const std::vector<Label>& labels);

struct BlackboxReport {
    double ari = 0;
    double nmi = 0;
    std::size_t n_real = 0;
    std::size_t n_covert = 0;
    crypto::Seed seed{};
    std::vector<std::size_t> dropped_columns;

    nlohmann::json to_json() const;
};

/// k-means with k = 2 on the mixed set, scored against its labels.
BlackboxReport evaluate_blackbox(const LabeledFeatureSet& set, const crypto::Seed& seed);

} // namespace abc::eval
