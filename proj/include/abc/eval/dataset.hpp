#pragma once

#include <array>
#include <vector>

#include "abc/crypto/rng.hpp"
#include "abc/masquerade/records.hpp"

namespace abc::eval {

using masquerade::Label;
using masquerade::TxFeatureRecord;

inline constexpr std::size_t kFeatureCount = 5;
using FeatureRow = std::array<double, kFeatureCount>;

/// Feature order: input_cnt, output_cnt, fee, inputs_amount, outputs_amount.
FeatureRow to_features(const TxFeatureRecord& r);

struct LabeledFeatureSet {
    std::vector<FeatureRow> rows;
    std::vector<Label> labels;

    std::size_t size() const { return rows.size(); }
    std::size_t count(Label l) const;

    static LabeledFeatureSet from_records(const std::vector<masquerade::LabeledRecord>& records);
};

/// Largest shuffled union whose covert share is `ratio`: both inputs are
/// subsampled as needed, so 1000 real + 1000 fake at 0.5 keeps everything.
/// ratio 0 returns only real rows, 1 only covert rows.
LabeledFeatureSet mix_datasets(const std::vector<TxFeatureRecord>& real, const std::vector<TxFeatureRecord>& fake,
                               double ratio, const crypto::Seed& seed);

/// Same selection as mix_datasets, keeping the records.
std::vector<masquerade::LabeledRecord> mix_records(const std::vector<TxFeatureRecord>& real,
                                                   const std::vector<TxFeatureRecord>& fake, double ratio,
                                                   const crypto::Seed& seed);

/// Fisher-Yates driven by rng.below, so a seed gives the same order on
/// every standard library.
template <typename T>
void shuffle(std::vector<T>& v, crypto::HashStream& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace abc::eval
