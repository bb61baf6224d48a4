#pragma once

#include <map>
#include <optional>

#include "json.hpp"

#include "abc/crypto/rng.hpp"
#include "abc/masquerade/partition.hpp"

namespace abc::masquerade {

/// Empirical probability mass function over observed fees.
struct FeePmf {
    std::vector<Satoshi> support;      // ascending, distinct
    std::vector<std::uint64_t> counts; // occurrences per support value
    std::vector<double> probabilities; // counts / total

    std::uint64_t total() const;
    /// Exact integer sampling proportional to counts.
    Satoshi sample(crypto::HashStream& rng) const;
    bool in_support(Satoshi fee) const;
};

/// Frequency-weighted pmf of the bucket's fees. Throws InvalidArgument on
/// an empty bucket.
FeePmf fit_fee_pmf(const IntervalBucket& bucket);
FeePmf fit_fee_pmf(const std::vector<Satoshi>& fees);

struct FeeBucket {
    std::size_t ordinal = 0;
    double lower = 0;
    double upper = 0;
    std::uint64_t length = 0; // number of training records in the bucket
    FeePmf pmf;
};

struct FeeCell {
    double min_amount = 0;
    double max_amount = 0;
    std::vector<FeeBucket> buckets;
};

struct BucketMatch {
    const FeeBucket* bucket = nullptr;
    /// The amount fell outside the cell's observed range and was mapped to
    /// the nearest bucket.
    bool fallback = false;
};

/// Every cell's buckets with their fitted fee pmfs.
struct FeeModel {
    std::size_t n_intervals = 5;
    std::map<CellKey, FeeCell> cells;

    /// Throws ModelMismatch when the (i, j) cell was never trained.
    BucketMatch locate(CellKey cell, double amount) const;

    nlohmann::json to_json() const;
    static FeeModel from_json(const nlohmann::json& j);
};

/// Fee for a transaction of the given shape and amount, drawn from the
/// matching bucket. Up to 100 draws must land below
/// inputs_amount, else ModelMismatch.
Satoshi sample_fee(const FeeModel& fees, CellKey cell, Satoshi inputs_amount, crypto::HashStream& rng);

FeeModel build_fee_model(const std::vector<TxFeatureRecord>& records, std::size_t n_intervals = 5);

} // namespace abc::masquerade
