#pragma once

#include <limits>
#include <map>
#include <vector>

#include "abc/masquerade/records.hpp"

namespace abc::masquerade {

/// Linear interpolation between order statistics (numpy's default):
/// h = (N-1) * q / 100, value = x[floor h] + frac(h) * (x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending and nonempty; q in [0, 100].
double percentile(const std::vector<double>& sorted, double q);

struct CellKey {
    int inputs = 0;
    int outputs = 0;

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

/// All records with the same (input count, output count).
struct PartitionCell {
    CellKey key;
    std::vector<TxFeatureRecord> records;
};

/// Nonempty cells ordered by (i, j).
std::vector<PartitionCell> partition_cells(const std::vector<TxFeatureRecord>& records);

/// Records of one cell with lower < inputs_amount <= upper. The first bucket
/// of a cell has lower = -inf so the cell minimum is covered.
struct IntervalBucket {
    CellKey cell;
    std::size_t ordinal = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = 0;
    std::vector<TxFeatureRecord> records;

    bool contains(double amount) const { return amount > lower && amount <= upper; }
};

/// Splits a cell at the inputs_amount percentiles 100k/n, k = 1..n-1.
/// Equal or empty intervals are merged, so fewer than n buckets can come
/// back. Throws InvalidArgument on an empty cell or n = 0.
std::vector<IntervalBucket> bucket_by_percentile(const PartitionCell& cell, std::size_t n_intervals);

} // namespace abc::masquerade
