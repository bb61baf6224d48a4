#pragma once

#include <vector>

#include "abc/eval/dataset.hpp"

namespace abc::eval {

struct KmeansConfig {
    int restarts = 10;
    int max_iterations = 300;
    double tolerance = 1e-6; // relative inertia change
};

struct Standardized {
    std::vector<double> values; // row-major, `dims` per row
    std::size_t dims = 0;
    /// Zero-variance columns that were removed.
    std::vector<std::size_t> dropped_columns;
};

/// Per-column z-scores (population standard deviation). Throws
/// DegenerateData when every column is constant.
Standardized standardize(const std::vector<FeatureRow>& rows);

struct KmeansResult {
    std::vector<int> labels;
    double inertia = 0;
    int iterations = 0;
    int restart = 0; // ordinal of the winning restart
    std::vector<std::size_t> dropped_columns;
};

/// k = 2 Lloyd's algorithm on standardized features with k-means++ seeding.
/// Restarts run in parallel; the lowest inertia wins, ties to the lower
/// restart ordinal. Throws InvalidArgument for fewer than 2 rows.
KmeansResult kmeans2(const std::vector<FeatureRow>& rows, const crypto::Seed& seed, const KmeansConfig& cfg = {});
/// Serial reference for kmeans2; identical output.
KmeansResult kmeans2_serial(const std::vector<FeatureRow>& rows, const crypto::Seed& seed,
                            const KmeansConfig& cfg = {});

} // namespace abc::eval
