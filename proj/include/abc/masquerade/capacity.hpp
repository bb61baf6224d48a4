#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace abc::masquerade {

inline constexpr double kBitsPerInput = 256.0;

struct CapacityEstimate {
    double bits_per_tx = 0;
    double fee_per_tx = 0;
    double mean_inputs = 0;
};

/// weights[c] and avg_fees[c] describe transactions with c + 1 inputs.
/// bits = 256 * sum w_c (c + 1); fee = sum w_c * avg_fee_c. Throws
/// WeightSumError unless the weights sum to 1 within 1e-6.
CapacityEstimate expected_capacity(std::span<const double> weights, std::span<const double> avg_fees);

struct CapacityTable {
    std::vector<double> weights;
    std::vector<double> avg_fees;
};

/// CSV with header input_cnt,proportion,avg_fee and rows for 1..k inputs.
CapacityTable read_capacity_csv(const std::filesystem::path& path);

} // namespace abc::masquerade
