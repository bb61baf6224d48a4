#include "abc/masquerade/partition.hpp"

#include <algorithm>
#include <cmath>

namespace abc::masquerade {

double percentile(const std::vector<double>& sorted, double q)
{
    if (sorted.empty()) throw Error(Errc::InvalidArgument, "percentile of empty set");
    if (q < 0 || q > 100) throw Error(Errc::InvalidArgument, "percentile outside [0, 100]");
    const double h = static_cast<double>(sorted.size() - 1) * q / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<PartitionCell> partition_cells(const std::vector<TxFeatureRecord>& records)
{
    std::map<CellKey, std::vector<TxFeatureRecord>> groups;
    for (const auto& r : records) groups[{r.input_cnt, r.output_cnt}].push_back(r);
    std::vector<PartitionCell> out;
    out.reserve(groups.size());
    for (auto& [key, recs] : groups) out.push_back({key, std::move(recs)});
    return out;
}

std::vector<IntervalBucket> bucket_by_percentile(const PartitionCell& cell, std::size_t n_intervals)
{
    if (cell.records.empty()) throw Error(Errc::InvalidArgument, "cannot bucket an empty cell");
    if (n_intervals == 0) throw Error(Errc::InvalidArgument, "n_intervals must be >= 1");

    std::vector<double> amounts;
    amounts.reserve(cell.records.size());
    for (const auto& r : cell.records) amounts.push_back(static_cast<double>(r.inputs_amount));
    std::sort(amounts.begin(), amounts.end());
    const double max_amount = amounts.back();

    // Interior cut points, strictly increasing and below the maximum.
    std::vector<double> cuts;
    for (std::size_t k = 1; k < n_intervals; ++k) {
        double c = percentile(amounts, 100.0 * static_cast<double>(k) / static_cast<double>(n_intervals));
        if (c < max_amount && (cuts.empty() || c > cuts.back())) cuts.push_back(c);
    }

    auto count_in = [&](double lo, double hi) {
        auto first = std::upper_bound(amounts.begin(), amounts.end(), lo);
        auto last = std::upper_bound(amounts.begin(), amounts.end(), hi);
        return static_cast<std::size_t>(last - first);
    };
    // Merge empty intervals into a neighbour by dropping a cut.
    for (bool changed = true; changed && !cuts.empty();) {
        changed = false;
        for (std::size_t b = 0; b <= cuts.size(); ++b) {
            double lo = b == 0 ? -std::numeric_limits<double>::infinity() : cuts[b - 1];
            double hi = b == cuts.size() ? max_amount : cuts[b];
            if (count_in(lo, hi) == 0) {
                cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(b == 0 ? 0 : b - 1));
                changed = true;
                break;
            }
        }
    }

    std::vector<IntervalBucket> buckets(cuts.size() + 1);
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        buckets[b].cell = cell.key;
        buckets[b].ordinal = b;
        buckets[b].lower = b == 0 ? -std::numeric_limits<double>::infinity() : cuts[b - 1];
        buckets[b].upper = b == cuts.size() ? max_amount : cuts[b];
    }
    for (const auto& r : cell.records) {
        const double a = static_cast<double>(r.inputs_amount);
        auto it = std::lower_bound(cuts.begin(), cuts.end(), a);
        buckets[static_cast<std::size_t>(it - cuts.begin())].records.push_back(r);
    }
    return buckets;
}

} // namespace abc::masquerade
