#include "abc/masquerade/fee_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace abc::masquerade {

std::uint64_t FeePmf::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

Satoshi FeePmf::sample(crypto::HashStream& rng) const
{
    std::uint64_t pick = rng.below(total());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (pick < counts[i]) return support[i];
        pick -= counts[i];
    }
    return support.back();
}

bool FeePmf::in_support(Satoshi fee) const { return std::binary_search(support.begin(), support.end(), fee); }

FeePmf fit_fee_pmf(const std::vector<Satoshi>& fees)
{
    if (fees.empty()) throw Error(Errc::InvalidArgument, "cannot fit a pmf to no fees");
    std::map<Satoshi, std::uint64_t> freq;
    for (Satoshi f : fees) ++freq[f];
    FeePmf pmf;
    for (const auto& [fee, count] : freq) {
        pmf.support.push_back(fee);
        pmf.counts.push_back(count);
        pmf.probabilities.push_back(static_cast<double>(count) / static_cast<double>(fees.size()));
    }
    return pmf;
}

FeePmf fit_fee_pmf(const IntervalBucket& bucket)
{
    std::vector<Satoshi> fees;
    fees.reserve(bucket.records.size());
    for (const auto& r : bucket.records) fees.push_back(r.fee);
    return fit_fee_pmf(fees);
}

FeeModel build_fee_model(const std::vector<TxFeatureRecord>& records, std::size_t n_intervals)
{
    FeeModel model;
    model.n_intervals = n_intervals;
    for (const PartitionCell& cell : partition_cells(records)) {
        FeeCell fc;
        fc.min_amount = std::numeric_limits<double>::infinity();
        fc.max_amount = -std::numeric_limits<double>::infinity();
        for (const auto& r : cell.records) {
            fc.min_amount = std::min(fc.min_amount, static_cast<double>(r.inputs_amount));
            fc.max_amount = std::max(fc.max_amount, static_cast<double>(r.inputs_amount));
        }
        for (const IntervalBucket& b : bucket_by_percentile(cell, n_intervals)) {
            fc.buckets.push_back({b.ordinal, b.lower, b.upper, b.records.size(), fit_fee_pmf(b)});
        }
        model.cells.emplace(cell.key, std::move(fc));
    }
    return model;
}

BucketMatch FeeModel::locate(CellKey cell, double amount) const
{
    auto it = cells.find(cell);
    if (it == cells.end()) {
        throw Error(Errc::ModelMismatch,
                    "no fee buckets for " + std::to_string(cell.inputs) + "-in/" + std::to_string(cell.outputs) + "-out");
    }
    const FeeCell& fc = it->second;
    BucketMatch m;
    m.fallback = amount < fc.min_amount || amount > fc.max_amount;
    if (amount > fc.max_amount) {
        m.bucket = &fc.buckets.back();
        return m;
    }
    for (const FeeBucket& b : fc.buckets) {
        if (amount <= b.upper) {
            m.bucket = &b;
            return m;
        }
    }
    m.bucket = &fc.buckets.back();
    return m;
}

nlohmann::json FeeModel::to_json() const
{
    nlohmann::json j;
    j["n_intervals"] = n_intervals;
    j["cells"] = nlohmann::json::array();
    for (const auto& [key, fc] : cells) {
        nlohmann::json c;
        c["input_cnt"] = key.inputs;
        c["output_cnt"] = key.outputs;
        c["min_amount"] = fc.min_amount;
        c["max_amount"] = fc.max_amount;
        c["buckets"] = nlohmann::json::array();
        for (const auto& b : fc.buckets) {
            nlohmann::json jb;
            jb["ordinal"] = b.ordinal;
            // -inf is not representable in JSON; the first bucket is open below.
            jb["lower"] = std::isinf(b.lower) ? nlohmann::json(nullptr) : nlohmann::json(b.lower);
            jb["upper"] = b.upper;
            jb["length"] = b.length;
            jb["fees"] = b.pmf.support;
            jb["counts"] = b.pmf.counts;
            c["buckets"].push_back(jb);
        }
        j["cells"].push_back(c);
    }
    return j;
}

FeeModel FeeModel::from_json(const nlohmann::json& j)
{
    try {
        FeeModel model;
        model.n_intervals = j.at("n_intervals").get<std::size_t>();
        for (const auto& c : j.at("cells")) {
            CellKey key{c.at("input_cnt").get<int>(), c.at("output_cnt").get<int>()};
            FeeCell fc;
            fc.min_amount = c.at("min_amount").get<double>();
            fc.max_amount = c.at("max_amount").get<double>();
            for (const auto& jb : c.at("buckets")) {
                FeeBucket b;
                b.ordinal = jb.at("ordinal").get<std::size_t>();
                b.lower = jb.at("lower").is_null() ? -std::numeric_limits<double>::infinity()
                                                   : jb.at("lower").get<double>();
                b.upper = jb.at("upper").get<double>();
                b.length = jb.at("length").get<std::uint64_t>();
                b.pmf.support = jb.at("fees").get<std::vector<Satoshi>>();
                b.pmf.counts = jb.at("counts").get<std::vector<std::uint64_t>>();
                if (b.pmf.support.empty() || b.pmf.support.size() != b.pmf.counts.size()) {
                    throw Error(Errc::SchemaError, "fee bucket support/count mismatch");
                }
                const double total = static_cast<double>(b.pmf.total());
                for (auto cnt : b.pmf.counts) b.pmf.probabilities.push_back(static_cast<double>(cnt) / total);
                fc.buckets.push_back(std::move(b));
            }
            if (fc.buckets.empty()) throw Error(Errc::SchemaError, "fee cell without buckets");
            model.cells.emplace(key, std::move(fc));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("fee model: ") + e.what());
    }
}

Satoshi sample_fee(const FeeModel& fees, CellKey cell, Satoshi inputs_amount, crypto::HashStream& rng)
{
    BucketMatch m = fees.locate(cell, static_cast<double>(inputs_amount));
    for (int attempt = 0; attempt < 100; ++attempt) {
        Satoshi fee = m.bucket->pmf.sample(rng);
        if (fee < inputs_amount) return fee;
    }
    throw Error(Errc::ModelMismatch, "no fee below the input amount in the matching bucket");
}

} // namespace abc::masquerade
