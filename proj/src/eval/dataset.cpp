#include "abc/eval/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace abc::eval {

FeatureRow to_features(const TxFeatureRecord& r)
{
    return {static_cast<double>(r.input_cnt), static_cast<double>(r.output_cnt), static_cast<double>(r.fee),
            static_cast<double>(r.inputs_amount), static_cast<double>(r.outputs_amount)};
}

std::size_t LabeledFeatureSet::count(Label l) const
{
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

LabeledFeatureSet LabeledFeatureSet::from_records(const std::vector<masquerade::LabeledRecord>& records)
{
    LabeledFeatureSet set;
    set.rows.reserve(records.size());
    set.labels.reserve(records.size());
    for (const auto& r : records) {
        set.rows.push_back(to_features(r.record));
        set.labels.push_back(r.label);
    }
    return set;
}

std::vector<masquerade::LabeledRecord> mix_records(const std::vector<TxFeatureRecord>& real,
                                                   const std::vector<TxFeatureRecord>& fake, double ratio,
                                                   const crypto::Seed& seed)
{
    if (!(ratio >= 0 && ratio <= 1)) throw Error(Errc::InvalidArgument, "covert ratio must lie in [0, 1]");
    if ((ratio < 1 && real.empty()) || (ratio > 0 && fake.empty())) {
        throw Error(Errc::InvalidArgument, "mixing needs nonempty inputs");
    }

    std::size_t n_real = real.size();
    std::size_t n_fake = fake.size();
    if (ratio == 0) {
        n_fake = 0;
    } else if (ratio == 1) {
        n_real = 0;
    } else {
        const double total = std::floor(std::min(static_cast<double>(real.size()) / (1 - ratio),
                                                 static_cast<double>(fake.size()) / ratio));
        n_fake = std::min(fake.size(), static_cast<std::size_t>(std::llround(ratio * total)));
        n_real = std::min(real.size(), static_cast<std::size_t>(total) - n_fake);
    }

    crypto::HashStream rng = crypto::HashStream::derive(seed, "mix", 0);
    auto pick = [&rng](std::size_t pool, std::size_t take) {
        std::vector<std::size_t> idx(pool);
        for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
        if (take < pool) {
            shuffle(idx, rng);
            idx.resize(take);
        }
        return idx;
    };

    std::vector<masquerade::LabeledRecord> out;
    out.reserve(n_real + n_fake);
    for (std::size_t i : pick(real.size(), n_real)) out.push_back({real[i], Label::real});
    for (std::size_t i : pick(fake.size(), n_fake)) out.push_back({fake[i], Label::covert});
    shuffle(out, rng);
    return out;
}

LabeledFeatureSet mix_datasets(const std::vector<TxFeatureRecord>& real, const std::vector<TxFeatureRecord>& fake,
                               double ratio, const crypto::Seed& seed)
{
    return LabeledFeatureSet::from_records(mix_records(real, fake, ratio, seed));
}

} // namespace abc::eval
