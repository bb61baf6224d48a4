#include "abc/masquerade/synth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>

namespace abc::masquerade {

namespace {

double normal(crypto::HashStream& rng)
{
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <typename Weights>
std::size_t pick_weighted(crypto::HashStream& rng, const Weights& counts, std::uint64_t total)
{
    std::uint64_t pick = rng.below(total);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (pick < counts[i]) return i;
        pick -= counts[i];
    }
    return counts.size() - 1;
}

double log_normal_pdf(double x, double mean, double var)
{
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

} // namespace

double LogNormalMixture::sample_log(crypto::HashStream& rng) const
{
    double u = rng.uniform();
    const MixtureComponent* c = &components.back();
    for (const auto& comp : components) {
        if (u < comp.weight) {
            c = &comp;
            break;
        }
        u -= comp.weight;
    }
    return c->mean + c->stddev * normal(rng);
}

LogNormalMixture fit_log_mixture(const std::vector<double>& x, const MixtureConfig& cfg, const crypto::Seed& seed)
{
    if (x.empty()) throw Error(Errc::InsufficientData, "mixture fit on no data");
    if (cfg.components < 1) throw Error(Errc::InvalidArgument, "mixture needs at least one component");

    std::vector<double> distinct = x;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.components), distinct.size());
    const std::size_t n = x.size();

    // k-means++ seeding.
    crypto::HashStream rng(seed);
    std::vector<double> centers{x[rng.below(n)]};
    std::vector<double> d2(n);
    while (centers.size() < k) {
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers) best = std::min(best, (x[i] - c) * (x[i] - c));
            d2[i] = best;
            sum += best;
        }
        double target = rng.uniform() * sum;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (target < d2[i]) {
                chosen = i;
                break;
            }
            target -= d2[i];
        }
        if (d2[chosen] == 0) {
            // Rounding left us on an existing center; take the farthest point.
            chosen = static_cast<std::size_t>(std::max_element(d2.begin(), d2.end()) - d2.begin());
        }
        centers.push_back(x[chosen]);
    }

    // Hard assignment to the seeds gives the starting parameters.
    std::vector<double> w(k, 0), mu(k, 0), var(k, 0);
    std::vector<std::size_t> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < k; ++c) {
            if (std::abs(x[i] - centers[c]) < std::abs(x[i] - centers[best])) best = c;
        }
        nearest[i] = best;
        w[best] += 1;
        mu[best] += x[i];
    }
    for (std::size_t c = 0; c < k; ++c) mu[c] = w[c] > 0 ? mu[c] / w[c] : centers[c];
    for (std::size_t i = 0; i < n; ++i) var[nearest[i]] += (x[i] - mu[nearest[i]]) * (x[i] - mu[nearest[i]]);
    for (std::size_t c = 0; c < k; ++c) {
        var[c] = std::max(w[c] > 0 ? var[c] / w[c] : 0.0, cfg.min_variance);
        w[c] = std::max(w[c], 1.0) / static_cast<double>(n);
    }

    LogNormalMixture out;
    std::vector<double> resp(n * k);
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        // E step.
        double ll = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double* r = &resp[i * k];
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                r[c] = std::log(w[c]) + log_normal_pdf(x[i], mu[c], var[c]);
                m = std::max(m, r[c]);
            }
            double s = 0;
            for (std::size_t c = 0; c < k; ++c) {
                r[c] = std::exp(r[c] - m);
                s += r[c];
            }
            for (std::size_t c = 0; c < k; ++c) r[c] /= s;
            ll += m + std::log(s);
        }
        ll /= static_cast<double>(n);

        // M step.
        for (std::size_t c = 0; c < k; ++c) {
            double nk = 0, sx = 0;
            for (std::size_t i = 0; i < n; ++i) {
                nk += resp[i * k + c];
                sx += resp[i * k + c] * x[i];
            }
            if (nk < 1e-12) {
                w[c] = 1e-12;
                continue;
            }
            mu[c] = sx / nk;
            double sv = 0;
            for (std::size_t i = 0; i < n; ++i) sv += resp[i * k + c] * (x[i] - mu[c]) * (x[i] - mu[c]);
            var[c] = std::max(sv / nk, cfg.min_variance);
            w[c] = nk / static_cast<double>(n);
        }

        out.iterations = iter;
        out.log_likelihood = ll;
        if (std::abs(ll - prev_ll) < cfg.tolerance) {
            out.converged = true;
            break;
        }
        prev_ll = ll;
    }

    double wsum = 0;
    for (double v : w) wsum += v;
    for (std::size_t c = 0; c < k; ++c) out.components.push_back({w[c] / wsum, mu[c], std::sqrt(var[c])});
    std::sort(out.components.begin(), out.components.end(),
              [](const MixtureComponent& a, const MixtureComponent& b) { return a.mean < b.mean; });
    return out;
}

SynthModel fit_synth_model(const std::vector<TxFeatureRecord>& records, std::array<double, 4> edges,
                           const MixtureConfig& cfg, const crypto::Seed& seed)
{
    if (records.empty()) throw Error(Errc::InsufficientData, "no training records");
    if (!std::is_sorted(edges.begin(), edges.end()) || edges.front() < 0 || edges.back() > 100) {
        throw Error(Errc::InvalidArgument, "percentile edges must be ascending within [0, 100]");
    }
    std::vector<double> amounts;
    amounts.reserve(records.size());
    for (const auto& r : records) amounts.push_back(static_cast<double>(r.inputs_amount));
    std::sort(amounts.begin(), amounts.end());

    SynthModel model;
    model.percentile_edges = edges;
    model.config = cfg;
    model.seed = seed;
    std::array<double, 4> cut;
    for (std::size_t i = 0; i < 4; ++i) cut[i] = percentile(amounts, edges[i]);
    model.clip_lower = cut[0];
    model.clip_upper = cut[3];

    std::array<std::map<CellKey, std::vector<double>>, 3> groups;
    std::array<std::uint64_t, 3> counts{};
    for (const auto& r : records) {
        const double a = static_cast<double>(r.inputs_amount);
        if (a < cut[0] || a > cut[3]) continue;
        const std::size_t m = a <= cut[1] ? 0 : (a <= cut[2] ? 1 : 2);
        groups[m][{r.input_cnt, r.output_cnt}].push_back(std::log(a));
        ++counts[m];
        ++model.training_records;
    }

    for (std::size_t m = 0; m < 3; ++m) {
        if (counts[m] == 0) {
            throw Error(Errc::InsufficientData, "macro bucket " + std::to_string(m) + " is empty after clipping");
        }
        MacroBucket bucket;
        bucket.lower = cut[m];
        bucket.upper = cut[m + 1];
        bucket.count = counts[m];
        for (auto& [key, logs] : groups[m]) {
            const std::uint64_t ordinal = m * 100 + static_cast<std::uint64_t>(key.inputs) * 10 +
                                          static_cast<std::uint64_t>(key.outputs);
            const crypto::Seed cell_seed = crypto::HashStream::derive(seed, "mixture", ordinal).next32();
            bucket.cells.push_back({key, logs.size(), fit_log_mixture(logs, cfg, cell_seed)});
        }
        model.buckets.push_back(std::move(bucket));
    }
    return model;
}

TxFeatureRecord sample_one(const SynthModel& model, const FeeModel& fees, const crypto::Seed& seed,
                           std::size_t ordinal, bool* fallback)
{
    if (model.buckets.empty()) throw Error(Errc::ModelMismatch, "untrained synthesizer");
    crypto::HashStream rng = crypto::HashStream::derive(seed, "features", ordinal);

    std::vector<std::uint64_t> macro_counts;
    std::uint64_t macro_total = 0;
    for (const auto& b : model.buckets) {
        macro_counts.push_back(b.count);
        macro_total += b.count;
    }
    const MacroBucket& macro = model.buckets[pick_weighted(rng, macro_counts, macro_total)];
    std::vector<std::uint64_t> cell_counts;
    for (const auto& c : macro.cells) cell_counts.push_back(c.count);
    const SynthCell& cell = macro.cells[pick_weighted(rng, cell_counts, macro.count)];

    const double lo = std::max(macro.lower, static_cast<double>(cell.key.inputs) + 1.0);
    const double hi = std::max(macro.upper, lo);
    for (int amount_attempt = 0; amount_attempt < 100; ++amount_attempt) {
        double amount = -1;
        for (int draw = 0; draw < 100 && !(amount >= lo && amount <= hi); ++draw) {
            amount = std::exp(cell.mixture.sample_log(rng));
        }
        amount = std::clamp(amount, lo, hi);
        auto inputs_amount = static_cast<Satoshi>(std::llround(amount));

        BucketMatch m = fees.locate(cell.key, static_cast<double>(inputs_amount));
        for (int fee_attempt = 0; fee_attempt < 100; ++fee_attempt) {
            Satoshi fee = m.bucket->pmf.sample(rng);
            if (fee < inputs_amount) {
                if (fallback) *fallback = m.fallback;
                return {cell.key.inputs, cell.key.outputs, fee, inputs_amount, inputs_amount - fee};
            }
        }
    }
    throw Error(Errc::ModelMismatch, "could not draw a fee below the sampled amount");
}

SampledFeatures sample_features_serial(const SynthModel& model, const FeeModel& fees, std::size_t count,
                                       const crypto::Seed& seed, std::size_t first)
{
    SampledFeatures out;
    out.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        bool fb = false;
        out.records.push_back(sample_one(model, fees, seed, first + i, &fb));
        if (fb) out.fallback_ordinals.push_back(first + i);
    }
    return out;
}

SampledFeatures sample_features(const SynthModel& model, const FeeModel& fees, std::size_t count,
                                const crypto::Seed& seed, std::size_t first)
{
    SampledFeatures out;
    out.records.resize(count);
    std::vector<char> flags(count, 0);
    std::exception_ptr failure;
    std::mutex failure_mu;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            bool fb = false;
            const auto idx = static_cast<std::size_t>(i);
            out.records[idx] = sample_one(model, fees, seed, first + idx, &fb);
            flags[idx] = fb ? 1 : 0;
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (std::size_t i = 0; i < count; ++i) {
        if (flags[i]) out.fallback_ordinals.push_back(first + i);
    }
    return out;
}

nlohmann::json SynthModel::to_json() const
{
    nlohmann::json j;
    j["version"] = kFormatVersion;
    j["percentile_edges"] = percentile_edges;
    j["clip_lower"] = clip_lower;
    j["clip_upper"] = clip_upper;
    j["config"] = {{"components", config.components},
                   {"max_iterations", config.max_iterations},
                   {"tolerance", config.tolerance},
                   {"min_variance", config.min_variance}};
    j["seed"] = to_hex(seed);
    j["training_records"] = training_records;
    j["buckets"] = nlohmann::json::array();
    for (const auto& b : buckets) {
        nlohmann::json jb{{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}};
        jb["cells"] = nlohmann::json::array();
        for (const auto& c : b.cells) {
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& m : c.mixture.components) {
                comps.push_back({{"weight", m.weight}, {"mean", m.mean}, {"stddev", m.stddev}});
            }
            jb["cells"].push_back({{"input_cnt", c.key.inputs},
                                   {"output_cnt", c.key.outputs},
                                   {"count", c.count},
                                   {"components", comps},
                                   {"log_likelihood", c.mixture.log_likelihood},
                                   {"iterations", c.mixture.iterations},
                                   {"converged", c.mixture.converged}});
        }
        j["buckets"].push_back(jb);
    }
    return j;
}

SynthModel SynthModel::from_json(const nlohmann::json& j)
{
    try {
        if (j.at("version").get<int>() != kFormatVersion) {
            throw Error(Errc::SchemaError, "unsupported synthesizer version");
        }
        SynthModel m;
        m.percentile_edges = j.at("percentile_edges").get<std::array<double, 4>>();
        m.clip_lower = j.at("clip_lower").get<double>();
        m.clip_upper = j.at("clip_upper").get<double>();
        const auto& cfg = j.at("config");
        m.config.components = cfg.at("components").get<int>();
        m.config.max_iterations = cfg.at("max_iterations").get<int>();
        m.config.tolerance = cfg.at("tolerance").get<double>();
        m.config.min_variance = cfg.at("min_variance").get<double>();
        m.seed = array_from_hex<32>(j.at("seed").get<std::string>());
        m.training_records = j.at("training_records").get<std::uint64_t>();
        for (const auto& jb : j.at("buckets")) {
            MacroBucket b;
            b.lower = jb.at("lower").get<double>();
            b.upper = jb.at("upper").get<double>();
            b.count = jb.at("count").get<std::uint64_t>();
            std::uint64_t cell_total = 0;
            for (const auto& jc : jb.at("cells")) {
                SynthCell c;
                c.key = {jc.at("input_cnt").get<int>(), jc.at("output_cnt").get<int>()};
                c.count = jc.at("count").get<std::uint64_t>();
                cell_total += c.count;
                for (const auto& comp : jc.at("components")) {
                    c.mixture.components.push_back(
                        {comp.at("weight").get<double>(), comp.at("mean").get<double>(), comp.at("stddev").get<double>()});
                }
                c.mixture.log_likelihood = jc.at("log_likelihood").get<double>();
                c.mixture.iterations = jc.at("iterations").get<int>();
                c.mixture.converged = jc.at("converged").get<bool>();
                if (c.mixture.components.empty()) throw Error(Errc::SchemaError, "cell without mixture components");
                b.cells.push_back(std::move(c));
            }
            if (b.cells.empty() || cell_total != b.count) {
                throw Error(Errc::SchemaError, "macro bucket cell counts do not add up");
            }
            m.buckets.push_back(std::move(b));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("synthesizer: ") + e.what());
    }
}

void TrainedPipeline::save(const std::filesystem::path& path) const
{
    nlohmann::json j{{"format", "abc-pipeline"}, {"version", 1}, {"synth", synth.to_json()}, {"fees", fees.to_json()}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << j.dump(1) << '\n';
}

TrainedPipeline TrainedPipeline::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("pipeline file: ") + e.what());
    }
    if (j.value("format", "") != "abc-pipeline") throw Error(Errc::SchemaError, "not a pipeline file");
    return {SynthModel::from_json(j.at("synth")), FeeModel::from_json(j.at("fees"))};
}

TrainedPipeline train_pipeline(const Corpus& corpus, std::size_t n_intervals, const MixtureConfig& cfg,
                               const crypto::Seed& seed)
{
    return {fit_synth_model(corpus.records, {1, 20, 80, 99}, cfg, seed), build_fee_model(corpus.records, n_intervals)};
}

} // namespace abc::masquerade
