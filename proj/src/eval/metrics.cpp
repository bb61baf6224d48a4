#include "abc/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "abc/eval/cluster.hpp"

namespace abc::eval {

namespace {

struct Contingency {
    std::map<std::pair<int, int>, std::uint64_t> cells;
    std::map<int, std::uint64_t> rows; // pred
    std::map<int, std::uint64_t> cols; // truth
    std::uint64_t n = 0;
};

Contingency tabulate(std::span<const int> pred, std::span<const int> truth)
{
    if (pred.size() != truth.size()) {
        throw Error(Errc::LengthMismatch, std::to_string(pred.size()) + " predictions for " +
                                              std::to_string(truth.size()) + " labels");
    }
    Contingency t;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        ++t.cells[{pred[i], truth[i]}];
        ++t.rows[pred[i]];
        ++t.cols[truth[i]];
    }
    t.n = pred.size();
    return t;
}

double pairs(std::uint64_t k) { return static_cast<double>(k) * static_cast<double>(k > 0 ? k - 1 : 0) / 2.0; }

double entropy(const std::map<int, std::uint64_t>& counts, double n)
{
    double h = 0;
    for (const auto& [_, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

} // namespace

double ari(std::span<const int> pred, std::span<const int> truth)
{
    const Contingency t = tabulate(pred, truth);
    if (t.n == 0) return 1.0;
    if ((t.rows.size() == 1 && t.cols.size() == 1) || (t.rows.size() == t.n && t.cols.size() == t.n)) return 1.0;
    double index = 0, a = 0, b = 0;
    for (const auto& [_, c] : t.cells) index += pairs(c);
    for (const auto& [_, c] : t.rows) a += pairs(c);
    for (const auto& [_, c] : t.cols) b += pairs(c);
    const double expected = a * b / pairs(t.n);
    const double max_index = (a + b) / 2;
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

double nmi(std::span<const int> pred, std::span<const int> truth)
{
    const Contingency t = tabulate(pred, truth);
    if (t.n == 0) return 1.0;
    if (t.rows.size() == 1 && t.cols.size() == 1) return 1.0;
    const double n = static_cast<double>(t.n);
    double mi = 0;
    for (const auto& [key, c] : t.cells) {
        const double nij = static_cast<double>(c);
        const double ai = static_cast<double>(t.rows.at(key.first));
        const double bj = static_cast<double>(t.cols.at(key.second));
        mi += nij / n * std::log(n * nij / (ai * bj));
    }
    const double norm = (entropy(t.rows, n) + entropy(t.cols, n)) / 2;
    const double v = mi / std::max(norm, std::numeric_limits<double>::epsilon());
    return std::clamp(v, 0.0, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) throw Error(Errc::InvalidArgument, "KS needs two nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_discrete(std::vector<double> sample, std::span<const double> support, std::span<const double> probabilities)
{
    if (sample.empty() || support.empty()) throw Error(Errc::InvalidArgument, "KS needs a sample and a support");
    if (support.size() != probabilities.size()) throw Error(Errc::LengthMismatch, "support and probabilities differ");
    std::sort(sample.begin(), sample.end());
    std::vector<double> cdf(support.size());
    double acc = 0;
    for (std::size_t k = 0; k < support.size(); ++k) cdf[k] = acc += probabilities[k];

    const double m = static_cast<double>(sample.size());
    auto model_at = [&](double x, bool strict) {
        auto it = strict ? std::lower_bound(support.begin(), support.end(), x)
                         : std::upper_bound(support.begin(), support.end(), x);
        return it == support.begin() ? 0.0 : cdf[static_cast<std::size_t>(it - support.begin()) - 1];
    };
    auto sample_at = [&](double x, bool strict) {
        auto it = strict ? std::lower_bound(sample.begin(), sample.end(), x)
                         : std::upper_bound(sample.begin(), sample.end(), x);
        return static_cast<double>(it - sample.begin()) / m;
    };
    // Both CDFs are step functions; the supremum sits at a jump or just left of one.
    double d = 0;
    auto probe = [&](double x) {
        d = std::max(d, std::abs(sample_at(x, false) - model_at(x, false)));
        d = std::max(d, std::abs(sample_at(x, true) - model_at(x, true)));
    };
    for (double x : support) probe(x);
    for (double x : sample) probe(x);
    return d;
}

std::vector<int> label_ids(const std::vector<Label>& labels)
{
    std::vector<int> out;
    out.reserve(labels.size());
    for (Label l : labels) out.push_back(l == Label::covert ? 1 : 0);
    return out;
}

nlohmann::json BlackboxReport::to_json() const
{
    return {{"ari", ari},
            {"nmi", nmi},
            {"n_real", n_real},
            {"n_covert", n_covert},
            {"seed", to_hex(seed)},
            {"dropped_columns", dropped_columns}};
}

BlackboxReport evaluate_blackbox(const LabeledFeatureSet& set, const crypto::Seed& seed)
{
    if (set.rows.size() != set.labels.size()) throw Error(Errc::LengthMismatch, "rows and labels differ in count");
    KmeansResult km = kmeans2(set.rows, seed);
    const std::vector<int> truth = label_ids(set.labels);
    BlackboxReport rep;
    rep.ari = ari(km.labels, truth);
    rep.nmi = nmi(km.labels, truth);
    rep.n_real = set.count(Label::real);
    rep.n_covert = set.count(Label::covert);
    rep.seed = seed;
    rep.dropped_columns = km.dropped_columns;
    return rep;
}

} // namespace abc::eval
