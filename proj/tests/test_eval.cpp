#include "doctest.h"

#include "support/errc.hpp"

#include <cmath>
#include <map>
#include <set>

#include "abc/eval/cluster.hpp"
#include "abc/eval/metrics.hpp"

using namespace abc;
using namespace abc::eval;
using tx::Satoshi;

using support::code_of;

namespace {

crypto::Seed seed_of(const char* s) { return crypto::seed_from_string(s); }

// Pair enumeration, no contingency table.
double ari_pairs(const std::vector<int>& p, const std::vector<int>& t)
{
    double same_both = 0, same_p = 0, same_t = 0, pairs = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            pairs += 1;
            same_p += p[i] == p[j];
            same_t += t[i] == t[j];
            same_both += p[i] == p[j] && t[i] == t[j];
        }
    }
    const double expected = same_p * same_t / pairs;
    const double top = (same_p + same_t) / 2;
    return (same_both - expected) / (top - expected);
}

double nmi_direct(const std::vector<int>& p, const std::vector<int>& t)
{
    const double n = static_cast<double>(p.size());
    std::map<int, double> cp, ct;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cp[p[i]] += 1;
        ct[t[i]] += 1;
        joint[{p[i], t[i]}] += 1;
    }
    auto entropy = [&](const std::map<int, double>& c) {
        double h = 0;
        for (auto [k, v] : c) h -= v / n * std::log(v / n);
        return h;
    };
    double mi = 0;
    for (auto [k, v] : joint) mi += v / n * std::log(v * n / (cp[k.first] * ct[k.second]));
    return mi / ((entropy(cp) + entropy(ct)) / 2);
}

std::vector<TxFeatureRecord> blob(std::size_t n, int in, Satoshi base, crypto::HashStream& rng)
{
    std::vector<TxFeatureRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        const Satoshi amount = base + rng.below(base / 10);
        const Satoshi fee = 100 + rng.below(50);
        out.push_back({in, 2, fee, amount, amount - fee});
    }
    return out;
}

} // namespace

TEST_CASE("ARI and NMI on hand-worked labelings")
{
    std::vector<int> truth{0, 0, 0, 1, 1, 1};
    std::vector<int> pred{0, 0, 1, 1, 2, 2};
    // (2 - 6*3/15) / ((6+3)/2 - 6*3/15)
    CHECK(ari(pred, truth) == doctest::Approx(0.8 / 3.3));
    // MI = (2/3) ln 2, entropies ln 2 and ln 3
    CHECK(nmi(pred, truth) == doctest::Approx((2.0 / 3) * std::log(2.0) / ((std::log(2.0) + std::log(3.0)) / 2)));

    std::vector<int> a{0, 0, 1, 1}, b{0, 0, 1, 2};
    CHECK(ari(b, a) == doctest::Approx(4.0 / 7));
    CHECK(nmi(b, a) == doctest::Approx(0.8));

    CHECK(ari(truth, truth) == 1);
    CHECK(nmi(truth, truth) == doctest::Approx(1));
    std::vector<int> flipped{1, 1, 1, 0, 0, 0};
    CHECK(ari(flipped, truth) == doctest::Approx(1));
    std::vector<int> ones(6, 0);
    CHECK(ari(ones, ones) == 1);
    CHECK(nmi(ones, ones) == 1);
    CHECK(ari(ones, truth) == doctest::Approx(0));
    CHECK(nmi(ones, truth) == doctest::Approx(0));

    std::vector<int> shorter{0, 1};
    CHECK(code_of([&] { ari(shorter, truth); }) == Errc::LengthMismatch);
    CHECK(code_of([&] { nmi(shorter, truth); }) == Errc::LengthMismatch);
}

TEST_CASE("metrics agree with direct oracles and ignore label names")
{
    crypto::HashStream rng(seed_of("metric-oracle"));
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 20 + rng.below(60);
        std::vector<int> p(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = static_cast<int>(rng.below(2 + trial % 3));
            t[i] = static_cast<int>(rng.below(2));
        }
        if (std::set<int>(p.begin(), p.end()).size() < 2 || std::set<int>(t.begin(), t.end()).size() < 2) continue;
        CHECK(ari(p, t) == doctest::Approx(ari_pairs(p, t)).epsilon(1e-9));
        CHECK(nmi(p, t) == doctest::Approx(nmi_direct(p, t)).epsilon(1e-9));
        CHECK(ari(p, t) == doctest::Approx(ari(t, p)));
        CHECK(nmi(p, t) == doctest::Approx(nmi(t, p)));
        std::vector<int> renamed(p);
        for (int& x : renamed) x = 7 - 3 * x;
        CHECK(ari(renamed, t) == doctest::Approx(ari(p, t)));
        CHECK(nmi(renamed, t) == doctest::Approx(nmi(p, t)));
    }
}

TEST_CASE("random labelings average ARI near zero")
{
    crypto::HashStream rng(seed_of("chance"));
    double sum = 0;
    const int trials = 300;
    for (int k = 0; k < trials; ++k) {
        std::vector<int> p(200), t(200);
        for (std::size_t i = 0; i < 200; ++i) {
            p[i] = static_cast<int>(rng.below(2));
            t[i] = static_cast<int>(rng.below(2));
        }
        sum += ari(p, t);
    }
    CHECK(std::abs(sum / trials) < 0.005);
}

TEST_CASE("KS statistics")
{
    CHECK(ks_two_sample({1, 2, 3}, {4, 5, 6}) == 1);
    CHECK(ks_two_sample({1, 2, 3}, {3, 2, 1}) == 0);
    CHECK(ks_two_sample({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
    CHECK(ks_two_sample({1, 1, 2}, {1, 2, 2}) == doctest::Approx(1.0 / 3));

    const double support[] = {1, 2};
    const double probs[] = {0.5, 0.5};
    CHECK(ks_discrete({1, 1, 2, 2}, support, probs) == doctest::Approx(0));
    CHECK(ks_discrete({1, 1, 1, 1}, support, probs) == doctest::Approx(0.5));
    CHECK(ks_discrete({2, 2, 2, 2}, support, probs) == doctest::Approx(0.5));
}

TEST_CASE("standardize drops constant columns")
{
    std::vector<FeatureRow> rows{{1, 2, 3, 10, 7}, {1, 2, 5, 20, 15}, {1, 2, 7, 30, 23}};
    auto z = standardize(rows);
    CHECK(z.dims == 3);
    CHECK(z.dropped_columns == std::vector<std::size_t>{0, 1});
    // fee column 3,5,7: mean 5, population sd sqrt(8/3)
    CHECK(z.values[0] == doctest::Approx(-2 / std::sqrt(8.0 / 3)));
    CHECK(z.values[3] == doctest::Approx(0));
    std::vector<FeatureRow> flat(4, FeatureRow{1, 1, 1, 1, 1});
    CHECK(code_of([&] { standardize(flat); }) == Errc::DegenerateData);
    CHECK(code_of([&] { kmeans2(flat, seed_of("x")); }) == Errc::DegenerateData);
    CHECK(code_of([&] { kmeans2({rows[0]}, seed_of("x")); }) == Errc::InvalidArgument);
}

TEST_CASE("k-means separates two blobs and parallel equals serial")
{
    crypto::HashStream rng(seed_of("blobs"));
    auto small = blob(300, 1, 100000, rng);
    auto large = blob(200, 3, 90000000, rng);
    auto records = mix_records(small, large, 0.4, seed_of("blob-mix"));
    std::vector<FeatureRow> rows;
    std::vector<Label> labels;
    for (const auto& r : records) {
        rows.push_back(to_features(r.record));
        labels.push_back(r.label);
    }
    auto par = kmeans2(rows, seed_of("km"));
    auto ser = kmeans2_serial(rows, seed_of("km"));
    CHECK(par.labels == ser.labels);
    CHECK(par.inertia == ser.inertia);
    CHECK(par.restart == ser.restart);
    CHECK(ari(par.labels, label_ids(labels)) == doctest::Approx(1));
    CHECK(par.iterations >= 1);

    KmeansConfig one;
    one.restarts = 1;
    auto single = kmeans2(rows, seed_of("km"), one);
    CHECK(single.inertia >= par.inertia);

    auto fr = to_features({2, 3, 40, 1000, 960});
    CHECK(fr == FeatureRow{2, 3, 40, 1000, 960});
}

TEST_CASE("mixing honours the covert share")
{
    std::vector<TxFeatureRecord> real(1000, TxFeatureRecord{1, 1, 10, 1000, 990});
    std::vector<TxFeatureRecord> fake(1000, TxFeatureRecord{2, 2, 20, 2000, 1980});
    auto half = mix_datasets(real, fake, 0.5, seed_of("m"));
    CHECK(half.size() == 2000);
    CHECK(half.count(Label::covert) == 1000);

    auto fifth = mix_datasets(real, fake, 0.2, seed_of("m"));
    CHECK(fifth.count(Label::real) == 1000);
    CHECK(fifth.count(Label::covert) == 250);

    std::vector<TxFeatureRecord> few(300, fake[0]);
    auto scarce = mix_datasets(real, few, 0.5, seed_of("m"));
    CHECK(scarce.count(Label::real) == 300);
    CHECK(scarce.count(Label::covert) == 300);

    CHECK(mix_datasets(real, fake, 0.0, seed_of("m")).count(Label::covert) == 0);
    CHECK(mix_datasets(real, fake, 1.0, seed_of("m")).count(Label::real) == 0);

    auto again = mix_datasets(real, fake, 0.5, seed_of("m"));
    CHECK(again.labels == half.labels);
    auto other = mix_datasets(real, fake, 0.5, seed_of("n"));
    CHECK(other.labels != half.labels);
    // shuffled, not concatenated
    std::size_t covert_first_half = 0;
    for (std::size_t i = 0; i < 1000; ++i) covert_first_half += half.labels[i] == Label::covert;
    CHECK(covert_first_half > 400);
    CHECK(covert_first_half < 600);
}

TEST_CASE("blackbox evaluation reports scores and sizes")
{
    crypto::HashStream rng(seed_of("bb"));
    auto a = blob(400, 1, 50000, rng);
    auto b = blob(400, 1, 50000, rng);
    auto set = mix_datasets(a, b, 0.5, seed_of("bb-mix"));
    auto rep = evaluate_blackbox(set, seed_of("bb-km"));
    CHECK(rep.n_real == 400);
    CHECK(rep.n_covert == 400);
    CHECK(std::abs(rep.ari) < 0.02);
    CHECK(rep.nmi < 0.02);
    CHECK(rep.dropped_columns == std::vector<std::size_t>{0, 1});
    auto j = rep.to_json();
    CHECK(j["n_real"] == 400);
    CHECK(j.contains("ari"));
}
