#include "abc/eval/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abc::eval {

namespace {

struct Run {
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

double sq_dist(const double* a, const double* b, std::size_t d)
{
    double s = 0;
    for (std::size_t k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

Run lloyd(const Standardized& data, crypto::HashStream rng, const KmeansConfig& cfg)
{
    const std::size_t d = data.dims;
    const std::size_t n = data.values.size() / d;
    const double* x = data.values.data();

    // k-means++ for two centers.
    std::vector<double> centers(2 * d);
    const std::size_t first = rng.below(n);
    std::copy(x + first * d, x + (first + 1) * d, centers.begin());
    std::vector<double> d2(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = sq_dist(x + i * d, centers.data(), d);
        sum += d2[i];
    }
    double target = rng.uniform() * sum;
    std::size_t second = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (target < d2[i]) {
            second = i;
            break;
        }
        target -= d2[i];
    }
    if (d2[second] == 0) {
        second = static_cast<std::size_t>(std::max_element(d2.begin(), d2.end()) - d2.begin());
    }
    std::copy(x + second * d, x + (second + 1) * d, centers.begin() + static_cast<std::ptrdiff_t>(d));

    Run run;
    run.labels.assign(n, 0);
    std::vector<double> dist(n);
    double prev = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        double inertia = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sq_dist(x + i * d, centers.data(), d);
            const double b = sq_dist(x + i * d, centers.data() + d, d);
            run.labels[i] = b < a ? 1 : 0;
            dist[i] = std::min(a, b);
            inertia += dist[i];
        }
        run.inertia = inertia;
        run.iterations = iter;
        if (prev - inertia <= cfg.tolerance * prev) break;
        prev = inertia;

        std::vector<double> next(2 * d, 0.0);
        std::size_t count[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(run.labels[i]);
            ++count[c];
            for (std::size_t k = 0; k < d; ++k) next[c * d + k] += x[i * d + k];
        }
        for (std::size_t c = 0; c < 2; ++c) {
            if (count[c] == 0) {
                // Reseed an empty cluster at the worst-served point.
                const std::size_t far =
                    static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
                std::copy(x + far * d, x + (far + 1) * d, next.begin() + static_cast<std::ptrdiff_t>(c * d));
                continue;
            }
            for (std::size_t k = 0; k < d; ++k) next[c * d + k] /= static_cast<double>(count[c]);
        }
        centers = std::move(next);
    }
    return run;
}

KmeansResult finish(std::vector<Run>& runs, const Standardized& data)
{
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].inertia < runs[best].inertia) best = r;
    }
    KmeansResult out;
    out.labels = std::move(runs[best].labels);
    out.inertia = runs[best].inertia;
    out.iterations = runs[best].iterations;
    out.restart = static_cast<int>(best);
    out.dropped_columns = data.dropped_columns;
    return out;
}

Standardized prepare(const std::vector<FeatureRow>& rows, const KmeansConfig& cfg)
{
    if (rows.size() < 2) throw Error(Errc::InvalidArgument, "k-means needs at least two rows");
    if (cfg.restarts < 1 || cfg.max_iterations < 1) throw Error(Errc::InvalidArgument, "bad k-means configuration");
    return standardize(rows);
}

} // namespace

Standardized standardize(const std::vector<FeatureRow>& rows)
{
    if (rows.empty()) throw Error(Errc::InvalidArgument, "nothing to standardize");
    const double n = static_cast<double>(rows.size());
    std::vector<std::size_t> keep;
    std::vector<double> mean, sd;
    Standardized out;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double m = 0;
        for (const auto& r : rows) m += r[c];
        m /= n;
        double v = 0;
        for (const auto& r : rows) v += (r[c] - m) * (r[c] - m);
        v /= n;
        if (!(v > 0)) {
            out.dropped_columns.push_back(c);
            continue;
        }
        keep.push_back(c);
        mean.push_back(m);
        sd.push_back(std::sqrt(v));
    }
    if (keep.empty()) throw Error(Errc::DegenerateData, "every feature column is constant");
    out.dims = keep.size();
    out.values.reserve(rows.size() * keep.size());
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < keep.size(); ++k) out.values.push_back((r[keep[k]] - mean[k]) / sd[k]);
    }
    return out;
}

KmeansResult kmeans2_serial(const std::vector<FeatureRow>& rows, const crypto::Seed& seed, const KmeansConfig& cfg)
{
    const Standardized data = prepare(rows, cfg);
    std::vector<Run> runs;
    for (int r = 0; r < cfg.restarts; ++r) {
        runs.push_back(lloyd(data, crypto::HashStream::derive(seed, "kmeans-restart", static_cast<std::uint64_t>(r)),
                             cfg));
    }
    return finish(runs, data);
}

KmeansResult kmeans2(const std::vector<FeatureRow>& rows, const crypto::Seed& seed, const KmeansConfig& cfg)
{
    const Standardized data = prepare(rows, cfg);
    std::vector<Run> runs(static_cast<std::size_t>(cfg.restarts));
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < cfg.restarts; ++r) {
        runs[static_cast<std::size_t>(r)] =
            lloyd(data, crypto::HashStream::derive(seed, "kmeans-restart", static_cast<std::uint64_t>(r)), cfg);
    }
    return finish(runs, data);
}

} // namespace abc::eval
