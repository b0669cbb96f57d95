#include "lwc/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "lwc/random.hpp"

namespace lwc {
namespace {

Eigen::MatrixXd seed_kmeanspp(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, Rng& rng) {
    const Index n = points.rows();
    Eigen::MatrixXd centers(k, points.cols());
    Eigen::VectorXd d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());

    Index chosen = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    for (int c = 0; c < k; ++c) {
        if (c > 0) {
            const double total = d2.sum();
            if (total > 0) {
                double target = rng.uniform() * total;
                chosen = n - 1;
                for (Index i = 0; i < n; ++i) {
                    target -= d2[i];
                    if (target < 0 && d2[i] > 0) {
                        chosen = i;
                        break;
                    }
                }
                while (d2[chosen] == 0) --chosen;  // guard against rounding at the tail
            } else {
                chosen = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            }
        }
        centers.row(c) = points.row(chosen);
        for (Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], (points.row(i) - centers.row(c)).squaredNorm());
    }
    return centers;
}

KMeansResult lloyd(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, Rng& rng, const KMeansOptions& options) {
    const Index n = points.rows();
    KMeansResult r;
    r.centers = seed_kmeanspp(points, k, rng);
    r.labels.assign(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd dist(n);
    std::vector<Index> counts(static_cast<std::size_t>(k));

    for (r.iterations = 1; r.iterations <= options.max_iterations; ++r.iterations) {
        double inertia = 0;
        for (Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (points.row(i) - r.centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            r.labels[static_cast<std::size_t>(i)] = best;
            dist[i] = best_d;
            inertia += best_d;
        }
        r.inertia = inertia;
        r.inertia_history.push_back(inertia);

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, points.cols());
        std::fill(counts.begin(), counts.end(), 0);
        for (Index i = 0; i < n; ++i) {
            next.row(r.labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(r.labels[static_cast<std::size_t>(i)])];
        }
        // Points ordered by distance to their center, farthest first, for re-seeding.
        std::vector<Index> far;
        bool reseeded = false;
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
                continue;
            }
            if (far.empty()) {
                far.resize(static_cast<std::size_t>(n));
                std::iota(far.begin(), far.end(), Index{0});
                std::stable_sort(far.begin(), far.end(), [&](Index a, Index b) { return dist[a] > dist[b]; });
            }
            const Index p = far.front();
            far.erase(far.begin());
            next.row(c) = points.row(p);
            dist[p] = 0;
            reseeded = true;
        }
        const double shift = (next - r.centers).rowwise().norm().maxCoeff();
        r.centers = std::move(next);
        if (!reseeded && shift < options.tolerance) break;
    }
    r.iterations = std::min(r.iterations, options.max_iterations);
    return r;
}

}  // namespace

KMeansResult kmeans_fit(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed,
                        const KMeansOptions& options) {
    if (points.rows() < 1 || points.cols() < 1) throw ParameterError("k-means needs a non-empty point set");
    if (k < 1 || k > points.rows()) {
        throw ParameterError("k must be in [1, " + std::to_string(points.rows()) + "], got " + std::to_string(k));
    }
    if (!points.allFinite()) throw ParameterError("k-means input contains non-finite values");
    if (options.replicates < 1 || options.max_iterations < 1) throw ParameterError("invalid k-means options");

    KMeansResult best;
    for (int rep = 0; rep < options.replicates; ++rep) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        KMeansResult r = lloyd(points, k, rng, options);
        if (rep == 0 || r.inertia < best.inertia) best = std::move(r);
    }
    return best;
}

}  // namespace lwc
