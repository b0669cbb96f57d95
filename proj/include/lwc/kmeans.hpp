#ifndef LWC_KMEANS_HPP
#define LWC_KMEANS_HPP

#include <cstdint>
#include <vector>

#include "lwc/common.hpp"

namespace lwc {

struct KMeansOptions {
    int max_iterations = 100;
    /// Stop once no center moves further than this (Euclidean).
    double tolerance = 1e-6;
    /// Independent k-means++ starts; the lowest within-cluster sum of squares wins.
    int replicates = 1;
};

struct KMeansResult {
    Labels labels;
    Eigen::MatrixXd centers;
    double inertia = 0;
    int iterations = 0;
    /// Within-cluster sum of squares after each assignment step of the winning run.
    std::vector<double> inertia_history;
};

/**
 * Lloyd's algorithm with k-means++ seeding on the rows of `points`.
 * Empty clusters are re-seeded from the points farthest from their centers.
 * Deterministic for a fixed seed.
 */
KMeansResult kmeans_fit(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed,
                        const KMeansOptions& options = {});

inline Labels kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed) {
    return kmeans_fit(points, k, seed).labels;
}

}  // namespace lwc

#endif
