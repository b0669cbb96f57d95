#ifndef LWC_LWGP_HPP
#define LWC_LWGP_HPP

#include <cstdint>
#include <vector>

#include "lwc/consensus.hpp"
#include "lwc/validity.hpp"

namespace lwc {

struct BipartiteEdge {
    Index object = 0;
    Index cluster = 0;
    double weight = 0;
};

/**
 * @brief Object/cluster membership graph.
 *
 * Each object links to the M clusters that contain it, with the cluster's
 * ECI as link weight. There are no object-object or cluster-cluster links.
 */
struct BipartiteGraph {
    Index objects = 0;
    Index clusters = 0;
    std::vector<BipartiteEdge> edges;

    /// Dense N×n_c affinity; entry (i, c) is the weight of link (i, c) or 0.
    Eigen::MatrixXd affinity() const;
};

BipartiteGraph build_lwbg(const EnsembleView& view, const ValidityReport& report);

/// Segment of every node: object labels first, then cluster-node labels.
struct Segmentation {
    Labels objects;
    Labels clusters;
    Warnings warnings;
};

struct TcutOptions {
    int kmeans_replicates = 10;
    int kmeans_max_iterations = 100;
    /// Eigenpair residual above which a warning is emitted.
    double residual_tolerance = 1e-10;
    /// Passes of greedy single-node moves after k-means (0 disables).
    int refine_passes = 50;
    /// Passes that allow temporarily worse moves, run only on graphs up to the node limit.
    int move_passes = 10;
    Index move_pass_node_limit = 1000;
    /// For k = 2, leading non-trivial eigenvectors tried as threshold sweeps.
    int sweep_vectors = 4;
};

/**
 * Transfer-cut spectral segmentation of the whole node set into k segments.
 *
 * The k leading eigenvectors are computed on the n_c×n_c cluster-side graph
 * BᵀD_o⁻¹B, transferred to the object side, row-normalised and grouped by
 * seeded k-means. The grouping is then polished by node moves that strictly
 * lower the normalized cut; for k = 2 threshold sweeps along the leading
 * non-trivial eigenvectors are also considered. If the graph has at least k connected components the
 * components are used directly (greedily packed when there are more than k).
 */
Segmentation tcut_segment(const BipartiteGraph& graph, int k, std::uint64_t seed, const TcutOptions& options = {});

/// Object labels of tcut_segment; cluster nodes are dropped.
ConsensusResult tcut_partition(const BipartiteGraph& graph, int k, std::uint64_t seed,
                               const TcutOptions& options = {});

/// Σ_s cut(s, rest) / vol(s) over the non-empty segments of the full node set.
double normalized_cut(const BipartiteGraph& graph, std::span<const int> object_labels,
                      std::span<const int> cluster_labels);

/// Locally weighted graph partitioning.
ConsensusResult lwgp(const EnsembleView& view, double theta, int k, std::uint64_t seed);
ConsensusResult lwgp(const EnsembleView& view, const ValidityReport& report, int k, std::uint64_t seed);

}  // namespace lwc

#endif
