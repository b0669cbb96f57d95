#ifndef LWC_LWEA_HPP
#define LWC_LWEA_HPP

#include <vector>

#include "lwc/coassoc.hpp"
#include "lwc/consensus.hpp"

namespace lwc {

struct Merge {
    Index left = 0;
    Index right = 0;
    Index id = 0;
    double similarity = 0;
};

/**
 * @brief Merge history of average-link agglomeration over N leaves.
 *
 * Leaves are regions 0..N-1 and the t-th merge (0-based) creates region N+t.
 * Similarities are stored as seen at merge time and are not required to be
 * monotone.
 */
struct Dendrogram {
    Index leaves = 0;
    std::vector<Merge> merges;
};

namespace detail {
Dendrogram average_link(Eigen::MatrixXd similarity);
}

/**
 * Average-link agglomerative clustering of a symmetric similarity matrix.
 *
 * At every step the pair of regions with the highest average cross-pair
 * similarity is merged. Ties go to the pair whose (smaller min-member,
 * larger min-member) is lexicographically smallest. The diagonal is ignored.
 */
template <typename Derived>
Dendrogram build_dendrogram(const Eigen::MatrixBase<Derived>& similarity) {
    if (similarity.rows() != similarity.cols()) throw ParameterError("similarity matrix must be square");
    if (similarity.rows() < 2) throw ParameterError("need at least 2 objects to build a dendrogram");
    return detail::average_link(similarity.template cast<double>());
}

template <typename Scalar>
Dendrogram build_dendrogram(const Coassoc<Scalar>& matrix) {
    return build_dendrogram(matrix.values);
}

/// Clustering left after the first N-k merges, labelled by smallest member.
ConsensusResult cut_dendrogram(const Dendrogram& dendrogram, int k);

/// Locally weighted evidence accumulation: ECI-weighted co-association + average link, cut at k.
ConsensusResult lwea(const EnsembleView& view, double theta, int k);

/// Same pipeline on an explicit validity report (e.g. uniform weights).
ConsensusResult lwea(const EnsembleView& view, const ValidityReport& report, int k);

/// Classic evidence accumulation: plain co-association + average link.
ConsensusResult eac(const EnsembleView& view, int k);

}  // namespace lwc

#endif
