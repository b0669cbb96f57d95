#ifndef LWC_COASSOC_HPP
#define LWC_COASSOC_HPP

#include <iomanip>
#include <ostream>

#include "lwc/validity.hpp"

namespace lwc {

enum class CoassocKind { CA, LWCA };

/**
 * @brief Symmetric N×N co-association matrix with entries in [0, 1].
 *
 * For CA the diagonal is 1. For LWCA the diagonal of object i is the mean
 * ECI of the clusters containing it.
 */
template <typename Scalar>
struct Coassoc {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Matrix values;
    CoassocKind kind = CoassocKind::CA;

    Index size() const { return values.rows(); }
    Scalar operator()(Index i, Index j) const { return values(i, j); }
};

using CoassocMatrix = Coassoc<double>;

namespace detail {

/// Sums weight(c) over every member pair of every cluster c, in cluster-id order, then divides by M once.
template <typename Scalar, typename WeightFn>
typename Coassoc<Scalar>::Matrix accumulate_coassoc(const EnsembleView& view, WeightFn weight) {
    const Index n = view.objects();
    typename Coassoc<Scalar>::Matrix a = Coassoc<Scalar>::Matrix::Zero(n, n);
    for (const auto& cluster : view.clusters()) {
        const Scalar w = static_cast<Scalar>(weight(cluster.id));
        const auto& members = cluster.members;
        for (std::size_t p = 0; p < members.size(); ++p) {
            const Index i = members[p];
            a(i, i) += w;
            for (std::size_t q = p + 1; q < members.size(); ++q) a(i, members[q]) += w;
        }
    }
    // Members are sorted ascending, so only the upper triangle was written.
    a.template triangularView<Eigen::StrictlyLower>() = a.transpose();
    a /= static_cast<Scalar>(view.clusterings());
    return a;
}

}  // namespace detail

/// Classic co-association matrix: fraction of base clusterings grouping i and j together.
template <typename Scalar = double>
Coassoc<Scalar> build_ca(const EnsembleView& view) {
    return {detail::accumulate_coassoc<Scalar>(view, [](Index) { return 1.0; }), CoassocKind::CA};
}

/// Locally weighted co-association matrix: each co-occurrence weighted by the shared cluster's ECI.
template <typename Scalar = double>
Coassoc<Scalar> build_lwca(const EnsembleView& view, const ValidityReport& report) {
    if (report.eci.size() != view.cluster_count() || report.ensemble_size != view.clusterings()) {
        throw ParameterError("validity report does not match ensemble view");
    }
    return {detail::accumulate_coassoc<Scalar>(view, [&](Index c) { return report.eci[c]; }), CoassocKind::LWCA};
}

/// Lower triangle including the diagonal, one matrix row per line.
template <typename Scalar>
void write_lower_triangle(std::ostream& out, const Coassoc<Scalar>& matrix) {
    out << std::setprecision(17);
    for (Index i = 0; i < matrix.size(); ++i) {
        for (Index j = 0; j <= i; ++j) {
            if (j) out << ',';
            out << matrix(i, j);
        }
        out << '\n';
    }
}

}  // namespace lwc

#endif
