#ifndef LWC_VALIDITY_HPP
#define LWC_VALIDITY_HPP

#include <cmath>
#include <iosfwd>
#include <span>

#include "lwc/ensemble.hpp"

namespace lwc {

/// Default θ for ECI; values in [0.2, 1] are recommended.
inline constexpr double kDefaultTheta = 0.4;

/**
 * Entropy in bits of the distribution `counts / total`. Zero counts
 * contribute nothing. Terms are summed in index order.
 */
template <typename Scalar = double>
Scalar entropy_bits(std::span<const Index> counts, Index total) {
    Scalar h = 0;
    const Scalar n = static_cast<Scalar>(total);
    for (const Index c : counts) {
        if (c == 0) continue;
        const Scalar p = static_cast<Scalar>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

/// Uncertainty H^m(C) of a cluster with respect to base clustering `column`, in bits.
double uncertainty_wrt_clustering(const ClusterRecord& cluster, Index column, const EnsembleView& view);

/// Uncertainty H^Π(C) = Σ_m H^m(C), in bits.
double uncertainty_wrt_ensemble(const ClusterRecord& cluster, const EnsembleView& view);

/**
 * Ensemble-driven cluster index, exp(-H / (θ M)).
 * Throws ParameterError for θ <= 0, M < 1 or negative uncertainty.
 */
template <typename Scalar>
Scalar eci(Scalar uncertainty, Scalar theta, Index ensemble_size) {
    if (!(theta > 0)) throw ParameterError("theta must be positive");
    if (ensemble_size < 1) throw ParameterError("ensemble size must be at least 1");
    if (uncertainty < 0) throw ParameterError("uncertainty must be non-negative");
    using std::exp;
    return exp(-uncertainty / (theta * static_cast<Scalar>(ensemble_size)));
}

struct ValidityReport {
    double theta = kDefaultTheta;
    Index ensemble_size = 0;
    /// H^Π per pooled cluster id, bits.
    Eigen::VectorXd uncertainty;
    /// ECI per pooled cluster id.
    Eigen::VectorXd eci;
};

/// Uncertainty and ECI for every cluster of the view. Deterministic.
ValidityReport annotate_validity(const EnsembleView& view, double theta = kDefaultTheta);

/// Report with every ECI forced to 1 (unweighted evidence accumulation).
ValidityReport uniform_validity(const EnsembleView& view);

/// CSV: cluster,source,size,uncertainty,eci
void write_validity_csv(std::ostream& out, const EnsembleView& view, const ValidityReport& report);

}  // namespace lwc

#endif
