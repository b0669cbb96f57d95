#include "lwc/validity.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

namespace lwc {

double uncertainty_wrt_clustering(const ClusterRecord& cluster, Index column, const EnsembleView& view) {
    if (column < 0 || column >= view.clusterings()) throw ParameterError("column out of range");
    std::vector<Index> counts(static_cast<std::size_t>(view.labels().clusters_in(column)), 0);
    for (const Index i : cluster.members) ++counts[static_cast<std::size_t>(view.labels()(i, column))];
    return entropy_bits(std::span<const Index>(counts), cluster.size());
}

double uncertainty_wrt_ensemble(const ClusterRecord& cluster, const EnsembleView& view) {
    double h = 0;
    for (Index m = 0; m < view.clusterings(); ++m) h += uncertainty_wrt_clustering(cluster, m, view);
    return h;
}

ValidityReport annotate_validity(const EnsembleView& view, double theta) {
    if (!(theta > 0)) throw ParameterError("theta must be positive");
    const Index n = view.objects();
    const Index m_count = view.clusterings();
    const auto& labels = view.labels();

    ValidityReport report;
    report.theta = theta;
    report.ensemble_size = m_count;
    report.uncertainty = Eigen::VectorXd::Zero(view.cluster_count());
    report.eci.resize(view.cluster_count());

    // One contingency table per (source, target) column pair, filled in a
    // single pass over objects. Row r of the table for source s is the
    // scatter of cluster (s, r) over the clusters of the target column.
    std::vector<Index> table;
    for (Index source = 0; source < m_count; ++source) {
        const Index rows = labels.clusters_in(source);
        for (Index target = 0; target < m_count; ++target) {
            if (target == source) continue;  // own column contributes exactly 0
            const Index cols = labels.clusters_in(target);
            table.assign(static_cast<std::size_t>(rows * cols), 0);
            for (Index i = 0; i < n; ++i) ++table[static_cast<std::size_t>(labels(i, source) * cols + labels(i, target))];
            for (Index r = 0; r < rows; ++r) {
                const Index id = view.column_offset(source) + r;
                const std::span<const Index> row(table.data() + r * cols, static_cast<std::size_t>(cols));
                report.uncertainty[id] += entropy_bits(row, view.cluster(id).size());
            }
        }
    }
    for (Index c = 0; c < view.cluster_count(); ++c) report.eci[c] = eci(report.uncertainty[c], theta, m_count);
    return report;
}

ValidityReport uniform_validity(const EnsembleView& view) {
    ValidityReport report;
    report.theta = std::numeric_limits<double>::infinity();
    report.ensemble_size = view.clusterings();
    report.uncertainty = Eigen::VectorXd::Zero(view.cluster_count());
    report.eci = Eigen::VectorXd::Ones(view.cluster_count());
    return report;
}

void write_validity_csv(std::ostream& out, const EnsembleView& view, const ValidityReport& report) {
    if (report.eci.size() != view.cluster_count()) throw ParameterError("report does not match view");
    out << "cluster,source,size,uncertainty,eci\n";
    out << std::setprecision(17);
    for (const auto& c : view.clusters()) {
        out << c.id << ',' << c.source << ',' << c.size() << ',' << report.uncertainty[c.id] << ','
            << report.eci[c.id] << '\n';
    }
}

}  // namespace lwc
