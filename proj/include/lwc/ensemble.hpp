#ifndef LWC_ENSEMBLE_HPP
#define LWC_ENSEMBLE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lwc/common.hpp"

namespace lwc {

/**
 * @brief An ensemble of M base clusterings over N objects.
 *
 * Labels are stored remapped to dense 0-based ids per column, in order of
 * first appearance. The original label values are kept for diagnostics.
 */
class LabelMatrix {
public:
    /// Validates `labels` (N >= 2, M >= 1, non-negative cells) and remaps each column.
    explicit LabelMatrix(const LabelArray& labels);

    Index objects() const { return dense_.rows(); }
    Index clusterings() const { return dense_.cols(); }

    /// Dense label of object i in base clustering m.
    int operator()(Index i, Index m) const { return dense_(i, m); }

    const LabelArray& dense() const { return dense_; }

    /// Number of clusters n^m in base clustering m.
    int clusters_in(Index m) const { return static_cast<int>(original_[m].size()); }

    /// Total cluster count n_c over all columns.
    Index total_clusters() const;

    /// Original label value for dense label `dense_label` of column m.
    long long original_label(Index m, int dense_label) const { return original_[m][dense_label]; }

    /// Non-fatal diagnostics collected on construction (degenerate columns).
    const Warnings& warnings() const { return warnings_; }

    /// Assembles a matrix column-wise, one label vector per base clustering.
    static LabelMatrix from_columns(std::span<const Labels> columns);

private:
    LabelArray dense_;
    std::vector<std::vector<long long>> original_;
    Warnings warnings_;
};

/// Equality of partition structure (dense labels), ignoring original label values.
bool same_partitions(const LabelMatrix& a, const LabelMatrix& b);

/**
 * Reads the label-matrix CSV format: comma separated, one row per object,
 * one integer column per base clustering, optional first line starting with '#'.
 * Throws ParseError on ragged rows, non-integer cells or empty input.
 */
LabelMatrix parse_label_matrix(std::istream& in);

/// Writes dense labels as CSV, no header.
void write_label_matrix(std::ostream& out, const LabelMatrix& labels);

/// One label per line.
Labels read_labels(std::istream& in);
void write_labels(std::ostream& out, std::span<const int> labels);

struct ClusterRecord {
    Index id = 0;
    Index source = 0;
    std::vector<Index> members;
    /// H^Pi in bits, set by annotate_validity.
    std::optional<double> uncertainty;
    /// ECI weight in (0, 1], set by annotate_validity.
    std::optional<double> eci;

    Index size() const { return static_cast<Index>(members.size()); }
};

/**
 * @brief The pooled cluster set of an ensemble.
 *
 * Clusters are ordered by column and then by dense label, so the id of the
 * cluster with label l in column m is `column_offset(m) + l`.
 */
class EnsembleView {
public:
    explicit EnsembleView(LabelMatrix labels);

    const LabelMatrix& labels() const { return labels_; }
    Index objects() const { return labels_.objects(); }
    Index clusterings() const { return labels_.clusterings(); }

    std::span<const ClusterRecord> clusters() const { return clusters_; }
    const ClusterRecord& cluster(Index id) const { return clusters_[static_cast<std::size_t>(id)]; }
    Index cluster_count() const { return static_cast<Index>(clusters_.size()); }

    Index column_offset(Index m) const { return offsets_[static_cast<std::size_t>(m)]; }

    /// Pooled id of Cls^m(o_i).
    Index cluster_of(Index i, Index m) const { return offsets_[static_cast<std::size_t>(m)] + labels_(i, m); }

    /// Copy with uncertainty and ECI filled in for every cluster.
    EnsembleView annotated(std::span<const double> uncertainty, std::span<const double> eci) const;

private:
    LabelMatrix labels_;
    std::vector<ClusterRecord> clusters_;
    std::vector<Index> offsets_;
};

EnsembleView build_ensemble_view(LabelMatrix labels);

}  // namespace lwc

#endif
