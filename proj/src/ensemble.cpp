#include "lwc/ensemble.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace lwc {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

long long parse_cell(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": non-integer cell '" + std::string(cell) + "'");
    }
    return value;
}

}  // namespace

LabelMatrix::LabelMatrix(const LabelArray& labels) : dense_(labels.rows(), labels.cols()) {
    if (labels.rows() < 2) throw ParseError("label matrix needs at least 2 objects");
    if (labels.cols() < 1) throw ParseError("label matrix needs at least 1 base clustering");

    original_.resize(static_cast<std::size_t>(labels.cols()));
    for (Index m = 0; m < labels.cols(); ++m) {
        std::unordered_map<long long, int> remap;
        auto& originals = original_[static_cast<std::size_t>(m)];
        for (Index i = 0; i < labels.rows(); ++i) {
            const long long value = labels(i, m);
            if (value < 0) {
                throw ParseError("negative label " + std::to_string(value) + " in column " + std::to_string(m));
            }
            const auto [it, inserted] = remap.try_emplace(value, static_cast<int>(originals.size()));
            if (inserted) originals.push_back(value);
            dense_(i, m) = it->second;
        }
        if (originals.size() == 1) {
            warnings_.push_back("column " + std::to_string(m) + " has a single cluster (degenerate clustering)");
        }
    }
}

Index LabelMatrix::total_clusters() const {
    Index total = 0;
    for (const auto& column : original_) total += static_cast<Index>(column.size());
    return total;
}

LabelMatrix LabelMatrix::from_columns(std::span<const Labels> columns) {
    if (columns.empty()) throw ParseError("no base clusterings given");
    const auto n = columns.front().size();
    LabelArray array(static_cast<Index>(n), static_cast<Index>(columns.size()));
    for (std::size_t m = 0; m < columns.size(); ++m) {
        if (columns[m].size() != n) throw ParseError("base clusterings differ in length");
        for (std::size_t i = 0; i < n; ++i) array(static_cast<Index>(i), static_cast<Index>(m)) = columns[m][i];
    }
    return LabelMatrix(array);
}

bool same_partitions(const LabelMatrix& a, const LabelMatrix& b) {
    return a.objects() == b.objects() && a.clusterings() == b.clusterings() && a.dense() == b.dense();
}

LabelMatrix parse_label_matrix(std::istream& in) {
    std::vector<std::vector<long long>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) continue;
        if (content.front() == '#') {
            if (!rows.empty() || line_no != 1) {
                throw ParseError("line " + std::to_string(line_no) + ": header allowed only on the first line");
            }
            continue;
        }
        std::vector<long long> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = content.find(',', start);
            row.push_back(parse_cell(content.substr(start, comma == std::string_view::npos ? comma : comma - start),
                                     line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("line " + std::to_string(line_no) + ": ragged rows (" + std::to_string(row.size()) +
                             " cells, expected " + std::to_string(rows.front().size()) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty label matrix");

    LabelArray array(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t m = 0; m < rows[i].size(); ++m) {
            const long long v = rows[i][m];
            if (v > std::numeric_limits<int>::max()) throw ParseError("label out of range: " + std::to_string(v));
            array(static_cast<Index>(i), static_cast<Index>(m)) = static_cast<int>(v);
        }
    }
    return LabelMatrix(array);
}

void write_label_matrix(std::ostream& out, const LabelMatrix& labels) {
    for (Index i = 0; i < labels.objects(); ++i) {
        for (Index m = 0; m < labels.clusterings(); ++m) {
            if (m) out << ',';
            out << labels(i, m);
        }
        out << '\n';
    }
}

Labels read_labels(std::istream& in) {
    Labels labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        const long long v = parse_cell(content, line_no);
        if (v < 0 || v > std::numeric_limits<int>::max()) {
            throw ParseError("line " + std::to_string(line_no) + ": label out of range");
        }
        labels.push_back(static_cast<int>(v));
    }
    if (labels.empty()) throw ParseError("empty label file");
    return labels;
}

void write_labels(std::ostream& out, std::span<const int> labels) {
    for (const int label : labels) out << label << '\n';
}

EnsembleView::EnsembleView(LabelMatrix labels) : labels_(std::move(labels)) {
    const Index n = labels_.objects();
    const Index m_count = labels_.clusterings();
    offsets_.reserve(static_cast<std::size_t>(m_count));
    for (Index m = 0; m < m_count; ++m) {
        const Index offset = static_cast<Index>(clusters_.size());
        offsets_.push_back(offset);
        for (int l = 0; l < labels_.clusters_in(m); ++l) {
            ClusterRecord record;
            record.id = offset + l;
            record.source = m;
            clusters_.push_back(std::move(record));
        }
        for (Index i = 0; i < n; ++i) clusters_[static_cast<std::size_t>(offset + labels_(i, m))].members.push_back(i);
    }
    // Dense remapping assigns labels in order of first appearance, so every
    // label in [0, n^m) has at least one member.
    for (const auto& c : clusters_) {
        if (c.members.empty()) throw Error("internal: empty cluster after remapping");
    }
}

EnsembleView EnsembleView::annotated(std::span<const double> uncertainty, std::span<const double> eci) const {
    if (uncertainty.size() != clusters_.size() || eci.size() != clusters_.size()) {
        throw ParameterError("validity annotation size does not match cluster count");
    }
    EnsembleView copy = *this;
    for (std::size_t c = 0; c < copy.clusters_.size(); ++c) {
        copy.clusters_[c].uncertainty = uncertainty[c];
        copy.clusters_[c].eci = eci[c];
    }
    return copy;
}

EnsembleView build_ensemble_view(LabelMatrix labels) { return EnsembleView(std::move(labels)); }

}  // namespace lwc
