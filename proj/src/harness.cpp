#include "lwc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "lwc/kmeans.hpp"
#include "lwc/lwea.hpp"
#include "lwc/lwgp.hpp"
#include "lwc/metrics.hpp"
#include "lwc/random.hpp"

namespace lwc {
namespace {

constexpr std::uint64_t kPoolStream = 0x706f6f6c;      // "pool"
constexpr std::uint64_t kEnsembleStream = 0x656e7362;  // "ensb"
constexpr std::uint64_t kPartitionStream = 0x74637574; // "tcut"

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

double parse_real(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": not a real number '" + std::string(cell) + "'");
    }
    return value;
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

int distinct(std::span<const int> labels) { return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size()); }

}  // namespace

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 2) throw ParseError("feature matrix needs at least 2 objects");
    if (values_.cols() < 1) throw ParseError("feature matrix needs at least 1 dimension");
    if (!values_.allFinite()) throw ParseError("feature matrix contains non-finite values");
}

FeatureMatrix read_features(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) continue;
        if (content.front() == '#') {
            if (line_no != 1) throw ParseError("line " + std::to_string(line_no) + ": header allowed only on the first line");
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = content.find(',', start);
            row.push_back(parse_real(content.substr(start, comma == std::string_view::npos ? comma : comma - start), line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("line " + std::to_string(line_no) + ": ragged rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty feature file");
    Eigen::MatrixXd values(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return FeatureMatrix(std::move(values));
}

void write_features(std::ostream& out, const FeatureMatrix& features) {
    out << std::setprecision(17);
    for (Index i = 0; i < features.objects(); ++i) {
        for (Index j = 0; j < features.dimensions(); ++j) {
            if (j) out << ',';
            out << features.values()(i, j);
        }
        out << '\n';
    }
}

KPolicy parse_k_policy(std::string_view name) {
    if (name == "true-k" || name == "true") return KPolicy::TrueK;
    if (name == "best-k" || name == "best") return KPolicy::BestK;
    if (name == "fixed") return KPolicy::Fixed;
    throw ParameterError("unknown k policy '" + std::string(name) + "'");
}

int pool_k_max(Index objects) {
    Index r = static_cast<Index>(std::sqrt(static_cast<double>(objects)));
    while (r * r < objects) ++r;
    while (r > 0 && (r - 1) * (r - 1) >= objects) --r;
    return static_cast<int>(r);
}

std::vector<Labels> generate_pool(const FeatureMatrix& features, int pool_size, std::uint64_t seed) {
    if (pool_size < 1) throw ParameterError("pool size must be positive");
    if (features.objects() < 4) throw ParameterError("need at least 4 objects to draw k in [2, ceil(sqrt(N))]");
    const int k_max = pool_k_max(features.objects());
    std::vector<Labels> pool;
    pool.reserve(static_cast<std::size_t>(pool_size));
    for (int p = 0; p < pool_size; ++p) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
        const int k = static_cast<int>(rng.between(2, k_max));
        pool.push_back(kmeans(features.values(), k, rng.next()));
    }
    return pool;
}

std::vector<Labels> generate_pool(const FeatureMatrix& features, const ExperimentConfig& config) {
    return generate_pool(features, config.pool_size, config.seed);
}

LabelMatrix draw_ensemble(std::span<const Labels> pool, int ensemble_size, std::uint64_t seed) {
    if (ensemble_size < 1 || ensemble_size > static_cast<int>(pool.size())) {
        throw ParameterError("ensemble size " + std::to_string(ensemble_size) + " not in [1, " +
                             std::to_string(pool.size()) + "]");
    }
    std::vector<std::size_t> index(pool.size());
    std::iota(index.begin(), index.end(), std::size_t{0});
    Rng rng(seed);
    // Partial Fisher-Yates: the first M slots become the sample.
    for (std::size_t i = 0; i < static_cast<std::size_t>(ensemble_size); ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(index.size() - i));
        std::swap(index[i], index[j]);
    }
    std::vector<Labels> columns;
    columns.reserve(static_cast<std::size_t>(ensemble_size));
    for (int m = 0; m < ensemble_size; ++m) columns.push_back(pool[index[static_cast<std::size_t>(m)]]);
    return LabelMatrix::from_columns(columns);
}

const SummaryRow* ExperimentReport::find(std::string_view method, double theta, int ensemble_size) const {
    for (const auto& row : summary) {
        if (row.method == method && row.theta == theta && row.ensemble_size == ensemble_size) return &row;
    }
    return nullptr;
}

ExperimentReport run_experiment(const FeatureMatrix& features, std::span<const int> truth, const ExperimentConfig& config) {
    if (static_cast<Index>(truth.size()) != features.objects()) throw ParameterError("truth length does not match features");
    if (config.runs < 1) throw ParameterError("runs must be positive");
    const std::vector<double> thetas = config.theta_grid.empty() ? std::vector<double>{config.theta} : config.theta_grid;
    const std::vector<int> sizes = config.m_grid.empty() ? std::vector<int>{config.ensemble_size} : config.m_grid;
    for (const double t : thetas) {
        if (!(t > 0)) throw ParameterError("theta must be positive");
    }

    const auto pool = generate_pool(features, config.pool_size, derive_seed(config.seed, kPoolStream));
    const int n = static_cast<int>(features.objects());
    std::vector<int> ks;
    switch (config.k_policy) {
        case KPolicy::TrueK: ks = {distinct(truth)}; break;
        case KPolicy::Fixed: ks = {config.fixed_k}; break;
        case KPolicy::BestK:
            for (int k = 2; k <= pool_k_max(n); ++k) ks.push_back(k);
            break;
    }
    for (const int k : ks) {
        if (k < 1 || k > n) throw ParameterError("consensus k out of range: " + std::to_string(k));
    }

    ExperimentReport report;
    for (const int m : sizes) {
        for (int run = 0; run < config.runs; ++run) {
            const std::uint64_t run_seed = derive_seed(config.seed ^ kEnsembleStream, (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint64_t>(run));
            const EnsembleView view(draw_ensemble(pool, m, run_seed));

            double base = 0;
            for (Index c = 0; c < view.clusterings(); ++c) {
                const Labels column(view.labels().dense().col(c).begin(), view.labels().dense().col(c).end());
                base += nmi(column, truth);
            }
            base /= static_cast<double>(view.clusterings());

            // EAC does not depend on θ; evaluated once per ensemble.
            const Dendrogram eac_tree = build_dendrogram(build_ca(view));
            double eac_best = -1;
            int eac_k = 0;
            for (const int k : ks) {
                const double score = nmi(cut_dendrogram(eac_tree, k).labels, truth);
                if (score > eac_best) std::tie(eac_best, eac_k) = std::pair{score, k};
            }

            for (const double theta : thetas) {
                const ValidityReport validity = annotate_validity(view, theta);
                const Dendrogram tree = build_dendrogram(build_lwca(view, validity));
                const BipartiteGraph graph = build_lwbg(view, validity);

                double lwea_best = -1, lwgp_best = -1;
                int lwea_k = 0, lwgp_k = 0;
                for (const int k : ks) {
                    const double a = nmi(cut_dendrogram(tree, k).labels, truth);
                    if (a > lwea_best) std::tie(lwea_best, lwea_k) = std::pair{a, k};
                    const int feasible = static_cast<int>(std::min<Index>(k, std::min<Index>(n, view.cluster_count())));
                    const double b = nmi(tcut_partition(graph, feasible, derive_seed(run_seed, kPartitionStream)).labels, truth);
                    if (b > lwgp_best) std::tie(lwgp_best, lwgp_k) = std::pair{b, feasible};
                }
                report.records.push_back({run, theta, m, "lwea", lwea_best, lwea_k});
                report.records.push_back({run, theta, m, "lwgp", lwgp_best, lwgp_k});
                report.records.push_back({run, theta, m, "eac", eac_best, eac_k});
                report.records.push_back({run, theta, m, "base", base, 0});
            }
        }
    }

    std::map<std::tuple<int, double, int>, std::vector<double>> groups;
    const std::vector<std::string> methods = {"lwea", "lwgp", "eac", "base"};
    for (const auto& r : report.records) {
        const auto method_index = static_cast<int>(std::find(methods.begin(), methods.end(), r.method) - methods.begin());
        groups[{method_index, r.theta, r.ensemble_size}].push_back(r.nmi);
    }
    for (const auto& [key, values] : groups) {
        const auto [mean, sd] = mean_std(values);
        report.summary.push_back({methods[static_cast<std::size_t>(std::get<0>(key))], std::get<1>(key), std::get<2>(key),
                                  static_cast<int>(values.size()), mean, sd});
    }
    return report;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "method,theta,M,runs,mean_nmi,std_nmi\n";
    for (const auto& row : report.summary) {
        out << row.method << ',' << std::setprecision(6) << row.theta << ',' << row.ensemble_size << ',' << row.runs
            << ',' << std::fixed << std::setprecision(6) << row.mean << ',' << row.stddev << std::defaultfloat << '\n';
    }
}

FeatureMatrix make_blobs(const Eigen::MatrixXd& centers, int per_blob, double stddev, std::uint64_t seed, Labels& truth) {
    if (per_blob < 1 || centers.rows() < 1) throw ParameterError("make_blobs: empty configuration");
    Rng rng(seed);
    Eigen::MatrixXd points(centers.rows() * per_blob, centers.cols());
    truth.clear();
    for (Index c = 0; c < centers.rows(); ++c) {
        for (int p = 0; p < per_blob; ++p) {
            const Index row = c * per_blob + p;
            for (Index j = 0; j < centers.cols(); ++j) points(row, j) = centers(c, j) + stddev * rng.normal();
            truth.push_back(static_cast<int>(c));
        }
    }
    return FeatureMatrix(std::move(points));
}

}  // namespace lwc
