#ifndef LWC_HARNESS_HPP
#define LWC_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lwc/consensus.hpp"
#include "lwc/ensemble.hpp"
#include "lwc/validity.hpp"

namespace lwc {

/// N×d real features, one row per object. Only the evaluation harness touches features.
class FeatureMatrix {
public:
    explicit FeatureMatrix(Eigen::MatrixXd values);

    Index objects() const { return values_.rows(); }
    Index dimensions() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }

private:
    Eigen::MatrixXd values_;
};

/// CSV of reals, optional first line starting with '#'.
FeatureMatrix read_features(std::istream& in);
void write_features(std::ostream& out, const FeatureMatrix& features);

enum class KPolicy { TrueK, BestK, Fixed };

KPolicy parse_k_policy(std::string_view name);

struct ExperimentConfig {
    int pool_size = 100;
    int ensemble_size = 10;
    double theta = kDefaultTheta;
    int runs = 20;
    KPolicy k_policy = KPolicy::TrueK;
    /// Used with KPolicy::Fixed.
    int fixed_k = 0;
    std::uint64_t seed = 0;
    /// Empty grids mean the single point {theta} / {ensemble_size}.
    std::vector<double> theta_grid;
    std::vector<int> m_grid;
};

/// Largest cluster count drawn for pool members, ⌈√N⌉.
int pool_k_max(Index objects);

/**
 * Pool of k-means clusterings with k uniform in [2, ⌈√N⌉]. Member p uses a
 * generator seeded from (seed, p), so pools are reproducible.
 */
std::vector<Labels> generate_pool(const FeatureMatrix& features, int pool_size, std::uint64_t seed);
std::vector<Labels> generate_pool(const FeatureMatrix& features, const ExperimentConfig& config);

/// M distinct pool members, uniformly without replacement, assembled column-wise.
LabelMatrix draw_ensemble(std::span<const Labels> pool, int ensemble_size, std::uint64_t seed);

struct RunRecord {
    int run = 0;
    double theta = 0;
    int ensemble_size = 0;
    std::string method;
    double nmi = 0;
    /// Consensus cluster count used (0 for base clusterings).
    int k = 0;
};

struct SummaryRow {
    std::string method;
    double theta = 0;
    int ensemble_size = 0;
    int runs = 0;
    double mean = 0;
    double stddev = 0;
};

struct ExperimentReport {
    std::vector<RunRecord> records;
    std::vector<SummaryRow> summary;

    /// Summary row for a grid point, or nullptr.
    const SummaryRow* find(std::string_view method, double theta, int ensemble_size) const;
};

/**
 * Repeated consensus over ensembles drawn from one k-means pool.
 *
 * For each (θ, M) grid point and run r, the ensemble depends only on
 * (seed, M, r), so every θ sees the same ensembles. Methods recorded are
 * "lwea", "lwgp", "eac" and "base" (mean NMI of the ensemble's members).
 */
ExperimentReport run_experiment(const FeatureMatrix& features, std::span<const int> truth, const ExperimentConfig& config);

/// CSV: method,theta,M,runs,mean_nmi,std_nmi
void write_report_csv(std::ostream& out, const ExperimentReport& report);

/// Isotropic Gaussian blobs; `truth` receives the blob index of each point.
FeatureMatrix make_blobs(const Eigen::MatrixXd& centers, int per_blob, double stddev, std::uint64_t seed, Labels& truth);

}  // namespace lwc

#endif
