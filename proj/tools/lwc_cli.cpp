// Command-line front end: pool generation, consensus, evaluation and parameter sweeps.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lwc/coassoc.hpp"
#include "lwc/harness.hpp"
#include "lwc/lwea.hpp"
#include "lwc/lwgp.hpp"
#include "lwc/metrics.hpp"

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lwc::Error("cannot open '" + path + "'");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw lwc::Error("cannot write '" + path + "'");
    return out;
}

void report_warnings(const lwc::Warnings& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locally weighted consensus clustering"};
    app.require_subcommand(1);

    // pool
    std::string features_path, out_path;
    int pool_size = 100;
    std::uint64_t seed = 0;
    auto* pool = app.add_subcommand("pool", "Generate a k-means base-clustering pool as a label matrix");
    pool->add_option("--features", features_path, "Feature CSV, one row per object")->required();
    pool->add_option("--pool-size", pool_size, "Number of base clusterings")->check(CLI::PositiveNumber);
    pool->add_option("--seed", seed, "Master seed");
    pool->add_option("--out", out_path, "Output label matrix CSV")->required();

    // consensus
    std::string labels_path, method_name = "lwea", validity_out, matrix_out;
    double theta = lwc::kDefaultTheta;
    int k = 0;
    auto* consensus = app.add_subcommand("consensus", "Combine a label matrix into one clustering");
    consensus->add_option("--labels", labels_path, "Label matrix CSV")->required();
    consensus->add_option("--method", method_name, "lwea | lwgp | eac")->check(CLI::IsMember({"lwea", "lwgp", "eac"}));
    consensus->add_option("--theta", theta, "ECI parameter theta > 0");
    consensus->add_option("--k", k, "Number of consensus clusters")->required();
    consensus->add_option("--seed", seed, "Seed for the graph-partitioning k-means");
    consensus->add_option("--out", out_path, "Output labels, one per line")->required();
    consensus->add_option("--validity-out", validity_out, "Optional per-cluster uncertainty/ECI CSV");
    consensus->add_option("--matrix-out", matrix_out, "Optional lower-triangle co-association CSV");

    // eval
    std::string pred_path, truth_path;
    auto* eval = app.add_subcommand("eval", "Print NMI between predicted and true labels");
    eval->add_option("--pred", pred_path, "Predicted labels")->required();
    eval->add_option("--truth", truth_path, "Ground-truth labels")->required();

    // sweep
    lwc::ExperimentConfig config;
    std::string k_policy = "true-k";
    auto* sweep = app.add_subcommand("sweep", "Repeated consensus experiments over theta and ensemble-size grids");
    sweep->add_option("--features", features_path, "Feature CSV")->required();
    sweep->add_option("--truth", truth_path, "Ground-truth labels")->required();
    sweep->add_option("--theta-grid", config.theta_grid, "Comma-separated theta values")->delimiter(',');
    sweep->add_option("--m-grid", config.m_grid, "Comma-separated ensemble sizes")->delimiter(',');
    sweep->add_option("--pool-size", config.pool_size, "Pool size")->check(CLI::PositiveNumber);
    sweep->add_option("--theta", config.theta, "Theta when no grid is given");
    sweep->add_option("--m", config.ensemble_size, "Ensemble size when no grid is given")->check(CLI::PositiveNumber);
    sweep->add_option("--runs", config.runs, "Runs per grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--k-policy", k_policy, "true-k | best-k | fixed")->check(CLI::IsMember({"true-k", "best-k", "fixed"}));
    sweep->add_option("--k", config.fixed_k, "Cluster count for --k-policy fixed");
    sweep->add_option("--seed", config.seed, "Master seed");
    sweep->add_option("--out", out_path, "Report CSV")->required();

    // blobs
    int blobs = 3, per_blob = 100;
    double spread = 10.0, stddev = 1.0;
    std::string truth_out;
    auto* blob = app.add_subcommand("blobs", "Write a synthetic Gaussian-blob dataset");
    blob->add_option("--blobs", blobs, "Number of blobs")->check(CLI::PositiveNumber);
    blob->add_option("--per-blob", per_blob, "Points per blob")->check(CLI::PositiveNumber);
    blob->add_option("--spread", spread, "Distance of blob centers from the origin");
    blob->add_option("--stddev", stddev, "Per-axis standard deviation");
    blob->add_option("--seed", seed, "Seed");
    blob->add_option("--out", out_path, "Feature CSV")->required();
    blob->add_option("--truth-out", truth_out, "Ground-truth labels")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pool) {
            auto in = open_in(features_path);
            const auto features = lwc::read_features(in);
            const auto members = lwc::generate_pool(features, pool_size, seed);
            auto out = open_out(out_path);
            lwc::write_label_matrix(out, lwc::LabelMatrix::from_columns(members));
        } else if (*consensus) {
            auto in = open_in(labels_path);
            lwc::LabelMatrix labels = lwc::parse_label_matrix(in);
            report_warnings(labels.warnings());
            const lwc::EnsembleView view(std::move(labels));
            const lwc::Method method = lwc::parse_method(method_name);
            const lwc::ValidityReport validity =
                method == lwc::Method::EAC ? lwc::uniform_validity(view) : lwc::annotate_validity(view, theta);

            lwc::ConsensusResult result;
            switch (method) {
                case lwc::Method::LWEA: result = lwc::lwea(view, validity, k); break;
                case lwc::Method::LWGP: result = lwc::lwgp(view, validity, k, seed); break;
                case lwc::Method::EAC: result = lwc::eac(view, k); break;
            }
            report_warnings(result.warnings);
            auto out = open_out(out_path);
            lwc::write_labels(out, result.labels);
            if (!validity_out.empty()) {
                auto v = open_out(validity_out);
                lwc::write_validity_csv(v, view, validity);
            }
            if (!matrix_out.empty()) {
                auto m = open_out(matrix_out);
                if (method == lwc::Method::EAC) {
                    lwc::write_lower_triangle(m, lwc::build_ca(view));
                } else {
                    lwc::write_lower_triangle(m, lwc::build_lwca(view, validity));
                }
            }
        } else if (*eval) {
            auto pred_in = open_in(pred_path);
            auto truth_in = open_in(truth_path);
            const auto pred = lwc::read_labels(pred_in);
            const auto truth = lwc::read_labels(truth_in);
            std::cout << std::fixed << std::setprecision(4) << lwc::nmi(pred, truth) << '\n';
        } else if (*sweep) {
            config.k_policy = lwc::parse_k_policy(k_policy);
            auto features_in = open_in(features_path);
            auto truth_in = open_in(truth_path);
            const auto features = lwc::read_features(features_in);
            const auto truth = lwc::read_labels(truth_in);
            const auto report = lwc::run_experiment(features, truth, config);
            auto out = open_out(out_path);
            lwc::write_report_csv(out, report);
        } else if (*blob) {
            Eigen::MatrixXd centers(blobs, 2);
            for (int b = 0; b < blobs; ++b) {
                const double angle = 2.0 * 3.14159265358979323846 * b / blobs;
                centers.row(b) << spread * std::cos(angle), spread * std::sin(angle);
            }
            lwc::Labels truth;
            const auto features = lwc::make_blobs(centers, per_blob, stddev, seed, truth);
            auto out = open_out(out_path);
            lwc::write_features(out, features);
            auto t = open_out(truth_out);
            lwc::write_labels(t, truth);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
