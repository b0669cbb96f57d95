#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "lwc/harness.hpp"
#include "lwc/kmeans.hpp"
#include "lwc/metrics.hpp"
#include "lwc/random.hpp"

using namespace lwc;

namespace {

FeatureMatrix three_blobs(std::uint64_t seed, Labels& truth, int per_blob = 30) {
    Eigen::MatrixXd centers(3, 2);
    centers << 0, 0, 10, 0, 5, 9;
    return make_blobs(centers, per_blob, 0.8, seed, truth);
}

}  // namespace

TEST_CASE("k-means separates two obvious pairs") {
    Eigen::MatrixXd p(4, 2);
    p << 0, 0, 0.1, 0, 10, 10, 10, 10.2;
    const auto labels = kmeans(p, 2, 3);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[2] == labels[3]);
    CHECK(labels[0] != labels[2]);
}

TEST_CASE("k-means with k = N gives singletons") {
    Rng rng(1);
    Eigen::MatrixXd p(7, 3);
    for (Index i = 0; i < p.size(); ++i) p.data()[i] = rng.uniform();
    const auto labels = kmeans(p, 7, 5);
    CHECK(std::set<int>(labels.begin(), labels.end()).size() == 7);
}

TEST_CASE("k-means is deterministic and its objective never increases") {
    Labels truth;
    const auto f = three_blobs(4, truth);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = kmeans_fit(f.values(), 5, seed);
        const auto b = kmeans_fit(f.values(), 5, seed);
        CHECK(a.labels == b.labels);
        for (std::size_t t = 1; t < a.inertia_history.size(); ++t) {
            CHECK(a.inertia_history[t] <= a.inertia_history[t - 1] * (1 + 1e-12));
        }
        CHECK(a.iterations <= 100);
    }
}

TEST_CASE("k-means re-seeds empty clusters") {
    // Five copies of one point plus one far point; k = 3 forces duplicate seeds.
    Eigen::MatrixXd p(6, 1);
    p << 0, 0, 0, 0, 0, 100;
    const auto r = kmeans_fit(p, 3, 1);
    CHECK(r.labels.size() == 6);
    CHECK(r.inertia == 0.0);
}

TEST_CASE("k-means errors") {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 2);
    CHECK_THROWS_AS(kmeans(p, 4, 0), ParameterError);
    CHECK_THROWS_AS(kmeans(p, 0, 0), ParameterError);
    p(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(kmeans(p, 2, 0), ParameterError);
}

TEST_CASE("pool k range, size and reproducibility") {
    Rng rng(3);
    Eigen::MatrixXd values(100, 2);
    for (Index i = 0; i < values.size(); ++i) values.data()[i] = rng.uniform();
    const FeatureMatrix f(values);
    CHECK(pool_k_max(100) == 10);
    CHECK(pool_k_max(101) == 11);
    CHECK(pool_k_max(300) == 18);
    const auto pool = generate_pool(f, 100, 17);
    REQUIRE(pool.size() == 100);
    std::set<int> ks;
    for (const auto& member : pool) {
        const int k = static_cast<int>(std::set<int>(member.begin(), member.end()).size());
        CHECK(k >= 2);
        CHECK(k <= 10);
        ks.insert(k);
    }
    CHECK(ks.size() > 4);
    CHECK(LabelMatrix::from_columns(pool).clusterings() == 100);
    CHECK(generate_pool(f, 100, 17) == pool);
    CHECK(generate_pool(f, 100, 18) != pool);
}

TEST_CASE("pool errors") {
    const FeatureMatrix tiny(Eigen::MatrixXd::Random(3, 2));
    CHECK_THROWS_AS(generate_pool(tiny, 10, 0), ParameterError);
    const FeatureMatrix ok(Eigen::MatrixXd::Random(9, 2));
    CHECK_THROWS_AS(generate_pool(ok, 0, 0), ParameterError);
}

TEST_CASE("ensemble draws") {
    std::vector<Labels> pool;
    for (int p = 0; p < 12; ++p) pool.push_back(Labels{p % 2, p % 3, p % 4, p % 5, 0, 1});
    SUBCASE("whole pool") {
        const auto e = draw_ensemble(pool, 12, 9);
        CHECK(e.clusterings() == 12);
    }
    SUBCASE("single column") {
        CHECK(draw_ensemble(pool, 1, 9).clusterings() == 1);
    }
    SUBCASE("fixed seed is reproducible, members distinct") {
        const auto a = draw_ensemble(pool, 5, 21), b = draw_ensemble(pool, 5, 21);
        CHECK(same_partitions(a, b));
        // Pool member p is identified by its column (p%2, p%3, p%4, p%5) in the first four rows.
        std::set<std::vector<long long>> seen;
        for (Index m = 0; m < a.clusterings(); ++m) {
            std::vector<long long> key;
            for (Index i = 0; i < 4; ++i) key.push_back(a.original_label(m, a(i, m)));
            CHECK(seen.insert(key).second);
        }
    }
    SUBCASE("too many") {
        CHECK_THROWS_AS(draw_ensemble(pool, 13, 0), ParameterError);
        CHECK_THROWS_AS(draw_ensemble(pool, 0, 0), ParameterError);
    }
}

TEST_CASE("nmi basics") {
    const Labels a{0, 0, 1, 1, 2, 2};
    CHECK(nmi(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nmi(a, Labels{5, 5, 9, 9, 1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(nmi(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1})) < 1e-15);
    CHECK(nmi(Labels{3, 3, 3}, Labels{1, 1, 1}) == 1.0);
    CHECK(nmi(Labels{3, 3, 3}, Labels{0, 1, 1}) == 0.0);
    CHECK(nmi(Labels{0, 1, 1}, Labels{2, 2, 2}) == 0.0);
    CHECK_THROWS_AS(nmi(Labels{0, 1}, Labels{0}), ParameterError);
    CHECK_THROWS_AS(nmi(Labels{}, Labels{}), ParameterError);
}

TEST_CASE("nmi against reference values") {
    // Reference: scikit-learn normalized_mutual_info_score, geometric averaging.
    CHECK(nmi(Labels{0, 0, 1, 1, 2, 2, 3, 3}, Labels{1, 1, 1, 0, 0, 2, 2, 2}) ==
          doctest::Approx(0.6005844413714937).epsilon(1e-12));
    CHECK(nmi(Labels{0, 0, 0, 1, 1, 1}, Labels{0, 1, 1, 1, 0, 0}) == doctest::Approx(0.08170416594551037).epsilon(1e-12));
}

TEST_CASE("nmi symmetry, range and relabel invariance") {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(rng.between(1, 40));
        Labels a(n), b(n);
        const auto ka = static_cast<std::uint64_t>(rng.between(1, 6)), kb = static_cast<std::uint64_t>(rng.between(1, 6));
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.below(ka));
            b[i] = static_cast<int>(rng.below(kb));
        }
        const double v = nmi(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(nmi(b, a) == doctest::Approx(v).epsilon(1e-12));
        Labels relabelled = a;
        for (auto& l : relabelled) l = 17 - 3 * l;
        CHECK(nmi(relabelled, b) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("feature io") {
    std::istringstream in("# x,y\n1.5,2\n-3e2, 4\n");
    const auto f = read_features(in);
    CHECK(f.objects() == 2);
    CHECK(f.values()(1, 0) == -300.0);
    std::stringstream round;
    write_features(round, f);
    CHECK(read_features(round).values() == f.values());
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(read_features(ragged), ParseError);
    std::istringstream bad("1,2\n3,abc\n");
    CHECK_THROWS_AS(read_features(bad), ParseError);
    std::istringstream inf("1,2\n3,inf\n");
    CHECK_THROWS_AS(read_features(inf), ParseError);
}

TEST_CASE("single run experiment is deterministic") {
    Labels truth;
    const auto f = three_blobs(5, truth);
    ExperimentConfig config;
    config.pool_size = 10;
    config.ensemble_size = 10;
    config.runs = 1;
    config.seed = 99;
    const auto a = run_experiment(f, truth, config);
    const auto b = run_experiment(f, truth, config);
    std::ostringstream sa, sb;
    write_report_csv(sa, a);
    write_report_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(a.summary.size() == 4);
    REQUIRE(a.find("lwea", config.theta, 10) != nullptr);
    CHECK(a.find("lwea", config.theta, 10)->runs == 1);
}

TEST_CASE("theta sweep grid shape") {
    Labels truth;
    const auto f = three_blobs(6, truth, 15);
    ExperimentConfig config;
    config.pool_size = 20;
    config.ensemble_size = 5;
    config.runs = 2;
    config.theta_grid = {0.1, 0.2, 0.4, 0.6, 0.8, 1, 2, 4, 8};
    const auto report = run_experiment(f, truth, config);
    for (const char* method : {"lwea", "lwgp", "eac", "base"}) {
        int rows = 0;
        for (const auto& row : report.summary) rows += row.method == method;
        CHECK(rows == 9);
    }
    CHECK(report.records.size() == 9 * 2 * 4);
}

TEST_CASE("ensemble-size sweep and k policies") {
    Labels truth;
    const auto f = three_blobs(7, truth, 15);
    ExperimentConfig config;
    config.pool_size = 20;
    config.runs = 2;
    config.m_grid = {2, 5};
    config.k_policy = KPolicy::BestK;
    const auto best = run_experiment(f, truth, config);
    config.k_policy = KPolicy::TrueK;
    const auto true_k = run_experiment(f, truth, config);
    for (const int m : {2, 5}) {
        REQUIRE(best.find("lwea", config.theta, m) != nullptr);
        CHECK(best.find("lwea", config.theta, m)->mean >= true_k.find("lwea", config.theta, m)->mean - 1e-12);
    }
    config.k_policy = KPolicy::Fixed;
    config.fixed_k = 0;
    CHECK_THROWS_AS(run_experiment(f, truth, config), ParameterError);
    config.fixed_k = 2;
    CHECK_NOTHROW(run_experiment(f, truth, config));
    CHECK_THROWS_AS(run_experiment(f, Labels(3, 0), config), ParameterError);
}

TEST_CASE("report csv layout") {
    ExperimentReport report;
    report.summary.push_back({"lwea", 0.4, 10, 20, 0.91234567, 0.01});
    std::ostringstream out;
    write_report_csv(out, report);
    CHECK(out.str() == "method,theta,M,runs,mean_nmi,std_nmi\nlwea,0.4,10,20,0.912346,0.010000\n");
}
