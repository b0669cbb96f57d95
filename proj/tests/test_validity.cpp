#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "lwc/validity.hpp"
#include "oracles.hpp"

using namespace lwc;

namespace {

EnsembleView worked() { return EnsembleView(LabelMatrix(oracle::worked_example())); }

EnsembleView from_rows(const std::vector<std::vector<int>>& rows) {
    LabelArray a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t m = 0; m < rows[i].size(); ++m) a(static_cast<Index>(i), static_cast<Index>(m)) = rows[i][m];
    return EnsembleView(LabelMatrix(a));
}

}  // namespace

TEST_CASE("uncertainty of the 8-object cluster w.r.t. the second clustering") {
    const auto view = worked();
    CHECK(std::abs(uncertainty_wrt_clustering(view.cluster(0), 1, view) - 1.56) <= 0.01);
    CHECK(uncertainty_wrt_clustering(view.cluster(0), 2, view) == 1.0);
    CHECK(uncertainty_wrt_clustering(view.cluster(0), 0, view) == 0.0);
}

TEST_CASE("uncertainty edge values") {
    SUBCASE("cluster inside one target cluster") {
        const auto view = from_rows({{0, 0}, {0, 0}, {1, 0}, {1, 1}});
        CHECK(uncertainty_wrt_clustering(view.cluster(0), 1, view) == 0.0);
    }
    SUBCASE("four objects split 1/1/1/1") {
        const auto view = from_rows({{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}});
        CHECK(uncertainty_wrt_clustering(view.cluster(0), 1, view) == 2.0);
    }
    SUBCASE("column out of range") {
        const auto view = worked();
        CHECK_THROWS_AS(uncertainty_wrt_clustering(view.cluster(0), 3, view), ParameterError);
    }
}

TEST_CASE("uncertainty w.r.t. the ensemble") {
    const auto view = worked();
    CHECK(std::abs(uncertainty_wrt_ensemble(view.cluster(0), view) - 2.56) <= 0.01);
    CHECK(uncertainty_wrt_ensemble(view.cluster(1), view) == 0.0);

    LabelArray copies(6, 4);
    for (Index m = 0; m < 4; ++m) copies.col(m) << 0, 0, 1, 1, 2, 2;
    const EnsembleView same{LabelMatrix(copies)};
    for (const auto& c : same.clusters()) CHECK(uncertainty_wrt_ensemble(c, same) == 0.0);
}

TEST_CASE("eci values against high-precision exp") {
    using Big = boost::multiprecision::cpp_dec_float_50;
    auto reference = [](double h, double theta, Index m) {
        return static_cast<double>(boost::multiprecision::exp(-Big(h) / (Big(theta) * Big(m))));
    };
    CHECK(eci(0.0, 0.5, 3) == 1.0);
    CHECK(eci(0.0, 7.0, 1) == 1.0);
    CHECK(std::abs(eci(2.56, 0.5, 3) - reference(2.56, 0.5, 3)) < 1e-15);
    CHECK(std::abs(eci(2.56, 0.5, 3) - 0.18147) < 5e-5);
    CHECK(std::abs(eci(0.72, 0.5, 3) - 0.6188) < 5e-5);
}

TEST_CASE("eci parameter errors") {
    CHECK_THROWS_AS(eci(1.0, 0.0, 3), ParameterError);
    CHECK_THROWS_AS(eci(1.0, -1.0, 3), ParameterError);
    CHECK_THROWS_AS(eci(1.0, 0.4, 0), ParameterError);
    CHECK_THROWS_AS(eci(-0.1, 0.4, 2), ParameterError);
    CHECK_THROWS_AS(annotate_validity(worked(), 0.0), ParameterError);
}

TEST_CASE("annotate_validity reproduces the worked example") {
    const auto view = worked();
    const auto report = annotate_validity(view, 0.5);
    const auto& expected = oracle::worked_example_uncertainty();
    REQUIRE(report.uncertainty.size() == 9);
    for (Index c = 0; c < 9; ++c) {
        CAPTURE(c);
        CHECK(std::abs(report.uncertainty[c] - expected[static_cast<std::size_t>(c)]) <= 0.01);
        CHECK(report.eci[c] == std::exp(-report.uncertainty[c] / 1.5));
    }
    CHECK(report.ensemble_size == 3);
}

TEST_CASE("single clustering ensemble has zero uncertainty") {
    LabelArray a(5, 1);
    a << 0, 1, 1, 2, 0;
    const auto report = annotate_validity(EnsembleView(LabelMatrix(a)), 0.4);
    CHECK(report.uncertainty.isZero(0));
    CHECK(report.eci.isOnes(0));
}

TEST_CASE("object permutation leaves the report unchanged") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const LabelArray a = oracle::random_labels(rng, rng.between(3, 30), rng.between(1, 5), 5);
        std::vector<Index> perm(static_cast<std::size_t>(a.rows()));
        std::iota(perm.begin(), perm.end(), Index{0});
        for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        LabelArray b(a.rows(), a.cols());
        for (Index i = 0; i < a.rows(); ++i) b.row(i) = a.row(perm[static_cast<std::size_t>(i)]);
        const EnsembleView va{LabelMatrix(a)}, vb{LabelMatrix(b)};
        const auto ra = annotate_validity(va, 0.4), rb = annotate_validity(vb, 0.4);
        // Dense ids follow first appearance, so compare clusters by (source, original label).
        for (const auto& c : va.clusters()) {
            const long long orig = va.labels().original_label(c.source, va.labels()(c.members.front(), c.source));
            Index match = -1;
            for (const auto& d : vb.clusters())
                if (d.source == c.source && vb.labels().original_label(d.source, vb.labels()(d.members.front(), d.source)) == orig) match = d.id;
            REQUIRE(match >= 0);
            CHECK(ra.uncertainty[c.id] == doctest::Approx(rb.uncertainty[match]).epsilon(1e-12));
        }
    }
}

TEST_CASE("uncertainty properties on random ensembles") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const EnsembleView view(LabelMatrix(oracle::random_labels(rng, rng.between(2, 40), rng.between(1, 6), 7)));
        const auto report = annotate_validity(view, 0.4);
        for (const auto& c : view.clusters()) {
            double sum = 0;
            for (Index m = 0; m < view.clusterings(); ++m) {
                const double h = uncertainty_wrt_clustering(c, m, view);
                CHECK(h >= 0);
                CHECK(h <= std::log2(static_cast<double>(view.labels().clusters_in(m))) + 1e-12);
                if (m == c.source) CHECK(h == 0.0);
                sum += h;
            }
            // Additivity, term by term in the same order.
            CHECK(report.uncertainty[c.id] == sum);
            CHECK(uncertainty_wrt_ensemble(c, view) == sum);
            CHECK(report.eci[c.id] > 0);
            CHECK(report.eci[c.id] <= 1);
        }
    }
}

namespace {

// Restricted growth strings: every set partition of n objects exactly once.
void enumerate_partitions(int n, std::vector<std::vector<int>>& out) {
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int max_label) {
        if (i == n) {
            out.push_back(rgs);
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            rgs[static_cast<std::size_t>(i)] = l;
            rec(i + 1, std::max(max_label, l));
        }
    };
    rgs[0] = 0;
    rec(1, 0);
}

void check_against_sets(const LabelArray& a) {
    const EnsembleView view{LabelMatrix(a)};
    for (const auto& c : view.clusters()) {
        const std::set<Index> set(c.members.begin(), c.members.end());
        for (Index t = 0; t < a.cols(); ++t) {
            CHECK(std::abs(uncertainty_wrt_clustering(c, t, view) - oracle::entropy_wrt(a, set, t)) < 1e-12);
        }
    }
}

}  // namespace

TEST_CASE("entropy matches explicit set intersections on enumerated partitions") {
    // Every ordered pair of partitions for N <= 6.
    for (int n = 2; n <= 6; ++n) {
        std::vector<std::vector<int>> parts;
        enumerate_partitions(n, parts);
        for (const auto& p : parts)
            for (const auto& q : parts) {
                LabelArray a(n, 2);
                for (int i = 0; i < n; ++i) {
                    a(i, 0) = p[static_cast<std::size_t>(i)];
                    a(i, 1) = q[static_cast<std::size_t>(i)];
                }
                check_against_sets(a);
            }
    }
    // Every partition of 8 objects as the source column, against random second and third columns.
    std::vector<std::vector<int>> parts8;
    enumerate_partitions(8, parts8);
    Rng rng(9);
    for (const auto& p : parts8) {
        LabelArray a = oracle::random_labels(rng, 8, 3, 4);
        for (int i = 0; i < 8; ++i) a(i, 0) = p[static_cast<std::size_t>(i)];
        check_against_sets(a);
    }
}

TEST_CASE("entropy is invariant to relabelling the target column") {
    LabelArray a = oracle::worked_example();
    LabelArray b = a;
    for (Index i = 0; i < b.rows(); ++i) b(i, 1) = 40 - 10 * b(i, 1);
    const auto ra = annotate_validity(EnsembleView(LabelMatrix(a)), 0.4);
    const EnsembleView vb{LabelMatrix(b)};
    const auto rb = annotate_validity(vb, 0.4);
    for (Index c = 0; c < 3; ++c) CHECK(ra.uncertainty[c] == doctest::Approx(rb.uncertainty[c]).epsilon(1e-12));
}

TEST_CASE("eci monotone in uncertainty and flat for huge theta") {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const double h1 = rng.uniform() * 10, h2 = h1 + 1e-6 + rng.uniform() * 5;
        const double theta = 0.05 + rng.uniform() * 2;
        const Index m = rng.between(1, 20);
        CHECK(eci(h1, theta, m) > eci(h2, theta, m));
    }
    const auto report = annotate_validity(worked(), 1e6);
    CHECK(report.eci.minCoeff() > 0.999);
}

TEST_CASE("uniform validity and csv export") {
    const auto view = worked();
    const auto uniform = uniform_validity(view);
    CHECK(uniform.eci.isOnes(0));
    std::ostringstream out;
    write_validity_csv(out, view, annotate_validity(view, 0.5));
    const std::string text = out.str();
    CHECK(text.rfind("cluster,source,size,uncertainty,eci\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
    CHECK(text.find("\n1,0,3,0,1\n") != std::string::npos);
}
