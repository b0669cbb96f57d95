#include "lwc/lwea.hpp"

#include <numeric>
#include <string>

namespace lwc {
namespace detail {
namespace {

// Candidate pair between slots; slot index equals the region's smallest member.
struct Candidate {
    double similarity;
    Index lo;
    Index hi;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
}

Candidate make_candidate(const Eigen::MatrixXd& s, Index i, Index j) {
    return {s(i, j), std::min(i, j), std::max(i, j)};
}

}  // namespace

Dendrogram average_link(Eigen::MatrixXd s) {
    const Index n = s.rows();
    std::vector<Index> active(static_cast<std::size_t>(n));
    std::iota(active.begin(), active.end(), Index{0});
    std::vector<double> size(static_cast<std::size_t>(n), 1.0);
    std::vector<Index> region(static_cast<std::size_t>(n));
    std::iota(region.begin(), region.end(), Index{0});
    std::vector<Index> nearest(static_cast<std::size_t>(n), -1);

    auto rescan = [&](Index i) {
        Index best = -1;
        for (const Index j : active) {
            if (j == i) continue;
            if (best < 0 || better(make_candidate(s, i, j), make_candidate(s, i, best))) best = j;
        }
        nearest[static_cast<std::size_t>(i)] = best;
    };
    for (const Index i : active) rescan(i);

    Dendrogram d;
    d.leaves = n;
    d.merges.reserve(static_cast<std::size_t>(n - 1));
    for (Index t = 0; t + 1 < n; ++t) {
        Index pick = active.front();
        for (const Index i : active) {
            if (better(make_candidate(s, i, nearest[static_cast<std::size_t>(i)]),
                       make_candidate(s, pick, nearest[static_cast<std::size_t>(pick)]))) {
                pick = i;
            }
        }
        const Candidate c = make_candidate(s, pick, nearest[static_cast<std::size_t>(pick)]);
        const Index a = c.lo;
        const Index b = c.hi;
        const double na = size[static_cast<std::size_t>(a)];
        const double nb = size[static_cast<std::size_t>(b)];

        d.merges.push_back({region[static_cast<std::size_t>(a)], region[static_cast<std::size_t>(b)], n + t, c.similarity});
        region[static_cast<std::size_t>(a)] = n + t;
        size[static_cast<std::size_t>(a)] = na + nb;
        std::erase(active, b);

        // Lance-Williams update for average link.
        for (const Index x : active) {
            if (x == a) continue;
            const double v = (na * s(a, x) + nb * s(b, x)) / (na + nb);
            s(a, x) = v;
            s(x, a) = v;
        }

        rescan(a);
        for (const Index x : active) {
            if (x == a) continue;
            const Index nx = nearest[static_cast<std::size_t>(x)];
            if (nx == a || nx == b) {
                rescan(x);
            } else if (better(make_candidate(s, x, a), make_candidate(s, x, nx))) {
                nearest[static_cast<std::size_t>(x)] = a;
            }
        }
    }
    return d;
}

}  // namespace detail

ConsensusResult cut_dendrogram(const Dendrogram& dendrogram, int k) {
    const Index n = dendrogram.leaves;
    if (k < 1 || k > n) throw ParameterError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    if (static_cast<Index>(dendrogram.merges.size()) != n - 1) throw ParameterError("incomplete dendrogram");

    // Union-find over region ids; each merged region points at its new id.
    std::vector<Index> parent(static_cast<std::size_t>(2 * n - 1));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (Index t = 0; t < n - k; ++t) {
        const Merge& m = dendrogram.merges[static_cast<std::size_t>(t)];
        parent[static_cast<std::size_t>(find(m.left))] = m.id;
        parent[static_cast<std::size_t>(find(m.right))] = m.id;
    }
    Labels roots(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = static_cast<int>(find(i));

    ConsensusResult result;
    result.labels = canonical_labels(roots);
    result.k = k;
    return result;
}

ConsensusResult lwea(const EnsembleView& view, const ValidityReport& report, int k) {
    if (k < 1 || k > view.objects()) throw ParameterError("k must be in [1, N]");
    auto result = cut_dendrogram(build_dendrogram(build_lwca(view, report)), k);
    result.method = Method::LWEA;
    return result;
}

ConsensusResult lwea(const EnsembleView& view, double theta, int k) {
    return lwea(view, annotate_validity(view, theta), k);
}

ConsensusResult eac(const EnsembleView& view, int k) {
    if (k < 1 || k > view.objects()) throw ParameterError("k must be in [1, N]");
    auto result = cut_dendrogram(build_dendrogram(build_ca(view)), k);
    result.method = Method::EAC;
    return result;
}

}  // namespace lwc
