#include "lwc/lwgp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "lwc/kmeans.hpp"
#include "lwc/random.hpp"

namespace lwc {
namespace {

/// Connected component id per node (objects 0..N-1, clusters N..N+n_c-1), numbered by smallest node.
std::vector<Index> components(const BipartiteGraph& graph, Index& count) {
    const Index total = graph.objects + graph.clusters;
    std::vector<Index> parent(static_cast<std::size_t>(total));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        }
        return x;
    };
    for (const auto& e : graph.edges) {
        if (e.weight <= 0) continue;
        const Index a = find(e.object);
        const Index b = find(graph.objects + e.cluster);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<Index> id(static_cast<std::size_t>(total), -1);
    std::vector<Index> root_id(static_cast<std::size_t>(total), -1);
    count = 0;
    for (Index v = 0; v < total; ++v) {
        auto& rid = root_id[static_cast<std::size_t>(find(v))];
        if (rid < 0) rid = count++;
        id[static_cast<std::size_t>(v)] = rid;
    }
    return id;
}

Segmentation split(const BipartiteGraph& graph, std::span<const int> node_labels) {
    Segmentation s;
    s.objects.assign(node_labels.begin(), node_labels.begin() + graph.objects);
    s.clusters.assign(node_labels.begin() + graph.objects, node_labels.end());
    return s;
}

/// Packs components into k segments, largest volume first into the lightest segment.
Segmentation pack_components(const BipartiteGraph& graph, const std::vector<Index>& comp, Index count, int k) {
    const Eigen::MatrixXd b = graph.affinity();
    std::vector<double> volume(static_cast<std::size_t>(count), 0.0);
    for (Index i = 0; i < graph.objects; ++i) volume[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] += 2 * b.row(i).sum();

    std::vector<Index> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return volume[static_cast<std::size_t>(x)] > volume[static_cast<std::size_t>(y)]; });

    std::vector<double> load(static_cast<std::size_t>(k), 0.0);
    std::vector<int> segment_of(static_cast<std::size_t>(count));
    for (const Index c : order) {
        const auto lightest = std::min_element(load.begin(), load.end()) - load.begin();
        segment_of[static_cast<std::size_t>(c)] = static_cast<int>(lightest);
        load[static_cast<std::size_t>(lightest)] += volume[static_cast<std::size_t>(c)];
    }
    Labels nodes(comp.size());
    for (std::size_t v = 0; v < comp.size(); ++v) nodes[v] = segment_of[static_cast<std::size_t>(comp[v])];
    return split(graph, nodes);
}

/// Adjacency lists over all nodes: objects 0..N-1, clusters N..N+n_c-1.
struct NodeGraph {
    std::vector<std::vector<std::pair<Index, double>>> links;
    std::vector<double> degree;
};

NodeGraph node_graph(const BipartiteGraph& graph) {
    NodeGraph g;
    const auto total = static_cast<std::size_t>(graph.objects + graph.clusters);
    g.links.resize(total);
    g.degree.assign(total, 0.0);
    for (const auto& e : graph.edges) {
        if (e.weight == 0) continue;
        const Index c = graph.objects + e.cluster;
        g.links[static_cast<std::size_t>(e.object)].push_back({c, e.weight});
        g.links[static_cast<std::size_t>(c)].push_back({e.object, e.weight});
        g.degree[static_cast<std::size_t>(e.object)] += e.weight;
        g.degree[static_cast<std::size_t>(c)] += e.weight;
    }
    // Adjacency order must not depend on edge insertion order.
    for (auto& l : g.links) std::sort(l.begin(), l.end());
    return g;
}

double ncut_of(const NodeGraph& g, const Labels& label, int k) {
    std::vector<double> cut(static_cast<std::size_t>(k), 0.0), vol(static_cast<std::size_t>(k), 0.0);
    for (std::size_t v = 0; v < g.links.size(); ++v) {
        vol[static_cast<std::size_t>(label[v])] += g.degree[v];
        for (const auto& [u, w] : g.links[v]) {
            if (label[static_cast<std::size_t>(u)] != label[v]) cut[static_cast<std::size_t>(label[v])] += w;
        }
    }
    double total = 0;
    for (int s = 0; s < k; ++s) {
        if (vol[static_cast<std::size_t>(s)] > 0) total += cut[static_cast<std::size_t>(s)] / vol[static_cast<std::size_t>(s)];
    }
    return total;
}

/// Per-segment cut and volume, updated incrementally as single nodes move.
class SegmentState {
public:
    SegmentState(const NodeGraph& g, const Labels& label, int k)
        : g_(g), cut_(static_cast<std::size_t>(k), 0.0), vol_(static_cast<std::size_t>(k), 0.0),
          count_(static_cast<std::size_t>(k), 0), pull_(static_cast<std::size_t>(k), 0.0) {
        for (std::size_t v = 0; v < g.links.size(); ++v) {
            const auto s = static_cast<std::size_t>(label[v]);
            vol_[s] += g.degree[v];
            ++count_[s];
            for (const auto& [u, w] : g.links[v]) {
                if (label[static_cast<std::size_t>(u)] != label[v]) cut_[s] += w;
            }
        }
    }

    Index count(int s) const { return count_[static_cast<std::size_t>(s)]; }

    /// Link weight from v into every segment; must precede gain()/apply() for v.
    void load(std::size_t v, const Labels& label) {
        std::fill(pull_.begin(), pull_.end(), 0.0);
        for (const auto& [u, w] : g_.links[v]) pull_[static_cast<std::size_t>(label[static_cast<std::size_t>(u)])] += w;
    }

    /// Decrease of the normalized cut if loaded node v moves from `from` to `to`.
    double gain(std::size_t v, int from, int to) const {
        const auto f = static_cast<std::size_t>(from), t = static_cast<std::size_t>(to);
        const double d = g_.degree[v];
        const double before = term(cut_[f], vol_[f]) + term(cut_[t], vol_[t]);
        const double after = term(cut_[f] - d + 2 * pull_[f], vol_[f] - d) + term(cut_[t] + d - 2 * pull_[t], vol_[t] + d);
        return before - after;
    }

    void apply(std::size_t v, int from, int to, Labels& label) {
        const auto f = static_cast<std::size_t>(from), t = static_cast<std::size_t>(to);
        const double d = g_.degree[v];
        cut_[f] += 2 * pull_[f] - d;
        vol_[f] -= d;
        cut_[t] += d - 2 * pull_[t];
        vol_[t] += d;
        --count_[f];
        ++count_[t];
        label[v] = to;
    }

private:
    static double term(double c, double v) { return v > 0 ? c / v : 0.0; }

    const NodeGraph& g_;
    std::vector<double> cut_, vol_;
    std::vector<Index> count_;
    std::vector<double> pull_;
};

bool improves(double gain, double base) { return gain > 1e-12 * std::max(1.0, base); }

/**
 * Greedy single-node moves, each strictly lowering the normalized cut.
 * Segments are never emptied. Nodes are visited in index order until a full
 * pass makes no move.
 */
void refine(const NodeGraph& g, Labels& label, int k, int max_passes) {
    SegmentState state(g, label, k);
    for (int pass = 0; pass < max_passes; ++pass) {
        bool moved = false;
        for (std::size_t v = 0; v < g.links.size(); ++v) {
            const int from = label[v];
            if (state.count(from) == 1) continue;
            state.load(v, label);
            int best = from;
            double best_gain = 0;
            for (int to = 0; to < k; ++to) {
                if (to == from) continue;
                const double gain = state.gain(v, from, to);
                if (improves(gain, 1.0) && gain > best_gain) {
                    best_gain = gain;
                    best = to;
                }
            }
            if (best == from) continue;
            state.apply(v, from, best, label);
            moved = true;
        }
        if (!moved) break;
    }
}

/**
 * Fiduccia-Mattheyses style passes: every node moves at most once per pass to
 * its best segment even when the cut grows, and the pass is rolled back to its
 * best prefix. Escapes minima that need several simultaneous moves.
 */
void move_passes(const NodeGraph& g, Labels& label, int k, int max_passes) {
    const std::size_t total = g.links.size();
    for (int pass = 0; pass < max_passes; ++pass) {
        Labels work = label;
        SegmentState state(g, work, k);
        std::vector<char> locked(total, 0);
        double running = 0;  // cumulative gain of this pass
        double best_running = 0;
        Labels best_state;
        for (std::size_t step = 0; step < total; ++step) {
            double step_gain = -std::numeric_limits<double>::infinity();
            std::size_t step_node = total;
            int step_to = -1;
            for (std::size_t v = 0; v < total; ++v) {
                if (locked[v] || state.count(work[v]) == 1) continue;
                state.load(v, work);
                for (int to = 0; to < k; ++to) {
                    if (to == work[v]) continue;
                    const double gain = state.gain(v, work[v], to);
                    if (gain > step_gain) {
                        step_gain = gain;
                        step_node = v;
                        step_to = to;
                    }
                }
            }
            if (step_node == total) break;
            state.load(step_node, work);
            state.apply(step_node, work[step_node], step_to, work);
            locked[step_node] = 1;
            running += step_gain;
            if (running > best_running && improves(running - best_running, 1.0)) {
                best_running = running;
                best_state = work;
            }
        }
        if (best_state.empty()) break;
        label = std::move(best_state);
    }
}

/// Best threshold split of the nodes ordered by one embedding coordinate.
Labels sweep_cut(const NodeGraph& g, const Eigen::VectorXd& coordinate) {
    const auto total = static_cast<Index>(g.links.size());
    std::vector<Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return coordinate[a] < coordinate[b]; });

    Labels label(static_cast<std::size_t>(total), 1);
    Labels best;
    double best_value = std::numeric_limits<double>::infinity();
    double cut = 0, vol0 = 0;
    const double vol_total = std::accumulate(g.degree.begin(), g.degree.end(), 0.0);
    for (Index p = 0; p + 1 < total; ++p) {
        const Index v = order[static_cast<std::size_t>(p)];
        label[static_cast<std::size_t>(v)] = 0;
        vol0 += g.degree[static_cast<std::size_t>(v)];
        for (const auto& [u, w] : g.links[static_cast<std::size_t>(v)]) cut += label[static_cast<std::size_t>(u)] == 0 ? -w : w;
        const double vol1 = vol_total - vol0;
        if (vol0 <= 0 || vol1 <= 0) continue;
        const double value = cut / vol0 + cut / vol1;
        if (value < best_value) {
            best_value = value;
            best = label;
        }
    }
    return best;
}

}  // namespace

Eigen::MatrixXd BipartiteGraph::affinity() const {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(objects, clusters);
    for (const auto& e : edges) b(e.object, e.cluster) += e.weight;
    return b;
}

BipartiteGraph build_lwbg(const EnsembleView& view, const ValidityReport& report) {
    if (report.eci.size() != view.cluster_count()) throw ParameterError("validity report does not match ensemble view");
    BipartiteGraph graph;
    graph.objects = view.objects();
    graph.clusters = view.cluster_count();
    graph.edges.reserve(static_cast<std::size_t>(view.objects() * view.clusterings()));
    for (const auto& cluster : view.clusters()) {
        for (const Index i : cluster.members) graph.edges.push_back({i, cluster.id, report.eci[cluster.id]});
    }
    return graph;
}

Segmentation tcut_segment(const BipartiteGraph& graph, int k, std::uint64_t seed, const TcutOptions& options) {
    const Index n = graph.objects;
    const Index nc = graph.clusters;
    if (k < 1) throw ParameterError("k must be positive");
    if (k == 1) return split(graph, Labels(static_cast<std::size_t>(n + nc), 0));
    if (k > std::min(n, nc)) {
        throw ParameterError("infeasible k=" + std::to_string(k) + " for a graph with " + std::to_string(n) +
                             " objects and " + std::to_string(nc) + " clusters");
    }

    Index count = 0;
    const auto comp = components(graph, count);
    if (count >= k) {
        Segmentation s;
        if (count == k) {
            s = split(graph, Labels(comp.begin(), comp.end()));
        } else {
            s = pack_components(graph, comp, count, k);
            s.warnings.push_back("graph has " + std::to_string(count) + " components for k=" + std::to_string(k) +
                                 "; components assigned greedily");
        }
        return s;
    }

    Eigen::MatrixXd b = graph.affinity();
    b /= b.maxCoeff();
    const Eigen::VectorXd d_obj = b.rowwise().sum();
    const Eigen::VectorXd d_cls = b.colwise().sum().transpose();
    if ((d_obj.array() <= 0).any() || (d_cls.array() <= 0).any()) throw ParameterError("graph has isolated nodes");

    // Cluster-side graph Bᵀ D_o⁻¹ B, normalised symmetrically by its degrees (= d_cls).
    const Eigen::MatrixXd w_cls = b.transpose() * d_obj.cwiseInverse().asDiagonal() * b;
    const Eigen::VectorXd inv_sqrt_d = d_cls.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd normalized = inv_sqrt_d.asDiagonal() * w_cls * inv_sqrt_d.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized);
    if (solver.info() != Eigen::Success) throw Error("eigen-decomposition of the cluster graph failed");

    Segmentation result;
    // Full-graph eigenvector for the j-th leading cluster-side eigenpair.
    auto transfer = [&](int j) {
        const Index col = nc - 1 - j;  // leading eigenvalues are last
        const double mu = std::clamp(solver.eigenvalues()[col], 0.0, 1.0);
        const Eigen::VectorXd v = solver.eigenvectors().col(col);
        const double residual = (normalized * v - solver.eigenvalues()[col] * v).norm();
        if (residual > options.residual_tolerance) {
            result.warnings.push_back("eigenpair residual " + std::to_string(residual) + " above tolerance");
        }
        const Eigen::VectorXd f_cls = inv_sqrt_d.cwiseProduct(v);
        // Object side: f_o = D_o⁻¹ B f_c / (1 - γ) with (1 - γ)² = μ.
        Eigen::VectorXd f_obj = d_obj.cwiseInverse().cwiseProduct(b * f_cls);
        if (mu > 1e-12) f_obj /= std::sqrt(mu);
        Eigen::VectorXd full(n + nc);
        full << f_obj, f_cls;
        return full;
    };

    Eigen::MatrixXd embedding(n + nc, k);
    for (int j = 0; j < k; ++j) embedding.col(j) = transfer(j);
    for (Index r = 0; r < embedding.rows(); ++r) {
        const double norm = embedding.row(r).norm();
        if (norm > 0) embedding.row(r) /= norm;
    }

    const NodeGraph nodes = node_graph(graph);
    const bool small = static_cast<Index>(nodes.links.size()) <= options.move_pass_node_limit;
    Labels best;
    double best_value = std::numeric_limits<double>::infinity();
    auto consider = [&](Labels candidate) {
        refine(nodes, candidate, k, options.refine_passes);
        const double value = ncut_of(nodes, candidate, k);
        if (value < best_value) {
            best_value = value;
            best = std::move(candidate);
        }
    };

    // Each k-means start is polished separately; the lowest normalized cut wins.
    KMeansOptions km;
    km.max_iterations = options.kmeans_max_iterations;
    for (int rep = 0; rep < options.kmeans_replicates; ++rep) {
        consider(kmeans_fit(embedding, k, derive_seed(seed, static_cast<std::uint64_t>(rep)), km).labels);
    }
    if (k == 2) {
        const int vectors = static_cast<int>(std::min<Index>(options.sweep_vectors, nc - 1));
        for (int j = 1; j <= vectors; ++j) {
            Labels swept = sweep_cut(nodes, transfer(j));
            if (!swept.empty()) consider(std::move(swept));
        }
    }
    if (small) move_passes(nodes, best, k, options.move_passes);
    Segmentation s = split(graph, best);
    s.warnings = std::move(result.warnings);
    return s;
}

ConsensusResult tcut_partition(const BipartiteGraph& graph, int k, std::uint64_t seed, const TcutOptions& options) {
    Segmentation s = tcut_segment(graph, k, seed, options);
    ConsensusResult result;
    result.labels = canonical_labels(s.objects);
    result.k = k;
    result.method = Method::LWGP;
    result.warnings = std::move(s.warnings);
    const int effective = result.labels.empty() ? 0 : *std::max_element(result.labels.begin(), result.labels.end()) + 1;
    if (effective < k) {
        result.warnings.push_back(std::to_string(k - effective) +
                                  " segment(s) contain only cluster nodes; effective k=" + std::to_string(effective));
    }
    return result;
}

double normalized_cut(const BipartiteGraph& graph, std::span<const int> object_labels,
                      std::span<const int> cluster_labels) {
    if (static_cast<Index>(object_labels.size()) != graph.objects ||
        static_cast<Index>(cluster_labels.size()) != graph.clusters) {
        throw ParameterError("segment labels do not match graph");
    }
    const int segments = 1 + std::max(object_labels.empty() ? 0 : *std::max_element(object_labels.begin(), object_labels.end()),
                                      cluster_labels.empty() ? 0 : *std::max_element(cluster_labels.begin(), cluster_labels.end()));
    std::vector<double> cut(static_cast<std::size_t>(segments), 0.0);
    std::vector<double> vol(static_cast<std::size_t>(segments), 0.0);
    for (const auto& e : graph.edges) {
        const int a = object_labels[static_cast<std::size_t>(e.object)];
        const int c = cluster_labels[static_cast<std::size_t>(e.cluster)];
        vol[static_cast<std::size_t>(a)] += e.weight;
        vol[static_cast<std::size_t>(c)] += e.weight;
        if (a != c) {
            cut[static_cast<std::size_t>(a)] += e.weight;
            cut[static_cast<std::size_t>(c)] += e.weight;
        }
    }
    double total = 0;
    for (int s = 0; s < segments; ++s) {
        if (vol[static_cast<std::size_t>(s)] > 0) total += cut[static_cast<std::size_t>(s)] / vol[static_cast<std::size_t>(s)];
    }
    return total;
}

ConsensusResult lwgp(const EnsembleView& view, const ValidityReport& report, int k, std::uint64_t seed) {
    if (k < 1 || k > view.objects()) throw ParameterError("k must be in [1, N]");
    return tcut_partition(build_lwbg(view, report), k, seed);
}

ConsensusResult lwgp(const EnsembleView& view, double theta, int k, std::uint64_t seed) {
    return lwgp(view, annotate_validity(view, theta), k, seed);
}

}  // namespace lwc
