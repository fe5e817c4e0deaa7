#include "mqg/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mqg {

double ViewGraph::total_weight() const {
    double w = 0.0;
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        for (const auto& [j, weight] : adjacency[i]) {
            if (j > i) w += weight;
        }
        w += loop_weight[i];
    }
    return w;
}

double ViewGraph::strength(std::size_t index) const {
    double s = 2.0 * loop_weight[index];
    for (const auto& [j, weight] : adjacency[index]) s += weight;
    return s;
}

ViewGraph ViewGraph::from_view(const SubgraphView& view) {
    ViewGraph g;
    g.ids = view.nodes();
    const std::size_t n = g.ids.size();
    g.adjacency.resize(n);
    g.loop_weight.assign(n, 0.0);
    g.degree.assign(n, 0);

    const std::uint64_t stride = view.network().nodes_per_layer();
    std::unordered_map<std::uint64_t, std::uint32_t> index_of;
    index_of.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        index_of[MultilayerNetwork::edge_key(g.ids[i].layer, g.ids[i].node, stride)] =
            static_cast<std::uint32_t>(i);
    }
    const auto lookup = [&](NodeId id) {
        const auto it = index_of.find(MultilayerNetwork::edge_key(id.layer, id.node, stride));
        if (it == index_of.end()) throw DomainError("edge endpoint missing from the view's node set");
        return it->second;
    };

    // Symmetrized pairwise weights, keyed (min, max) over dense indices.
    std::unordered_map<std::uint64_t, double> pair_weight;
    view.for_each_edge([&](NodeId from, NodeId to, std::uint64_t w, bool directed) {
        const std::uint32_t a = lookup(from);
        const std::uint32_t b = lookup(to);
        if (a == b) {
            g.loop_weight[a] += static_cast<double>(w);
            g.degree[a] += 1;
            return;
        }
        const std::uint64_t key =
            MultilayerNetwork::edge_key(std::min(a, b), std::max(a, b), n);
        pair_weight[key] += static_cast<double>(w);
        g.degree[a] += 1;
        g.degree[b] += 1;
        (void)directed;
    });

    for (const auto& [key, w] : pair_weight) {
        const auto a = static_cast<std::uint32_t>(key / n);
        const auto b = static_cast<std::uint32_t>(key % n);
        g.adjacency[a].emplace_back(b, w);
        g.adjacency[b].emplace_back(a, w);
    }
    for (auto& neighbors : g.adjacency) {
        std::sort(neighbors.begin(), neighbors.end());
    }
    return g;
}

double avg_degree(const ViewGraph& g) {
    if (g.node_count() == 0) throw DomainError("average degree of an empty node set");
    double sum = 0.0;
    for (const std::size_t d : g.degree) sum += static_cast<double>(d);
    return sum / static_cast<double>(g.node_count());
}

PathLengthResult avg_path_length(const ViewGraph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) throw DomainError("average path length of an empty node set");

    std::uint64_t pair_count = 0;
    std::uint64_t distance_sum = 0;
    std::vector<std::uint32_t> dist(n);
    std::vector<std::uint32_t> queue(n);

    for (std::size_t source = 0; source < n; ++source) {
        std::fill(dist.begin(), dist.end(), UINT32_MAX);
        dist[source] = 0;
        std::size_t head = 0, tail = 0;
        queue[tail++] = static_cast<std::uint32_t>(source);
        while (head < tail) {
            const std::uint32_t u = queue[head++];
            for (const auto& [v, w] : g.adjacency[u]) {
                if (dist[v] == UINT32_MAX) {
                    dist[v] = dist[u] + 1;
                    queue[tail++] = v;
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (v != source && dist[v] != UINT32_MAX) {
                distance_sum += dist[v];
                ++pair_count;
            }
        }
    }
    if (pair_count == 0) return {0.0, true};
    return {static_cast<double>(distance_sum) / static_cast<double>(pair_count), false};
}

double modularity(const ViewGraph& g, const std::vector<std::uint32_t>& community) {
    if (community.size() != g.node_count()) {
        throw DomainError("partition size does not match the node count");
    }
    const double total = g.total_weight();
    if (total <= 0.0) return 0.0;
    const double two_w = 2.0 * total;

    std::size_t community_count = 0;
    for (const std::uint32_t c : community) {
        community_count = std::max<std::size_t>(community_count, c + 1);
    }
    std::vector<double> internal(community_count, 0.0);
    std::vector<double> strength_sum(community_count, 0.0);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        strength_sum[community[i]] += g.strength(i);
        internal[community[i]] += 2.0 * g.loop_weight[i];
        for (const auto& [j, w] : g.adjacency[i]) {
            if (community[j] == community[i]) internal[community[i]] += w; // each pair twice
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < community_count; ++c) {
        const double fraction = strength_sum[c] / two_w;
        q += internal[c] / two_w - fraction * fraction;
    }
    return q;
}

namespace {

struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
    std::vector<double> loop;
    std::vector<double> strength;
    double total = 0.0;

    std::size_t size() const { return adjacency.size(); }
};

LevelGraph level_from_view_graph(const ViewGraph& g) {
    LevelGraph level;
    level.adjacency = g.adjacency;
    level.loop = g.loop_weight;
    level.strength.resize(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) level.strength[i] = g.strength(i);
    level.total = g.total_weight();
    return level;
}

/// One round of local moves; returns true when any node changed community.
/// `community` holds compact ids on entry (identity) and arbitrary ids on
/// exit.
bool local_moves(const LevelGraph& g, std::vector<std::uint32_t>& community) {
    constexpr double kGainEpsilon = 1e-12;
    const double two_w = 2.0 * g.total;
    const std::size_t n = g.size();

    std::vector<double> community_strength(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) community_strength[community[i]] += g.strength[i];

    std::vector<double> weight_to(n, 0.0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t old_comm = community[i];

            touched.clear();
            for (const auto& [j, w] : g.adjacency[i]) {
                const std::uint32_t c = community[j];
                if (weight_to[c] == 0.0) touched.push_back(c);
                weight_to[c] += w;
            }
            std::sort(touched.begin(), touched.end());

            community_strength[old_comm] -= g.strength[i];

            double best_gain = weight_to[old_comm] -
                               g.strength[i] * community_strength[old_comm] / two_w;
            std::uint32_t best_comm = old_comm;
            // Ascending scan with a strict test: among equal best gains the
            // lowest community id wins, and only genuine improvements move.
            for (const std::uint32_t c : touched) {
                if (c == old_comm) continue;
                const double gain =
                    weight_to[c] - g.strength[i] * community_strength[c] / two_w;
                if (gain > best_gain + kGainEpsilon) {
                    best_gain = gain;
                    best_comm = c;
                }
            }

            community[i] = best_comm;
            community_strength[best_comm] += g.strength[i];
            if (best_comm != old_comm) {
                improved = true;
                any_move = true;
            }

            for (const std::uint32_t c : touched) weight_to[c] = 0.0;
        }
    }
    return any_move;
}

/// Renumbers community ids compactly by first appearance (ascending node id).
std::size_t compact_renumber(std::vector<std::uint32_t>& community) {
    std::unordered_map<std::uint32_t, std::uint32_t> renumber;
    renumber.reserve(community.size());
    for (auto& c : community) {
        const auto [it, inserted] =
            renumber.emplace(c, static_cast<std::uint32_t>(renumber.size()));
        c = it->second;
    }
    return renumber.size();
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& community,
                     std::size_t community_count) {
    LevelGraph next;
    next.adjacency.resize(community_count);
    next.loop.assign(community_count, 0.0);
    next.strength.assign(community_count, 0.0);
    next.total = g.total;

    std::unordered_map<std::uint64_t, double> between;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::uint32_t ci = community[i];
        next.loop[ci] += g.loop[i];
        for (const auto& [j, w] : g.adjacency[i]) {
            const std::uint32_t cj = community[j];
            if (ci == cj) {
                if (j > i) next.loop[ci] += w; // each internal pair once
            } else if (ci < cj) {
                between[MultilayerNetwork::edge_key(ci, cj, community_count)] += w;
            }
        }
    }
    for (const auto& [key, w] : between) {
        const auto a = static_cast<std::uint32_t>(key / community_count);
        const auto b = static_cast<std::uint32_t>(key % community_count);
        next.adjacency[a].emplace_back(b, w);
        next.adjacency[b].emplace_back(a, w);
    }
    for (auto& neighbors : next.adjacency) std::sort(neighbors.begin(), neighbors.end());
    for (std::size_t c = 0; c < community_count; ++c) {
        next.strength[c] = 2.0 * next.loop[c];
        for (const auto& [j, w] : next.adjacency[c]) next.strength[c] += w;
    }
    return next;
}

} // namespace

CommunityResult louvain(const ViewGraph& g) {
    const std::size_t n = g.node_count();
    CommunityResult result;
    result.community.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.community[i] = static_cast<std::uint32_t>(i);

    if (g.total_weight() <= 0.0) {
        result.count = n;
        result.modularity = 0.0;
        return result;
    }

    LevelGraph level = level_from_view_graph(g);
    std::vector<std::uint32_t> node_to_community = result.community; // identity

    while (true) {
        std::vector<std::uint32_t> community(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            community[i] = static_cast<std::uint32_t>(i);
        }
        const bool moved = local_moves(level, community);
        if (!moved) break;

        const std::size_t count = compact_renumber(community);
        for (auto& c : node_to_community) c = community[c];
        if (count == level.size()) break;
        level = aggregate(level, community, count);
    }

    result.community = std::move(node_to_community);
    result.count = compact_renumber(result.community);
    result.modularity = modularity(g, result.community);
    return result;
}

DegreeDistribution degree_distribution(const ViewGraph& g) {
    DegreeDistribution dist;
    if (g.node_count() == 0) return dist;
    for (const std::size_t d : g.degree) dist.pmf[d] += 1.0;
    for (auto& [d, p] : dist.pmf) p /= static_cast<double>(g.node_count());
    return dist;
}

DegreeDistribution degree_distribution(const ViewGraph& g, std::uint32_t layer) {
    DegreeDistribution dist;
    std::size_t n = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (g.ids[i].layer == layer) {
            dist.pmf[g.degree[i]] += 1.0;
            ++n;
        }
    }
    for (auto& [d, p] : dist.pmf) p /= static_cast<double>(n);
    return dist;
}

namespace {

void check_normalized(const DegreeDistribution& dist) {
    double sum = 0.0;
    for (const auto& [d, p] : dist.pmf) {
        if (p < 0.0) throw DomainError("degree distribution has a negative mass");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw DomainError("degree distribution is not normalized (sums to " +
                          std::to_string(sum) + ")");
    }
}

double entropy_bits(const std::map<std::size_t, double>& pmf) {
    double h = 0.0;
    for (const auto& [d, p] : pmf) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

} // namespace

double jsd(const DegreeDistribution& p, const DegreeDistribution& q) {
    check_normalized(p);
    check_normalized(q);

    std::map<std::size_t, double> mixture;
    for (const auto& [d, mass] : p.pmf) mixture[d] += 0.5 * mass;
    for (const auto& [d, mass] : q.pmf) mixture[d] += 0.5 * mass;

    const double divergence =
        entropy_bits(mixture) - 0.5 * (entropy_bits(p.pmf) + entropy_bits(q.pmf));
    return std::clamp(divergence, 0.0, 1.0);
}

double avg_ratio_degree(const MultilayerNetwork& net) {
    const std::size_t m = net.layer_count();
    if (m < 2) throw DomainError("ratio degree needs at least two layers");
    const std::size_t eta = net.nodes_per_layer();

    std::vector<std::size_t> intra_deg(m * eta, 0), inter_deg(m * eta, 0);
    for (std::size_t layer = 0; layer < m; ++layer) {
        for (const auto& [key, w] : net.intra_edges(layer)) {
            const std::size_t i = key / eta;
            const std::size_t j = key % eta;
            intra_deg[layer * eta + i] += 1;
            if (i != j) intra_deg[layer * eta + j] += 1;
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            for (const auto& [key, w] : net.inter_edges(a, b)) {
                inter_deg[a * eta + key / eta] += 1;
                inter_deg[b * eta + key % eta] += 1;
            }
        }
    }

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t layer = 0; layer < m; ++layer) {
        for (const std::uint32_t node : net.occupied_nodes(layer)) {
            const std::size_t k_intra = intra_deg[layer * eta + node];
            const std::size_t k_inter = inter_deg[layer * eta + node];
            const std::size_t total = k_intra + k_inter;
            sum += total == 0 ? 0.0
                              : static_cast<double>(k_inter) / static_cast<double>(total);
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

const std::array<std::string_view, FeatureVector::size>& FeatureVector::names() {
    static const std::array<std::string_view, size> kNames = {
        "intra1_avg_degree",    "intra1_avg_path_length", "intra1_modularity",
        "intra1_n_communities", "intra2_avg_degree",      "intra2_avg_path_length",
        "intra2_modularity",    "intra2_n_communities",   "inter_avg_degree",
        "inter_avg_path_length","inter_modularity",       "inter_n_communities",
        "all_avg_degree",       "all_avg_path_length",    "all_modularity",
        "all_n_communities",    "avg_ratio_degree",       "jsd_intra1_intra2",
        "jsd_intra1_inter",     "jsd_intra2_inter",       "jsd_all_l1_l2",
    };
    return kNames;
}

FeatureVector feature_vector(const MultilayerNetwork& net) {
    if (net.layer_count() != 2) {
        throw DomainError("feature extraction expects a two-layer network, got " +
                          std::to_string(net.layer_count()) + " layers");
    }

    const ViewGraph intra1 = ViewGraph::from_view(SubgraphView::intra(net, 0));
    const ViewGraph intra2 = ViewGraph::from_view(SubgraphView::intra(net, 1));
    const ViewGraph inter = ViewGraph::from_view(SubgraphView::inter(net, 0, 1));
    const ViewGraph all = ViewGraph::from_view(SubgraphView::all(net, 0, 1));

    FeatureVector fv;
    const auto fill_block = [&](std::size_t offset, const ViewGraph& g) {
        const CommunityResult communities = louvain(g);
        fv.values[offset + 0] = avg_degree(g);
        fv.values[offset + 1] = avg_path_length(g).value;
        fv.values[offset + 2] = communities.modularity;
        fv.values[offset + 3] = static_cast<double>(communities.count);
    };
    fill_block(0, intra1);
    fill_block(4, intra2);
    fill_block(8, inter);
    fill_block(12, all);

    fv.values[16] = avg_ratio_degree(net);

    const DegreeDistribution d_intra1 = degree_distribution(intra1);
    const DegreeDistribution d_intra2 = degree_distribution(intra2);
    const DegreeDistribution d_inter = degree_distribution(inter);
    fv.values[17] = jsd(d_intra1, d_intra2);
    fv.values[18] = jsd(d_intra1, d_inter);
    fv.values[19] = jsd(d_intra2, d_inter);
    fv.values[20] = jsd(degree_distribution(all, 0), degree_distribution(all, 1));
    return fv;
}

} // namespace mqg
