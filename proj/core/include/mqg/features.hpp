#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "mqg/multilayer_network.hpp"

namespace mqg {

/// Undirected weighted working copy of a subgraph view, indexed densely so
/// the graph algorithms run on plain vectors.
///
/// Conventions, applied uniformly across intra / inter / all views:
///   - `degree` is unweighted: each stored directed intra edge adds 1 to both
///     endpoints (so a mutual pair i<->j adds 2 to each), a self-loop adds 1
///     to its node, an undirected inter edge adds 1 to both endpoints.
///   - `adjacency` symmetrizes weights: opposite intra directions are summed,
///     self-loops are kept separately in `loop_weight` and never doubled.
struct ViewGraph {
    std::vector<NodeId> ids;                      // ascending (layer, node)
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency; // sorted by neighbor
    std::vector<double> loop_weight;
    std::vector<std::size_t> degree;

    std::size_t node_count() const noexcept { return ids.size(); }

    /// Sum of symmetrized weights counting every undirected edge (and every
    /// self-loop) once.
    double total_weight() const;

    /// Strength of a node: incident symmetrized weight, self-loops twice.
    double strength(std::size_t index) const;

    static ViewGraph from_view(const SubgraphView& view);
};

/// Arithmetic mean of the unweighted degrees over the graph's nodes.
/// Throws DomainError on an empty node set.
double avg_degree(const ViewGraph& g);

struct PathLengthResult {
    double value = 0.0;
    bool degenerate = false; // no mutually reachable pair existed
};

/// Mean breadth-first-search distance over all ordered pairs of distinct,
/// mutually reachable nodes; edges are treated as undirected and unweighted;
/// unreachable pairs are excluded.
PathLengthResult avg_path_length(const ViewGraph& g);

struct CommunityResult {
    std::vector<std::uint32_t> community; // compact ids, one per node
    std::size_t count = 0;
    double modularity = 0.0;              // of the returned partition
};

/// Newman weighted modularity of a partition under the ViewGraph weight
/// conventions. An empty edge set yields 0.
double modularity(const ViewGraph& g, const std::vector<std::uint32_t>& community);

/// Multi-level greedy modularity optimization. Deterministic: nodes are
/// visited in ascending id order, ties between candidate communities resolve
/// to the lowest community id, and aggregation renumbers communities by first
/// appearance. An empty edge set yields singleton communities.
CommunityResult louvain(const ViewGraph& g);

/// Probability mass over observed degree values.
struct DegreeDistribution {
    std::map<std::size_t, double> pmf;
};

DegreeDistribution degree_distribution(const ViewGraph& g);

/// Distribution restricted to the view's nodes of one layer.
DegreeDistribution degree_distribution(const ViewGraph& g, std::uint32_t layer);

/// Jensen-Shannon divergence with base-2 logarithms, in [0, 1]. Both inputs
/// must sum to 1 (DomainError otherwise).
double jsd(const DegreeDistribution& p, const DegreeDistribution& q);

/// Mean over occupied nodes of inter-degree / (intra-degree + inter-degree),
/// taking 0 for isolated nodes. Requires at least two layers.
double avg_ratio_degree(const MultilayerNetwork& net);

/// The fixed 21-entry topological description of a two-layer network:
/// degree/path/community statistics of the intra-, inter- and all-layer
/// views plus the relational measures (ratio degree and four degree-
/// distribution divergences).
struct FeatureVector {
    static constexpr std::size_t size = 21;
    static const std::array<std::string_view, size>& names();

    std::array<double, size> values{};

    double operator[](std::size_t i) const { return values[i]; }
};

/// Throws DomainError unless the network has exactly two layers.
FeatureVector feature_vector(const MultilayerNetwork& net);

} // namespace mqg
