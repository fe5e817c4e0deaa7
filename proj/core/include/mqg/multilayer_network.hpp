#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <unordered_map>
#include <vector>

#include "mqg/error.hpp"

namespace mqg {

/// A node of a multilayer network: (layer, node-within-layer). Indices are
/// 0-based throughout the library; serialized formats are 1-based.
struct NodeId {
    std::uint32_t layer = 0;
    std::uint32_t node = 0;

    friend bool operator==(NodeId, NodeId) = default;
    friend auto operator<=>(NodeId, NodeId) = default;
};

/// Weighted multilayer network over a fixed (layer x node) grid.
///
/// Intra-layer edges are directed with positive integer weights (transition
/// counts) and may be self-loops. Inter-layer edges are undirected and stored
/// once under the lower layer index: a cross-layer transition always implies
/// the opposite transition with equal weight, so one entry represents both.
/// Construction is single-writer; a fully built network is safe for
/// concurrent reads.
class MultilayerNetwork {
public:
    using EdgeMap = std::unordered_map<std::uint64_t, std::uint64_t>;

    MultilayerNetwork() = default;
    MultilayerNetwork(std::size_t layer_count, std::size_t nodes_per_layer);

    std::size_t layer_count() const noexcept { return layer_count_; }
    std::size_t nodes_per_layer() const noexcept { return nodes_per_layer_; }

    /// Creates the edge with weight `amount` or adds `amount` to it. Routes
    /// to intra or inter storage by comparing layers; inter edges are
    /// canonicalized so the lower layer comes first. Marks both endpoints
    /// occupied. Throws DomainError for out-of-bounds nodes or amount == 0.
    void add_or_increment_edge(NodeId from, NodeId to, std::uint64_t amount = 1);

    /// Weight of the directed intra edge i -> j in `layer`, 0 when absent.
    std::uint64_t intra_weight(std::size_t layer, std::uint32_t i, std::uint32_t j) const;

    /// Weight of the undirected inter edge between (layer_a, i) and
    /// (layer_b, j); the lookup accepts either layer order.
    std::uint64_t inter_weight(std::size_t layer_a, std::size_t layer_b,
                               std::uint32_t i, std::uint32_t j) const;

    /// Keyed by i * nodes_per_layer + j (directed i -> j).
    const EdgeMap& intra_edges(std::size_t layer) const;

    /// Keyed by i * nodes_per_layer + j with i in the lower layer; requires
    /// layer_a < layer_b.
    const EdgeMap& inter_edges(std::size_t layer_a, std::size_t layer_b) const;

    std::uint64_t intra_weight_total(std::size_t layer) const;
    std::uint64_t inter_weight_total(std::size_t layer_a, std::size_t layer_b) const;

    /// Pre-sizes an edge map ahead of a bulk insert.
    void reserve_intra(std::size_t layer, std::size_t edge_count);
    void reserve_inter(std::size_t layer_a, std::size_t layer_b, std::size_t edge_count);

    /// A node counts as occupied once it is an endpoint of any edge or has
    /// been marked explicitly (mappers mark every visited quantile bin).
    void mark_occupied(NodeId node);
    bool occupied(NodeId node) const;
    std::vector<std::uint32_t> occupied_nodes(std::size_t layer) const; // ascending
    std::size_t occupied_count(std::size_t layer) const;

    bool operator==(const MultilayerNetwork& other) const;

    static std::uint64_t edge_key(std::uint64_t i, std::uint64_t j, std::uint64_t stride) {
        return i * stride + j;
    }

private:
    void check_node(NodeId node) const;
    std::size_t pair_index(std::size_t a, std::size_t b) const; // a < b

    std::size_t layer_count_ = 0;
    std::size_t nodes_per_layer_ = 0;
    std::vector<EdgeMap> intra_;                 // one per layer
    std::vector<EdgeMap> inter_;                 // one per unordered layer pair
    std::vector<std::vector<std::uint8_t>> occupied_;
};

/// Which part of the network a view projects.
enum class SubgraphKind { Intra, Inter, All };

/// Read-only projection of a network: one layer's directed graph (Intra), the
/// undirected bipartite graph between two layers (Inter), or their union
/// (All). The node set is the occupied nodes of the involved layers. No edge
/// data is copied; the view borrows the network, which must outlive it.
class SubgraphView {
public:
    static SubgraphView intra(const MultilayerNetwork& net, std::size_t layer);
    static SubgraphView inter(const MultilayerNetwork& net, std::size_t layer_a, std::size_t layer_b);
    static SubgraphView all(const MultilayerNetwork& net, std::size_t layer_a, std::size_t layer_b);

    SubgraphKind kind() const noexcept { return kind_; }
    const MultilayerNetwork& network() const noexcept { return *net_; }
    const std::vector<std::size_t>& layers() const noexcept { return layers_; }

    /// Occupied nodes of the involved layers, ascending (layer, node).
    std::vector<NodeId> nodes() const;

    std::size_t edge_count() const;

    /// Invokes fn(from, to, weight, directed) for every edge of the view.
    /// Intra edges come out directed, inter edges undirected (emitted once,
    /// lower layer first). Order is unspecified.
    void for_each_edge(const std::function<void(NodeId, NodeId, std::uint64_t, bool)>& fn) const;

private:
    SubgraphView(const MultilayerNetwork& net, SubgraphKind kind, std::vector<std::size_t> layers);

    const MultilayerNetwork* net_;
    SubgraphKind kind_;
    std::vector<std::size_t> layers_;
};

/// Dense row-major supra-adjacency matrix of size (m*eta)^2: diagonal blocks
/// hold the directed intra weights, off-diagonal blocks the symmetric inter
/// weights. Throws CapacityError when m*eta exceeds 10^4.
std::vector<double> supra_adjacency(const MultilayerNetwork& net);

enum class ExportFormat { EdgeList, SupraCsv, GraphMl };

/// Writes the network in the chosen format.
///   EdgeList: TSV with header "layer_from node_from layer_to node_to weight
///             kind"; 1-based ids; inter edges written once (lower layer
///             first); deterministic ordering.
///   SupraCsv: the supra-adjacency matrix, row-major, no header.
///   GraphMl:  nodes carry layer/quantile attributes, edges carry weight and
///             kind (intra|inter); intra edges directed, inter undirected.
void export_network(const MultilayerNetwork& net, ExportFormat format,
                    const std::filesystem::path& path);

/// Reads an EdgeList file back. Dimensions are taken from the arguments when
/// positive, otherwise inferred from the largest indices present. Endpoint
/// occupancy is restored from the edges (the format carries no isolated
/// nodes).
MultilayerNetwork import_edge_list(const std::filesystem::path& path,
                                   std::size_t layer_count = 0,
                                   std::size_t nodes_per_layer = 0);

/// Reads a SupraCsv file back; dimensions are required since the format is a
/// bare matrix.
MultilayerNetwork import_supra_csv(const std::filesystem::path& path,
                                   std::size_t layer_count,
                                   std::size_t nodes_per_layer);

} // namespace mqg
