#include "mqg/multilayer_network.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace mqg {

MultilayerNetwork::MultilayerNetwork(std::size_t layer_count, std::size_t nodes_per_layer)
    : layer_count_(layer_count), nodes_per_layer_(nodes_per_layer) {
    if (layer_count == 0 || nodes_per_layer == 0) {
        throw DomainError("network needs at least one layer and one node per layer");
    }
    intra_.resize(layer_count);
    inter_.resize(layer_count * (layer_count - 1) / 2);
    occupied_.assign(layer_count, std::vector<std::uint8_t>(nodes_per_layer, 0));
}

void MultilayerNetwork::check_node(NodeId node) const {
    if (node.layer >= layer_count_ || node.node >= nodes_per_layer_) {
        throw DomainError("node (" + std::to_string(node.layer) + "," +
                          std::to_string(node.node) + ") outside the " +
                          std::to_string(layer_count_) + "x" +
                          std::to_string(nodes_per_layer_) + " grid");
    }
}

std::size_t MultilayerNetwork::pair_index(std::size_t a, std::size_t b) const {
    // Triangular index over unordered pairs with a < b.
    return a * layer_count_ - a * (a + 1) / 2 + (b - a - 1);
}

void MultilayerNetwork::add_or_increment_edge(NodeId from, NodeId to, std::uint64_t amount) {
    check_node(from);
    check_node(to);
    if (amount == 0) throw DomainError("edge increment must be positive");

    if (from.layer == to.layer) {
        intra_[from.layer][edge_key(from.node, to.node, nodes_per_layer_)] += amount;
    } else {
        NodeId lo = from, hi = to;
        if (lo.layer > hi.layer) std::swap(lo, hi);
        inter_[pair_index(lo.layer, hi.layer)][edge_key(lo.node, hi.node, nodes_per_layer_)] += amount;
    }
    occupied_[from.layer][from.node] = 1;
    occupied_[to.layer][to.node] = 1;
}

std::uint64_t MultilayerNetwork::intra_weight(std::size_t layer, std::uint32_t i,
                                              std::uint32_t j) const {
    const auto& edges = intra_edges(layer);
    const auto it = edges.find(edge_key(i, j, nodes_per_layer_));
    return it == edges.end() ? 0 : it->second;
}

std::uint64_t MultilayerNetwork::inter_weight(std::size_t layer_a, std::size_t layer_b,
                                              std::uint32_t i, std::uint32_t j) const {
    if (layer_a > layer_b) {
        std::swap(layer_a, layer_b);
        std::swap(i, j);
    }
    const auto& edges = inter_edges(layer_a, layer_b);
    const auto it = edges.find(edge_key(i, j, nodes_per_layer_));
    return it == edges.end() ? 0 : it->second;
}

const MultilayerNetwork::EdgeMap& MultilayerNetwork::intra_edges(std::size_t layer) const {
    if (layer >= layer_count_) throw DomainError("layer " + std::to_string(layer) + " does not exist");
    return intra_[layer];
}

const MultilayerNetwork::EdgeMap& MultilayerNetwork::inter_edges(std::size_t layer_a,
                                                                 std::size_t layer_b) const {
    if (layer_a >= layer_b) throw DomainError("inter edges are stored under (lower, higher) layer pairs");
    if (layer_b >= layer_count_) throw DomainError("layer " + std::to_string(layer_b) + " does not exist");
    return inter_[pair_index(layer_a, layer_b)];
}

std::uint64_t MultilayerNetwork::intra_weight_total(std::size_t layer) const {
    std::uint64_t total = 0;
    for (const auto& [key, w] : intra_edges(layer)) total += w;
    return total;
}

std::uint64_t MultilayerNetwork::inter_weight_total(std::size_t layer_a, std::size_t layer_b) const {
    std::uint64_t total = 0;
    for (const auto& [key, w] : inter_edges(layer_a, layer_b)) total += w;
    return total;
}

void MultilayerNetwork::reserve_intra(std::size_t layer, std::size_t edge_count) {
    if (layer >= layer_count_) throw DomainError("layer " + std::to_string(layer) + " does not exist");
    intra_[layer].reserve(intra_[layer].size() + edge_count);
}

void MultilayerNetwork::reserve_inter(std::size_t layer_a, std::size_t layer_b,
                                      std::size_t edge_count) {
    if (layer_a >= layer_b) throw DomainError("inter edges are stored under (lower, higher) layer pairs");
    if (layer_b >= layer_count_) throw DomainError("layer " + std::to_string(layer_b) + " does not exist");
    auto& edges = inter_[pair_index(layer_a, layer_b)];
    edges.reserve(edges.size() + edge_count);
}

void MultilayerNetwork::mark_occupied(NodeId node) {
    check_node(node);
    occupied_[node.layer][node.node] = 1;
}

bool MultilayerNetwork::occupied(NodeId node) const {
    check_node(node);
    return occupied_[node.layer][node.node] != 0;
}

std::vector<std::uint32_t> MultilayerNetwork::occupied_nodes(std::size_t layer) const {
    if (layer >= layer_count_) throw DomainError("layer " + std::to_string(layer) + " does not exist");
    std::vector<std::uint32_t> nodes;
    for (std::uint32_t i = 0; i < nodes_per_layer_; ++i) {
        if (occupied_[layer][i]) nodes.push_back(i);
    }
    return nodes;
}

std::size_t MultilayerNetwork::occupied_count(std::size_t layer) const {
    if (layer >= layer_count_) throw DomainError("layer " + std::to_string(layer) + " does not exist");
    std::size_t n = 0;
    for (const auto flag : occupied_[layer]) n += flag;
    return n;
}

bool MultilayerNetwork::operator==(const MultilayerNetwork& other) const {
    return layer_count_ == other.layer_count_ && nodes_per_layer_ == other.nodes_per_layer_ &&
           intra_ == other.intra_ && inter_ == other.inter_ && occupied_ == other.occupied_;
}

// ---------------------------------------------------------------------------
// Subgraph views
// ---------------------------------------------------------------------------

SubgraphView::SubgraphView(const MultilayerNetwork& net, SubgraphKind kind,
                           std::vector<std::size_t> layers)
    : net_(&net), kind_(kind), layers_(std::move(layers)) {
    for (const std::size_t layer : layers_) {
        if (layer >= net.layer_count()) {
            throw DomainError("layer " + std::to_string(layer) + " does not exist");
        }
    }
}

SubgraphView SubgraphView::intra(const MultilayerNetwork& net, std::size_t layer) {
    return SubgraphView(net, SubgraphKind::Intra, {layer});
}

SubgraphView SubgraphView::inter(const MultilayerNetwork& net, std::size_t layer_a,
                                 std::size_t layer_b) {
    if (layer_a == layer_b) throw DomainError("inter view needs two distinct layers");
    if (layer_a > layer_b) std::swap(layer_a, layer_b);
    return SubgraphView(net, SubgraphKind::Inter, {layer_a, layer_b});
}

SubgraphView SubgraphView::all(const MultilayerNetwork& net, std::size_t layer_a,
                               std::size_t layer_b) {
    if (layer_a == layer_b) throw DomainError("all view needs two distinct layers");
    if (layer_a > layer_b) std::swap(layer_a, layer_b);
    return SubgraphView(net, SubgraphKind::All, {layer_a, layer_b});
}

std::vector<NodeId> SubgraphView::nodes() const {
    std::vector<NodeId> out;
    for (const std::size_t layer : layers_) {
        for (const std::uint32_t node : net_->occupied_nodes(layer)) {
            out.push_back({static_cast<std::uint32_t>(layer), node});
        }
    }
    return out;
}

void SubgraphView::for_each_edge(
    const std::function<void(NodeId, NodeId, std::uint64_t, bool)>& fn) const {
    const auto stride = static_cast<std::uint64_t>(net_->nodes_per_layer());
    if (kind_ != SubgraphKind::Inter) {
        for (const std::size_t layer : layers_) {
            const auto l = static_cast<std::uint32_t>(layer);
            for (const auto& [key, w] : net_->intra_edges(layer)) {
                const auto i = static_cast<std::uint32_t>(key / stride);
                const auto j = static_cast<std::uint32_t>(key % stride);
                fn({l, i}, {l, j}, w, true);
            }
        }
    }
    if (kind_ != SubgraphKind::Intra) {
        const auto lo = static_cast<std::uint32_t>(layers_[0]);
        const auto hi = static_cast<std::uint32_t>(layers_[1]);
        for (const auto& [key, w] : net_->inter_edges(layers_[0], layers_[1])) {
            const auto i = static_cast<std::uint32_t>(key / stride);
            const auto j = static_cast<std::uint32_t>(key % stride);
            fn({lo, i}, {hi, j}, w, false);
        }
    }
}

std::size_t SubgraphView::edge_count() const {
    std::size_t n = 0;
    for_each_edge([&](NodeId, NodeId, std::uint64_t, bool) { ++n; });
    return n;
}

// ---------------------------------------------------------------------------
// Supra-adjacency and serialization
// ---------------------------------------------------------------------------

std::vector<double> supra_adjacency(const MultilayerNetwork& net) {
    const std::size_t m = net.layer_count();
    const std::size_t eta = net.nodes_per_layer();
    const std::size_t n = m * eta;
    if (n > 10000) {
        throw CapacityError("supra-adjacency of " + std::to_string(n) +
                            " nodes exceeds the dense guard of 10^4");
    }

    std::vector<double> matrix(n * n, 0.0);
    for (std::size_t layer = 0; layer < m; ++layer) {
        const std::size_t base = layer * eta;
        for (const auto& [key, w] : net.intra_edges(layer)) {
            const std::size_t i = key / eta;
            const std::size_t j = key % eta;
            matrix[(base + i) * n + (base + j)] = static_cast<double>(w);
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            for (const auto& [key, w] : net.inter_edges(a, b)) {
                const std::size_t i = key / eta;
                const std::size_t j = key % eta;
                matrix[(a * eta + i) * n + (b * eta + j)] = static_cast<double>(w);
                matrix[(b * eta + j) * n + (a * eta + i)] = static_cast<double>(w);
            }
        }
    }
    return matrix;
}

namespace {

struct EdgeRecord {
    std::uint32_t layer_from, node_from, layer_to, node_to;
    std::uint64_t weight;
    bool intra;
};

std::vector<EdgeRecord> sorted_edge_records(const MultilayerNetwork& net) {
    std::vector<EdgeRecord> records;
    const std::size_t eta = net.nodes_per_layer();
    for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
        const auto l = static_cast<std::uint32_t>(layer);
        for (const auto& [key, w] : net.intra_edges(layer)) {
            records.push_back({l, static_cast<std::uint32_t>(key / eta), l,
                               static_cast<std::uint32_t>(key % eta), w, true});
        }
    }
    for (std::size_t a = 0; a < net.layer_count(); ++a) {
        for (std::size_t b = a + 1; b < net.layer_count(); ++b) {
            for (const auto& [key, w] : net.inter_edges(a, b)) {
                records.push_back({static_cast<std::uint32_t>(a),
                                   static_cast<std::uint32_t>(key / eta),
                                   static_cast<std::uint32_t>(b),
                                   static_cast<std::uint32_t>(key % eta), w, false});
            }
        }
    }
    std::sort(records.begin(), records.end(), [](const EdgeRecord& x, const EdgeRecord& y) {
        return std::tie(x.layer_from, x.layer_to, x.node_from, x.node_to) <
               std::tie(y.layer_from, y.layer_to, y.node_from, y.node_to);
    });
    return records;
}

void write_edge_list(const MultilayerNetwork& net, std::ostream& out) {
    out << "layer_from\tnode_from\tlayer_to\tnode_to\tweight\tkind\n";
    for (const auto& r : sorted_edge_records(net)) {
        out << (r.layer_from + 1) << '\t' << (r.node_from + 1) << '\t' << (r.layer_to + 1)
            << '\t' << (r.node_to + 1) << '\t' << r.weight << '\t'
            << (r.intra ? "intra" : "inter") << '\n';
    }
}

void write_supra_csv(const MultilayerNetwork& net, std::ostream& out) {
    const std::vector<double> matrix = supra_adjacency(net);
    const std::size_t n = net.layer_count() * net.nodes_per_layer();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out << static_cast<std::uint64_t>(matrix[i * n + j]);
            out << (j + 1 < n ? ',' : '\n');
        }
    }
}

void write_graphml(const MultilayerNetwork& net, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"layer\" for=\"node\" attr.name=\"layer\" attr.type=\"int\"/>\n"
        << "  <key id=\"quantile\" for=\"node\" attr.name=\"quantile\" attr.type=\"int\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        << "  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <graph id=\"mnet\" edgedefault=\"directed\">\n";
    for (std::size_t layer = 0; layer < net.layer_count(); ++layer) {
        for (const std::uint32_t node : net.occupied_nodes(layer)) {
            out << "    <node id=\"l" << (layer + 1) << "n" << (node + 1) << "\">"
                << "<data key=\"layer\">" << (layer + 1) << "</data>"
                << "<data key=\"quantile\">" << (node + 1) << "</data></node>\n";
        }
    }
    for (const auto& r : sorted_edge_records(net)) {
        out << "    <edge source=\"l" << (r.layer_from + 1) << "n" << (r.node_from + 1)
            << "\" target=\"l" << (r.layer_to + 1) << "n" << (r.node_to + 1) << "\" directed=\""
            << (r.intra ? "true" : "false") << "\">"
            << "<data key=\"weight\">" << r.weight << "</data>"
            << "<data key=\"kind\">" << (r.intra ? "intra" : "inter") << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

} // namespace

void export_network(const MultilayerNetwork& net, ExportFormat format,
                    const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
    }
    switch (format) {
        case ExportFormat::EdgeList: write_edge_list(net, out); break;
        case ExportFormat::SupraCsv: write_supra_csv(net, out); break;
        case ExportFormat::GraphMl: write_graphml(net, out); break;
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

MultilayerNetwork import_edge_list(const std::filesystem::path& path,
                                   std::size_t layer_count,
                                   std::size_t nodes_per_layer) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");

    struct Row {
        std::uint32_t lf, nf, lt, nt;
        std::uint64_t w;
    };
    std::vector<Row> rows;
    std::string line;
    std::getline(in, line); // header
    std::size_t max_layer = 0, max_node = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        Row r;
        std::string kind;
        if (!(fields >> r.lf >> r.nf >> r.lt >> r.nt >> r.w >> kind)) {
            throw IoError("malformed edge-list row in " + path.string() + ": '" + line + "'");
        }
        if (r.lf == 0 || r.nf == 0 || r.lt == 0 || r.nt == 0) {
            throw IoError("edge-list ids are 1-based; got a zero in " + path.string());
        }
        --r.lf; --r.nf; --r.lt; --r.nt;
        max_layer = std::max<std::size_t>(max_layer, std::max(r.lf, r.lt));
        max_node = std::max<std::size_t>(max_node, std::max(r.nf, r.nt));
        rows.push_back(r);
    }

    if (layer_count == 0) layer_count = max_layer + 1;
    if (nodes_per_layer == 0) nodes_per_layer = max_node + 1;
    MultilayerNetwork net(layer_count, nodes_per_layer);
    for (const Row& r : rows) {
        net.add_or_increment_edge({r.lf, r.nf}, {r.lt, r.nt}, r.w);
    }
    return net;
}

MultilayerNetwork import_supra_csv(const std::filesystem::path& path,
                                   std::size_t layer_count,
                                   std::size_t nodes_per_layer) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");

    const std::size_t n = layer_count * nodes_per_layer;
    std::vector<double> matrix;
    matrix.reserve(n * n);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            double value = 0.0;
            const char* first = line.data() + start;
            const char* last = line.data() + comma;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last) {
                throw IoError("malformed supra cell in " + path.string());
            }
            matrix.push_back(value);
            if (comma == line.size()) break;
            start = comma + 1;
        }
    }
    if (matrix.size() != n * n) {
        throw IoError(path.string() + ": expected " + std::to_string(n * n) +
                      " supra cells, got " + std::to_string(matrix.size()));
    }

    MultilayerNetwork net(layer_count, nodes_per_layer);
    const auto block = [&](std::size_t row, std::size_t col) { return matrix[row * n + col]; };
    for (std::size_t a = 0; a < layer_count; ++a) {
        for (std::size_t i = 0; i < nodes_per_layer; ++i) {
            for (std::size_t j = 0; j < nodes_per_layer; ++j) {
                const double w = block(a * nodes_per_layer + i, a * nodes_per_layer + j);
                if (w != 0.0) {
                    net.add_or_increment_edge(
                        {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(i)},
                        {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(j)},
                        static_cast<std::uint64_t>(w));
                }
            }
        }
    }
    for (std::size_t a = 0; a < layer_count; ++a) {
        for (std::size_t b = a + 1; b < layer_count; ++b) {
            for (std::size_t i = 0; i < nodes_per_layer; ++i) {
                for (std::size_t j = 0; j < nodes_per_layer; ++j) {
                    const double w = block(a * nodes_per_layer + i, b * nodes_per_layer + j);
                    const double w_mirror = block(b * nodes_per_layer + j, a * nodes_per_layer + i);
                    if (w != w_mirror) {
                        throw IoError(path.string() + ": inter blocks are not symmetric");
                    }
                    if (w != 0.0) {
                        net.add_or_increment_edge(
                            {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(i)},
                            {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(j)},
                            static_cast<std::uint64_t>(w));
                    }
                }
            }
        }
    }
    return net;
}

} // namespace mqg
