#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mqg/multilayer_network.hpp"
#include "mqg/series.hpp"

namespace mqg {

/// Per-timestamp quantile bin of one series (0-based bins, length T).
struct QuantileSequence {
    std::vector<std::uint32_t> bins;

    std::size_t length() const noexcept { return bins.size(); }
};

/// eta = round(2 * T^(1/3)), the length-based bin-count rule.
std::size_t auto_eta(std::size_t length);

struct MappingConfig {
    /// Fixed bin count; unset selects auto_eta(T).
    std::optional<std::size_t> eta = 50;

    /// Inter-layer timestamp lag hook. Only 0 (contemporaneous) is
    /// implemented; other values are rejected.
    std::size_t lag = 0;
};

std::size_t resolve_eta(const MappingConfig& config, std::size_t length);

struct QgResult {
    MultilayerNetwork net; // single layer
    QuantileSequence sequence;
    QuantileBinning binning;
};

/// Quantile Graph of one series: eta bins as nodes, a directed edge
/// increment per consecutive-observation transition (T-1 in total, self-loops
/// included). Requires T >= 2.
QgResult map_qg(const UnivariateSeries& ts, std::size_t eta);

/// Links two already-mapped layers: for each timestamp t, increments the
/// undirected inter edge between bin qa[t] of layer_a and bin qb[t] of
/// layer_b, adding T to the pair's total weight. Throws DomainError on
/// length mismatch.
void map_contemporaneous(MultilayerNetwork& net, std::size_t layer_a, std::size_t layer_b,
                         const QuantileSequence& qa, const QuantileSequence& qb);

struct MqgResult {
    MultilayerNetwork net;
    std::vector<QuantileSequence> sequences; // one per layer
    std::vector<QuantileBinning> binnings;   // one per layer
};

/// Multilayer Quantile Graph: one Quantile Graph layer per component (bins
/// computed per component independently), then every layer pair linked by
/// contemporaneous co-occurrence. m = 1 yields a plain single-layer QG.
MqgResult map_mqg(const MultivariateSeries& mts, const MappingConfig& config = {});

/// Horizontal-visibility multilayer baseline: one node per timestamp per
/// layer. Intra edges follow the horizontal visibility rule (two timestamps
/// see each other when every strictly intermediate value lies below the
/// smaller endpoint); inter edges apply the same rule across a component
/// pair, with intermediate values read from the target component, swept in
/// both directions; contemporaneous pairs always connect. Unweighted,
/// undirected. Requires m >= 2.
MultilayerNetwork map_mhvg_baseline(const MultivariateSeries& mts);

/// Row-stochastic form of one intra layer: out-weights of every occupied
/// node with positive out-degree, divided by their sum. Returned as a dense
/// eta x eta row-major matrix.
std::vector<double> intra_transition_matrix(const MultilayerNetwork& net, std::size_t layer);

} // namespace mqg
