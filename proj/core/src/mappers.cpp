#include "mqg/mappers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mqg {

std::size_t auto_eta(std::size_t length) {
    const double eta = std::round(2.0 * std::cbrt(static_cast<double>(length)));
    return std::max<std::size_t>(1, static_cast<std::size_t>(eta));
}

std::size_t resolve_eta(const MappingConfig& config, std::size_t length) {
    return config.eta ? *config.eta : auto_eta(length);
}

namespace {

// Bulk accumulation buffer: dense counts when eta is small, map otherwise.
// Flushing through add_or_increment_edge keeps the network contract in one
// place while the hot loop touches contiguous memory.
class EdgeAccumulator {
public:
    explicit EdgeAccumulator(std::size_t eta)
        : eta_(eta), dense_(eta <= kDenseLimit) {
        if (dense_) counts_.assign(eta * eta, 0);
    }

    void hit(std::uint32_t i, std::uint32_t j) {
        if (dense_) {
            ++counts_[static_cast<std::size_t>(i) * eta_ + j];
        } else {
            ++sparse_[MultilayerNetwork::edge_key(i, j, eta_)];
        }
    }

    void flush_intra(MultilayerNetwork& net, std::uint32_t layer) const {
        net.reserve_intra(layer, nonzero_count());
        flush([&](std::uint32_t i, std::uint32_t j, std::uint64_t count) {
            net.add_or_increment_edge({layer, i}, {layer, j}, count);
        });
    }

    void flush_inter(MultilayerNetwork& net, std::uint32_t layer_a, std::uint32_t layer_b) const {
        net.reserve_inter(layer_a, layer_b, nonzero_count());
        flush([&](std::uint32_t i, std::uint32_t j, std::uint64_t count) {
            net.add_or_increment_edge({layer_a, i}, {layer_b, j}, count);
        });
    }

private:
    static constexpr std::size_t kDenseLimit = 1024;

    std::size_t nonzero_count() const {
        if (!dense_) return sparse_.size();
        std::size_t n = 0;
        for (const std::uint64_t count : counts_) n += count > 0 ? 1 : 0;
        return n;
    }

    template <typename Fn>
    void flush(Fn&& emit) const {
        if (dense_) {
            for (std::size_t i = 0; i < eta_; ++i) {
                for (std::size_t j = 0; j < eta_; ++j) {
                    const std::uint64_t count = counts_[i * eta_ + j];
                    if (count > 0) {
                        emit(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), count);
                    }
                }
            }
        } else {
            for (const auto& [key, count] : sparse_) {
                emit(static_cast<std::uint32_t>(key / eta_),
                     static_cast<std::uint32_t>(key % eta_), count);
            }
        }
    }

    std::size_t eta_;
    bool dense_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

QuantileSequence map_qg_into(MultilayerNetwork& net, std::uint32_t layer,
                             const UnivariateSeries& ts, std::size_t eta,
                             QuantileBinning& binning_out) {
    if (ts.length() < 2) throw DomainError("quantile graph needs a series of length >= 2");

    binning_out = compute_quantiles(ts, eta);

    // Branchless lower_bound; same semantics as which_quantile.
    const double* bounds = binning_out.boundaries.data();
    QuantileSequence seq;
    seq.bins.resize(ts.length());
    for (std::size_t t = 0; t < ts.length(); ++t) {
        const double value = ts[t];
        std::size_t lo = 0;
        std::size_t len = eta;
        while (len > 1) {
            const std::size_t half = len / 2;
            lo += bounds[lo + half - 1] < value ? half : 0;
            len -= half;
        }
        lo += bounds[lo] < value ? 1 : 0;
        if (lo == eta) {
            throw DomainError("value above the top quantile boundary; series and binning disagree");
        }
        seq.bins[t] = static_cast<std::uint32_t>(lo);
    }

    // With T >= 2 every visited bin is a transition endpoint, so occupancy
    // marking is covered by the edge flush.
    EdgeAccumulator acc(eta);
    for (std::size_t t = 0; t + 1 < ts.length(); ++t) {
        acc.hit(seq.bins[t], seq.bins[t + 1]);
    }
    acc.flush_intra(net, layer);
    return seq;
}

} // namespace

QgResult map_qg(const UnivariateSeries& ts, std::size_t eta) {
    QgResult result{MultilayerNetwork(1, eta), {}, {}};
    result.sequence = map_qg_into(result.net, 0, ts, eta, result.binning);
    return result;
}

void map_contemporaneous(MultilayerNetwork& net, std::size_t layer_a, std::size_t layer_b,
                         const QuantileSequence& qa, const QuantileSequence& qb) {
    if (qa.length() != qb.length()) {
        throw DomainError("quantile sequences differ in length: " + std::to_string(qa.length()) +
                          " vs " + std::to_string(qb.length()));
    }
    if (layer_a == layer_b) throw DomainError("contemporaneous linking needs two distinct layers");

    EdgeAccumulator acc(net.nodes_per_layer());
    const bool swap = layer_a > layer_b;
    for (std::size_t t = 0; t < qa.length(); ++t) {
        const std::uint32_t i = swap ? qb.bins[t] : qa.bins[t];
        const std::uint32_t j = swap ? qa.bins[t] : qb.bins[t];
        acc.hit(i, j);
    }
    acc.flush_inter(net, static_cast<std::uint32_t>(std::min(layer_a, layer_b)),
                    static_cast<std::uint32_t>(std::max(layer_a, layer_b)));
}

MqgResult map_mqg(const MultivariateSeries& mts, const MappingConfig& config) {
    if (config.lag != 0) {
        throw DomainError("lagged inter-layer mapping is not implemented (lag must be 0)");
    }
    const std::size_t m = mts.component_count();
    if (m == 0) throw DomainError("cannot map an empty series");
    const std::size_t eta = resolve_eta(config, mts.length());

    MqgResult result{MultilayerNetwork(m, eta), {}, {}};
    result.sequences.resize(m);
    result.binnings.resize(m);

    for (std::size_t layer = 0; layer < m; ++layer) {
        result.sequences[layer] =
            map_qg_into(result.net, static_cast<std::uint32_t>(layer), mts.component(layer),
                        eta, result.binnings[layer]);
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            map_contemporaneous(result.net, a, b, result.sequences[a], result.sequences[b]);
        }
    }
    return result;
}

namespace {

/// Forward visibility sweep. Connects source index a (values `from`) to
/// target index b > a (values `to`) when every strictly intermediate `to`
/// value is below min(from[a], to[b]). The running maximum of intermediates
/// only grows, so the scan stops once it reaches from[a].
template <typename Emit>
void horizontal_visibility_sweep(const std::vector<double>& from, const std::vector<double>& to,
                                 Emit&& emit) {
    const std::size_t n = from.size();
    for (std::size_t a = 0; a < n; ++a) {
        double run_max = -std::numeric_limits<double>::infinity();
        for (std::size_t b = a + 1; b < n; ++b) {
            if (run_max < std::min(from[a], to[b])) emit(a, b);
            run_max = std::max(run_max, to[b]);
            if (run_max >= from[a]) break;
        }
    }
}

} // namespace

MultilayerNetwork map_mhvg_baseline(const MultivariateSeries& mts) {
    const std::size_t m = mts.component_count();
    const std::size_t n = mts.length();
    if (m < 2) throw DomainError("the multilayer baseline needs at least two components");
    if (n < 2) throw DomainError("the multilayer baseline needs a series of length >= 2");

    MultilayerNetwork net(m, n);

    for (std::size_t layer = 0; layer < m; ++layer) {
        const auto l = static_cast<std::uint32_t>(layer);
        const auto& values = mts.component(layer).values();
        horizontal_visibility_sweep(values, values, [&](std::size_t a, std::size_t b) {
            net.add_or_increment_edge({l, static_cast<std::uint32_t>(a)},
                                      {l, static_cast<std::uint32_t>(b)});
        });
    }

    for (std::size_t la = 0; la < m; ++la) {
        for (std::size_t lb = la + 1; lb < m; ++lb) {
            const auto a_id = static_cast<std::uint32_t>(la);
            const auto b_id = static_cast<std::uint32_t>(lb);
            const auto& va = mts.component(la).values();
            const auto& vb = mts.component(lb).values();
            // Sources in layer la, intermediates and targets read from lb.
            horizontal_visibility_sweep(va, vb, [&](std::size_t a, std::size_t b) {
                net.add_or_increment_edge({a_id, static_cast<std::uint32_t>(a)},
                                          {b_id, static_cast<std::uint32_t>(b)});
            });
            // The symmetric sweep with the roles of the layers exchanged.
            horizontal_visibility_sweep(vb, va, [&](std::size_t a, std::size_t b) {
                net.add_or_increment_edge({b_id, static_cast<std::uint32_t>(a)},
                                          {a_id, static_cast<std::uint32_t>(b)});
            });
            // Contemporaneous pairs have an empty intermediate set.
            for (std::size_t t = 0; t < n; ++t) {
                net.add_or_increment_edge({a_id, static_cast<std::uint32_t>(t)},
                                          {b_id, static_cast<std::uint32_t>(t)});
            }
        }
    }
    return net;
}

std::vector<double> intra_transition_matrix(const MultilayerNetwork& net, std::size_t layer) {
    const std::size_t eta = net.nodes_per_layer();
    std::vector<double> matrix(eta * eta, 0.0);
    std::vector<double> row_sum(eta, 0.0);
    for (const auto& [key, w] : net.intra_edges(layer)) {
        const std::size_t i = key / eta;
        matrix[key] = static_cast<double>(w);
        row_sum[i] += static_cast<double>(w);
    }
    for (std::size_t i = 0; i < eta; ++i) {
        if (row_sum[i] > 0.0) {
            for (std::size_t j = 0; j < eta; ++j) matrix[i * eta + j] /= row_sum[i];
        }
    }
    return matrix;
}

} // namespace mqg
