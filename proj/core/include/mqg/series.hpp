#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "mqg/error.hpp"

namespace mqg {

/// An ordered sequence of finite real observations indexed by position.
/// Immutable after construction; finiteness is validated on construction.
class UnivariateSeries {
public:
    UnivariateSeries() = default;

    /// Throws DomainError if any value is NaN or infinite.
    explicit UnivariateSeries(std::vector<double> values);

    std::size_t length() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const { return values_[t]; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool operator==(const UnivariateSeries&) const = default;

private:
    std::vector<double> values_;
};

/// m aligned univariate components sharing one length. Immutable after
/// construction; component order is significant (it fixes layer order).
class MultivariateSeries {
public:
    MultivariateSeries() = default;

    /// Throws DomainError if components is empty or lengths differ.
    explicit MultivariateSeries(std::vector<UnivariateSeries> components);

    std::size_t component_count() const noexcept { return components_.size(); }
    std::size_t length() const noexcept {
        return components_.empty() ? 0 : components_.front().length();
    }
    const UnivariateSeries& component(std::size_t index) const {
        return components_.at(index);
    }
    const std::vector<UnivariateSeries>& components() const noexcept {
        return components_;
    }

    bool operator==(const MultivariateSeries&) const = default;

private:
    std::vector<UnivariateSeries> components_;
};

/// Empirical quantile bins of one series: `boundaries[i]` is the quantile at
/// probability (i+1)/eta, computed by linear interpolation between order
/// statistics. The last boundary always equals the series maximum, so every
/// series value falls into some bin.
struct QuantileBinning {
    std::size_t eta = 0;
    std::vector<double> boundaries; // non-decreasing, size eta
    std::vector<double> probs;      // (i+1)/eta, size eta
};

/// Throws DomainError for eta == 0 or an empty series.
QuantileBinning compute_quantiles(const UnivariateSeries& ts, std::size_t eta);

/// Smallest 0-based bin index i with value <= boundaries[i]; ties resolve to
/// the smallest index. Throws DomainError when value exceeds the top boundary
/// (which signals a series/binning mismatch).
std::size_t which_quantile(double value, const QuantileBinning& binning);

/// Reads a wide-layout CSV: one column per component, one row per timestamp,
/// optional single header line (recognized when no cell of the first row
/// parses as a number). UTF-8, '.' decimal point, no thousands separators.
/// Throws CsvError (1-based row/col) for non-numeric cells and ragged rows,
/// DomainError when fewer than two data rows remain, IoError on open failure.
MultivariateSeries load_csv(const std::filesystem::path& path);

/// Writes the wide-layout CSV accepted by load_csv, without a header line,
/// at full round-trip precision.
void save_csv(const MultivariateSeries& mts, const std::filesystem::path& path);

} // namespace mqg
