#include "mqg/series.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

namespace mqg {

UnivariateSeries::UnivariateSeries(std::vector<double> values)
    : values_(std::move(values)) {
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!std::isfinite(values_[t])) {
            throw DomainError("non-finite value at position " + std::to_string(t));
        }
    }
}

MultivariateSeries::MultivariateSeries(std::vector<UnivariateSeries> components)
    : components_(std::move(components)) {
    if (components_.empty()) {
        throw DomainError("multivariate series needs at least one component");
    }
    const std::size_t expected = components_.front().length();
    for (std::size_t c = 1; c < components_.size(); ++c) {
        if (components_[c].length() != expected) {
            throw DomainError("component " + std::to_string(c) + " has length " +
                              std::to_string(components_[c].length()) +
                              ", expected " + std::to_string(expected));
        }
    }
}

namespace {

/// Reorders `values` so that every position named in `ranks` (ascending,
/// unique) holds its order statistic. Bucket-groups the data by value in one
/// counting pass, then sorts only the buckets a requested rank falls into:
/// roughly 3n operations instead of a full n log n sort. Degenerate value
/// distributions collapse into few buckets and fall back to sorting those.
void multiselect(std::vector<double>& values, const std::vector<std::size_t>& ranks) {
    const std::size_t n = values.size();
    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *min_it;
    const double hi = *max_it;
    if (lo == hi) return; // all elements equal, any order is sorted

    constexpr std::size_t kBuckets = 2048;
    const double scale = static_cast<double>(kBuckets) / (hi - lo);
    if (!std::isfinite(scale)) {
        std::sort(values.begin(), values.end());
        return;
    }
    const auto bucket_of = [&](double v) {
        const auto b = static_cast<std::size_t>((v - lo) * scale);
        return b >= kBuckets ? kBuckets - 1 : b;
    };

    // Bucket starts via counting, then scatter; buckets are value-ordered, so
    // the grouped array is block-sorted.
    std::vector<std::uint32_t> start(kBuckets + 1, 0);
    for (const double v : values) ++start[bucket_of(v) + 1];
    for (std::size_t b = 1; b <= kBuckets; ++b) start[b] += start[b - 1];
    std::vector<double> grouped(n);
    {
        std::vector<std::uint32_t> cursor(start.begin(), start.end() - 1);
        for (const double v : values) grouped[cursor[bucket_of(v)]++] = v;
    }

    std::size_t bucket = 0;
    std::size_t last_sorted = kBuckets; // sentinel: nothing sorted yet
    for (const std::size_t rank : ranks) {
        while (start[bucket + 1] <= rank) ++bucket;
        if (bucket != last_sorted) {
            std::sort(grouped.begin() + start[bucket], grouped.begin() + start[bucket + 1]);
            last_sorted = bucket;
        }
    }
    values.swap(grouped);
}

} // namespace

QuantileBinning compute_quantiles(const UnivariateSeries& ts, std::size_t eta) {
    if (eta == 0) throw DomainError("quantile count must be >= 1");
    if (ts.length() == 0) throw DomainError("cannot bin an empty series");

    std::vector<double> sorted = ts.values();
    if (8 * eta >= sorted.size()) {
        std::sort(sorted.begin(), sorted.end());
    } else {
        // Only the order statistics around each boundary are needed.
        std::vector<std::size_t> ranks;
        ranks.reserve(2 * eta);
        const std::size_t n = sorted.size();
        for (std::size_t i = 0; i < eta; ++i) {
            const double h = static_cast<double>(n - 1) * static_cast<double>(i + 1) /
                             static_cast<double>(eta);
            const auto lo = static_cast<std::size_t>(h);
            ranks.push_back(lo);
            if (lo + 1 < n) ranks.push_back(lo + 1);
        }
        std::sort(ranks.begin(), ranks.end());
        ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
        multiselect(sorted, ranks);
    }

    QuantileBinning binning;
    binning.eta = eta;
    binning.probs.resize(eta);
    binning.boundaries.resize(eta);

    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i < eta; ++i) {
        const double p = static_cast<double>(i + 1) / static_cast<double>(eta);
        binning.probs[i] = p;
        // Linear interpolation between order statistics at rank h = (n-1) p.
        const double h = static_cast<double>(n - 1) * p;
        const auto lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        double q = sorted[lo];
        if (frac > 0.0 && lo + 1 < n) {
            q += frac * (sorted[lo + 1] - sorted[lo]);
        }
        binning.boundaries[i] = q;
    }
    // p = 1 lands exactly on the last order statistic.
    binning.boundaries[eta - 1] = sorted[n - 1];
    return binning;
}

std::size_t which_quantile(double value, const QuantileBinning& binning) {
    const auto& q = binning.boundaries;
    auto it = std::lower_bound(q.begin(), q.end(), value);
    if (it == q.end()) {
        throw DomainError("value above the top quantile boundary; series and binning disagree");
    }
    return static_cast<std::size_t>(it - q.begin());
}

namespace {

std::string_view trim(std::string_view cell) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    return cell;
}

bool parse_cell(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) return false;
    return std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace

MultivariateSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading: " + std::strerror(errno));
    }

    std::vector<std::vector<double>> columns;
    std::size_t column_count = 0;
    std::size_t row_number = 0; // 1-based physical line number
    bool saw_any_row = false;

    std::string line;
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue; // blank lines (typically trailing) are skipped

        const auto fields = split_fields(line);

        if (!saw_any_row) {
            saw_any_row = true;
            column_count = fields.size();
            // Header detection: a first row where no cell is numeric.
            bool any_numeric = false;
            double ignored;
            for (const auto& f : fields) {
                if (parse_cell(f, ignored)) { any_numeric = true; break; }
            }
            columns.resize(column_count);
            if (!any_numeric) continue; // header line, skip
        }

        if (fields.size() != column_count) {
            throw CsvError("row " + std::to_string(row_number) + " has " +
                               std::to_string(fields.size()) + " cells, expected " +
                               std::to_string(column_count),
                           row_number, 0);
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double value;
            if (!parse_cell(fields[c], value)) {
                throw CsvError("cannot parse cell (" + std::to_string(row_number) + "," +
                                   std::to_string(c + 1) + "): '" + std::string(fields[c]) + "'",
                               row_number, c + 1);
            }
            columns[c].push_back(value);
        }
    }

    if (columns.empty() || columns.front().size() < 2) {
        throw DomainError(path.string() + ": need at least two data rows, got " +
                          std::to_string(columns.empty() ? 0 : columns.front().size()));
    }

    std::vector<UnivariateSeries> components;
    components.reserve(columns.size());
    for (auto& col : columns) components.emplace_back(std::move(col));
    return MultivariateSeries(std::move(components));
}

void save_csv(const MultivariateSeries& mts, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
    }

    char buffer[64];
    const std::size_t m = mts.component_count();
    for (std::size_t t = 0; t < mts.length(); ++t) {
        for (std::size_t c = 0; c < m; ++c) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", mts.component(c)[t]);
            out << buffer;
            out << (c + 1 < m ? ',' : '\n');
        }
    }
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace mqg
