#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "mqg/rng.hpp"
#include "mqg/series.hpp"
#include "oracles.hpp"

using namespace mqg;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("series");

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_csv reads a plain two-column file") {
    const auto path = write_temp("mqg_series_plain.csv", "1,5\n2,6\n3,7\n");
    const MultivariateSeries mts = load_csv(path);
    CHECK(mts.component_count() == 2);
    CHECK(mts.length() == 3);
    CHECK(mts.component(0).values() == std::vector<double>{1, 2, 3});
    CHECK(mts.component(1).values() == std::vector<double>{5, 6, 7});
}

TEST_CASE("load_csv skips a header line") {
    const auto path = write_temp("mqg_series_header.csv", "a,b\n1,5\n2,6\n");
    const MultivariateSeries mts = load_csv(path);
    CHECK(mts.component_count() == 2);
    CHECK(mts.length() == 2);
}

TEST_CASE("load_csv reports the position of a bad cell") {
    const auto path = write_temp("mqg_series_bad.csv", "1,x\n2,3\n");
    try {
        load_csv(path);
        FAIL("expected CsvError");
    } catch (const CsvError& error) {
        CHECK(error.row() == 1);
        CHECK(error.col() == 2);
    }
}

TEST_CASE("load_csv rejects ragged rows and short files") {
    const auto ragged = write_temp("mqg_series_ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(load_csv(ragged), CsvError);

    const auto one_row = write_temp("mqg_series_short.csv", "1,2\n");
    CHECK_THROWS_AS(load_csv(one_row), DomainError);

    CHECK_THROWS_AS(load_csv("does_not_exist_anywhere.csv"), IoError);
}

TEST_CASE("csv round trip preserves values exactly") {
    const MultivariateSeries mts({UnivariateSeries({0.1, -2.5e-7, 3.14159265358979}),
                                  UnivariateSeries({1e10, 2.0000000001, -7})});
    const auto path = fs::temp_directory_path() / "mqg_series_roundtrip.csv";
    save_csv(mts, path);
    CHECK(load_csv(path) == mts);
}

TEST_CASE("series constructors validate input") {
    CHECK_THROWS_AS(UnivariateSeries({1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(MultivariateSeries(std::vector<UnivariateSeries>{}), DomainError);
    CHECK_THROWS_AS(MultivariateSeries({UnivariateSeries({1, 2}), UnivariateSeries({1})}),
                    DomainError);
}

TEST_CASE("compute_quantiles interpolates between order statistics") {
    const UnivariateSeries ts({1, 2, 3, 4});

    SUBCASE("median and maximum for eta=2") {
        const QuantileBinning binning = compute_quantiles(ts, 2);
        CHECK(binning.boundaries == std::vector<double>{2.5, 4.0});
        CHECK(binning.probs == std::vector<double>{0.5, 1.0});
    }
    SUBCASE("constant series collapses all boundaries") {
        const QuantileBinning binning = compute_quantiles(UnivariateSeries({7, 7, 7, 7}), 4);
        CHECK(binning.boundaries == std::vector<double>{7, 7, 7, 7});
    }
    SUBCASE("eta=1 keeps only the maximum") {
        const QuantileBinning binning = compute_quantiles(ts, 1);
        CHECK(binning.boundaries == std::vector<double>{4.0});
    }
    SUBCASE("eta=0 is rejected") {
        CHECK_THROWS_AS(compute_quantiles(ts, 0), DomainError);
    }
}

TEST_CASE("which_quantile picks the smallest qualifying bin") {
    const QuantileBinning binning = compute_quantiles(UnivariateSeries({1, 2, 3, 4}), 2);
    CHECK(which_quantile(1.0, binning) == 0);
    CHECK(which_quantile(4.0, binning) == 1);

    const QuantileBinning ties = compute_quantiles(UnivariateSeries({7, 7, 7, 7}), 4);
    CHECK(which_quantile(7.0, ties) == 0);

    CHECK_THROWS_AS(which_quantile(4.5, binning), DomainError);
}

TEST_CASE("which_quantile is monotone in the value") {
    Xoshiro256pp rng(7701);
    for (int round = 0; round < 1000; ++round) {
        const std::size_t n = 2 + rng.next_below(40);
        std::vector<double> values(n);
        for (auto& v : values) v = rng.next_unit() * 20.0 - 10.0;
        const UnivariateSeries ts(values);
        const std::size_t eta = 1 + rng.next_below(8);
        const QuantileBinning binning = compute_quantiles(ts, eta);

        const double a = values[rng.next_below(n)];
        const double b = values[rng.next_below(n)];
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        CHECK(which_quantile(lo, binning) <= which_quantile(hi, binning));
    }
}

TEST_CASE("boundaries are non-decreasing and end at the maximum") {
    Xoshiro256pp rng(9902);
    for (int round = 0; round < 500; ++round) {
        const std::size_t n = 2 + rng.next_below(60);
        std::vector<double> values(n);
        for (auto& v : values) v = rng.next_unit() * 100.0;
        const UnivariateSeries ts(values);
        const std::size_t eta = 1 + rng.next_below(12);
        const QuantileBinning binning = compute_quantiles(ts, eta);

        REQUIRE(binning.boundaries.size() == eta);
        CHECK(std::is_sorted(binning.boundaries.begin(), binning.boundaries.end()));
        CHECK(binning.boundaries.back() == *std::max_element(values.begin(), values.end()));

        // Every value maps to a valid bin, and for distinct values the
        // maximum lands in the top bin.
        for (const double value : values) {
            CHECK(which_quantile(value, binning) < eta);
        }
        std::vector<double> distinct(values);
        std::sort(distinct.begin(), distinct.end());
        if (std::adjacent_find(distinct.begin(), distinct.end()) == distinct.end()) {
            CHECK(which_quantile(distinct.back(), binning) == eta - 1);
        }

        // Agreement with the independent reference implementation.
        const auto reference = oracle::quantile_boundaries(values, eta);
        for (std::size_t i = 0; i < eta; ++i) {
            CHECK(binning.boundaries[i] == doctest::Approx(reference[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("eta=T on a strictly increasing series gives every value its own bin") {
    for (std::size_t n = 2; n <= 12; ++n) {
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i) * 1.5 + 1.0;
        const QuantileBinning binning = compute_quantiles(UnivariateSeries(values), n);
        std::vector<bool> used(n, false);
        for (const double value : values) {
            const std::size_t bin = which_quantile(value, binning);
            CHECK_FALSE(used[bin]);
            used[bin] = true;
        }
    }
}

TEST_SUITE_END();
