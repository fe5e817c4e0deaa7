#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mqg/analysis.hpp"
#include "mqg/rng.hpp"

using namespace mqg;

TEST_SUITE_BEGIN("analysis");

namespace {

FeatureMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix matrix;
    matrix.rows = rows;
    const std::size_t p = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < p; ++c) matrix.column_names.push_back("f" + std::to_string(c));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        matrix.row_ids.push_back(std::to_string(r));
        matrix.labels.push_back("x");
    }
    return matrix;
}

} // namespace

TEST_CASE("min-max normalization") {
    const FeatureMatrix matrix = matrix_from({{2, 5}, {4, 5}, {6, 5}});
    const FeatureMatrix normalized = minmax_normalize(matrix);
    CHECK(normalized.rows[0][0] == 0.0);
    CHECK(normalized.rows[1][0] == 0.5);
    CHECK(normalized.rows[2][0] == 1.0);
    // Constant columns map to zero by convention.
    for (std::size_t r = 0; r < 3; ++r) CHECK(normalized.rows[r][1] == 0.0);

    SUBCASE("idempotence") {
        const FeatureMatrix twice = minmax_normalize(normalized);
        for (std::size_t r = 0; r < 3; ++r) {
            CHECK(twice.rows[r] == normalized.rows[r]);
        }
    }
    SUBCASE("affine rescaling of a column changes nothing") {
        FeatureMatrix scaled = matrix;
        for (auto& row : scaled.rows) row[0] = row[0] * 37.5 - 12.0;
        const FeatureMatrix again = minmax_normalize(scaled);
        for (std::size_t r = 0; r < 3; ++r) {
            CHECK(again.rows[r][0] == doctest::Approx(normalized.rows[r][0]));
        }
    }
}

TEST_CASE("pca basics") {
    SUBCASE("rank-one data concentrates all variance in the first component") {
        const FeatureMatrix matrix = matrix_from({{1, 2}, {2, 4}, {3, 6}});
        const PcaResult result = pca(matrix);
        CHECK(result.explained_variance_ratio[0] == doctest::Approx(1.0));
        CHECK(result.explained_variance_ratio[1] == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("full reconstruction from all components") {
        Xoshiro256pp rng(81);
        std::vector<std::vector<double>> rows(20, std::vector<double>(5));
        for (auto& row : rows) {
            for (auto& v : row) v = rng.next_unit() * 3.0;
        }
        const FeatureMatrix matrix = matrix_from(rows);
        const PcaResult result = pca(matrix);

        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < 5; ++c) {
                double reconstructed = result.column_means[c];
                for (std::size_t comp = 0; comp < 5; ++comp) {
                    reconstructed += result.scores[r][comp] * result.components[comp][c];
                }
                REQUIRE(reconstructed == doctest::Approx(rows[r][c]).epsilon(1e-9));
            }
        }

        double ratio_sum = 0.0;
        for (const double ratio : result.explained_variance_ratio) ratio_sum += ratio;
        CHECK(ratio_sum == doctest::Approx(1.0));
        CHECK(std::is_sorted(result.explained_variance_ratio.rbegin(),
                             result.explained_variance_ratio.rend()));
    }
    SUBCASE("row permutation leaves the score multiset intact") {
        const FeatureMatrix matrix =
            matrix_from({{1, 0}, {0, 1}, {4, 2}, {2, 4}, {3, 3}});
        FeatureMatrix shuffled = matrix;
        std::rotate(shuffled.rows.begin(), shuffled.rows.begin() + 2, shuffled.rows.end());

        const PcaResult a = pca(matrix);
        const PcaResult b = pca(shuffled);
        auto sorted_scores = [](const PcaResult& r) {
            std::vector<double> flat;
            for (const auto& row : r.scores) {
                for (const double v : row) flat.push_back(std::round(std::abs(v) * 1e9));
            }
            std::sort(flat.begin(), flat.end());
            return flat;
        };
        CHECK(sorted_scores(a) == sorted_scores(b));
    }
    SUBCASE("fewer than two rows is an error") {
        CHECK_THROWS_AS(pca(matrix_from({{1, 2}})), DomainError);
    }
}

TEST_CASE("kmeans") {
    // Two well-separated clouds.
    std::vector<std::vector<double>> points;
    std::vector<std::uint32_t> truth;
    Xoshiro256pp rng(82);
    for (int i = 0; i < 20; ++i) {
        points.push_back({rng.next_unit() * 0.1, rng.next_unit() * 0.1});
        truth.push_back(0);
        points.push_back({10.0 + rng.next_unit() * 0.1, 10.0 + rng.next_unit() * 0.1});
        truth.push_back(1);
    }

    SUBCASE("separates obvious clusters perfectly") {
        const KmeansResult result = kmeans(points, 2, 5);
        CHECK(adjusted_rand_index(result.assignments, truth) == doctest::Approx(1.0));
    }
    SUBCASE("k=1 puts everything together and silhouette degenerates") {
        const KmeansResult result = kmeans(points, 1, 5);
        CHECK(*std::max_element(result.assignments.begin(), result.assignments.end()) == 0);
        const SilhouetteResult sil = silhouette(points, result.assignments);
        CHECK(sil.degenerate);
        CHECK(sil.value == 0.0);
    }
    SUBCASE("same seed, same assignments") {
        const KmeansResult a = kmeans(points, 2, 77);
        const KmeansResult b = kmeans(points, 2, 77);
        CHECK(a.assignments == b.assignments);
        CHECK(a.inertia == b.inertia);
    }
    SUBCASE("k larger than the point count is rejected") {
        CHECK_THROWS_AS(kmeans({{1.0}, {2.0}}, 3, 1), DomainError);
    }
}

TEST_CASE("adjusted rand index") {
    SUBCASE("identical partitions score one") {
        const std::vector<std::uint32_t> a{0, 0, 1, 1, 2};
        CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));
        CHECK(normalized_mutual_information(a, a) == doctest::Approx(1.0));
    }
    SUBCASE("singletons versus one block score zero") {
        const std::vector<std::uint32_t> singletons{0, 1, 2, 3};
        const std::vector<std::uint32_t> block{0, 0, 0, 0};
        CHECK(adjusted_rand_index(singletons, block) == doctest::Approx(0.0));
        CHECK(normalized_mutual_information(singletons, block) == doctest::Approx(0.0));
    }
    SUBCASE("symmetric and relabel-invariant") {
        Xoshiro256pp rng(83);
        for (int round = 0; round < 1000; ++round) {
            const std::size_t n = 3 + rng.next_below(20);
            std::vector<std::uint32_t> a(n), b(n);
            for (auto& v : a) v = static_cast<std::uint32_t>(rng.next_below(4));
            for (auto& v : b) v = static_cast<std::uint32_t>(rng.next_below(4));

            const double forward = adjusted_rand_index(a, b);
            CHECK(forward == doctest::Approx(adjusted_rand_index(b, a)));

            std::vector<std::uint32_t> relabeled(n);
            for (std::size_t i = 0; i < n; ++i) relabeled[i] = 3 - a[i];
            CHECK(adjusted_rand_index(relabeled, b) == doctest::Approx(forward));

            CHECK(forward >= -1.0);
            CHECK(forward <= 1.0);
            const double nmi = normalized_mutual_information(a, b);
            CHECK(nmi >= 0.0);
            CHECK(nmi <= 1.0);
        }
    }
    SUBCASE("mismatched sizes are rejected") {
        CHECK_THROWS_AS(adjusted_rand_index({0, 1}, {0}), DomainError);
        CHECK_THROWS_AS(normalized_mutual_information({0, 1}, {0}), DomainError);
    }
}

TEST_CASE("nmi normalization variants stay ordered") {
    const std::vector<std::uint32_t> a{0, 0, 1, 1, 2, 2};
    const std::vector<std::uint32_t> b{0, 0, 0, 1, 1, 1};
    const double vmin = normalized_mutual_information(a, b, NmiNormalization::Min);
    const double varith = normalized_mutual_information(a, b, NmiNormalization::Arithmetic);
    const double vgeo = normalized_mutual_information(a, b, NmiNormalization::Geometric);
    const double vmax = normalized_mutual_information(a, b, NmiNormalization::Max);
    CHECK(vmin >= vgeo);
    CHECK(vgeo >= varith - 1e-12);
    CHECK(varith >= vmax);
}

TEST_CASE("silhouette of two tight distant clusters approaches one") {
    std::vector<std::vector<double>> points;
    std::vector<std::uint32_t> assignments;
    for (int i = 0; i < 10; ++i) {
        points.push_back({0.001 * i});
        assignments.push_back(0);
        points.push_back({100.0 + 0.001 * i});
        assignments.push_back(1);
    }
    const SilhouetteResult result = silhouette(points, assignments);
    CHECK_FALSE(result.degenerate);
    CHECK(result.value > 0.99);
}

TEST_CASE("cluster_and_score aggregates repetitions deterministically") {
    std::vector<std::vector<double>> points;
    std::vector<std::uint32_t> truth;
    Xoshiro256pp rng(84);
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 15; ++i) {
            points.push_back({c * 8.0 + rng.next_unit(), c * 8.0 + rng.next_unit()});
            truth.push_back(static_cast<std::uint32_t>(c));
        }
    }
    const ClusteringReport report = cluster_and_score(points, truth, 3, 10, 99);
    CHECK(report.repetitions == 10);
    REQUIRE(report.per_repetition.size() == 10);
    CHECK(report.ari == doctest::Approx(1.0));
    CHECK(report.nmi == doctest::Approx(1.0));
    CHECK(report.silhouette > 0.8);

    const ClusteringReport again = cluster_and_score(points, truth, 3, 10, 99);
    CHECK(again.ari == report.ari);
    CHECK(again.assignments == report.assignments);
}

TEST_CASE("label encoding is order-stable") {
    const std::vector<std::uint32_t> encoded =
        encode_labels({"b", "a", "b", "c", "a"});
    CHECK(encoded == std::vector<std::uint32_t>{0, 1, 0, 2, 1});
}

TEST_SUITE_END();
