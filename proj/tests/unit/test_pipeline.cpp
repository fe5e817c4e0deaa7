#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>

#include "mqg/experiment.hpp"

using namespace mqg;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("pipeline");

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("feature subset columns cover the layout") {
    CHECK(feature_subset_columns(FeatureSubset::Intra).size() == 8);
    CHECK(feature_subset_columns(FeatureSubset::Inter).size() == 4);
    CHECK(feature_subset_columns(FeatureSubset::All).size() == 4);
    CHECK(feature_subset_columns(FeatureSubset::Relational).size() == 5);
    CHECK(feature_subset_columns(FeatureSubset::Full).size() == 21);

    std::vector<std::size_t> seen;
    for (const FeatureSubset subset : {FeatureSubset::Intra, FeatureSubset::Inter,
                                       FeatureSubset::All, FeatureSubset::Relational}) {
        for (const std::size_t c : feature_subset_columns(subset)) seen.push_back(c);
    }
    std::sort(seen.begin(), seen.end());
    CHECK(seen == feature_subset_columns(FeatureSubset::Full));
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);

    SUBCASE("worker exceptions propagate") {
        CHECK_THROWS_AS(parallel_for(8, 3,
                                     [&](std::size_t i) {
                                         if (i == 5) throw DomainError("boom");
                                     }),
                        DomainError);
    }
}

TEST_CASE("dataset write/read round trip") {
    const auto dataset = generate_dataset(1, 64, 3);
    const fs::path dir = fresh_dir("mqg_pipeline_dataset");
    write_dataset(dataset, dir);
    const auto loaded = read_dataset(dir);
    REQUIRE(loaded.size() == dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        CHECK(loaded[i].id == dataset[i].id);
        CHECK(loaded[i].kind == dataset[i].kind);
        CHECK(loaded[i].seed == dataset[i].seed);
        CHECK(loaded[i].series == dataset[i].series);
    }
}

TEST_CASE("feature extraction is schedule-independent") {
    const auto dataset = generate_dataset(2, 128, 17);
    MappingConfig mapping;
    mapping.eta = 8;
    const FeatureMatrix serial = extract_feature_matrix(dataset, MapperKind::Mqg, mapping, 1);
    const FeatureMatrix parallel = extract_feature_matrix(dataset, MapperKind::Mqg, mapping, 4);
    REQUIRE(serial.row_count() == parallel.row_count());
    for (std::size_t r = 0; r < serial.row_count(); ++r) {
        CHECK(serial.rows[r] == parallel.rows[r]);
        CHECK(serial.row_ids[r] == parallel.row_ids[r]);
    }
    CHECK(serial.column_names.size() == 21);
}

TEST_CASE("feature matrix csv round trip") {
    const auto dataset = generate_dataset(1, 100, 23);
    MappingConfig mapping;
    mapping.eta = 10;
    const FeatureMatrix matrix = extract_feature_matrix(dataset, MapperKind::Mqg, mapping);

    const fs::path dir = fresh_dir("mqg_pipeline_features");
    write_feature_matrix_csv(matrix, dir / "features.csv");
    const FeatureMatrix loaded = read_feature_matrix_csv(dir / "features.csv");
    CHECK(loaded.column_names == matrix.column_names);
    CHECK(loaded.labels == matrix.labels);
    REQUIRE(loaded.row_count() == matrix.row_count());
    for (std::size_t r = 0; r < matrix.row_count(); ++r) {
        for (std::size_t c = 0; c < matrix.col_count(); ++c) {
            CHECK(loaded.rows[r][c] == matrix.rows[r][c]); // %.17g is exact for doubles
        }
    }
}

TEST_CASE("run_experiment on a small dataset produces sane scores") {
    const auto dataset = generate_dataset(4, 600, 29);
    ExperimentConfig config;
    config.k = 6;
    config.repetitions = 3;
    config.seed = 11;
    config.mapping.eta = 12;
    config.jobs = 2;

    const ExperimentResult result = run_experiment(dataset, config);
    CHECK(result.features.row_count() == 24);
    CHECK(result.report.per_repetition.size() == 3);
    CHECK(result.report.ari >= -1.0);
    CHECK(result.report.ari <= 1.0);
    CHECK(result.report.nmi >= 0.0);
    CHECK(result.report.nmi <= 1.0);
    double ratio_sum = 0.0;
    for (const double r : result.pca.explained_variance_ratio) ratio_sum += r;
    CHECK(ratio_sum == doctest::Approx(1.0));

    SUBCASE("experiment is deterministic") {
        const ExperimentResult again = run_experiment(dataset, config);
        CHECK(again.report.ari == result.report.ari);
        CHECK(again.report.assignments == result.report.assignments);
    }
    SUBCASE("subset pipeline consumes the same feature matrix") {
        ExperimentConfig subset_config = config;
        subset_config.subset = FeatureSubset::Inter;
        const ExperimentResult subset_result =
            run_experiment(result.features, subset_config);
        CHECK(subset_result.pca.scores.front().size() == 4);
    }
}

TEST_CASE("timing records cover both algorithms per instance") {
    const auto dataset = generate_dataset(1, 256, 31);
    MappingConfig mapping;
    mapping.eta = 10;
    const auto records = time_mappings(dataset, mapping);
    REQUIRE(records.size() == dataset.size() * 2);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        CHECK(records[2 * i].algorithm == "mqg");
        CHECK(records[2 * i + 1].algorithm == "mhvg");
        CHECK(records[2 * i].instance_id == records[2 * i + 1].instance_id);
        CHECK(records[2 * i].seconds >= 0.0);
    }

    const fs::path dir = fresh_dir("mqg_pipeline_bench");
    write_timings_csv(records, dir / "timing.csv");
    write_bench_summary_csv(records, dir / "bench.csv");
    std::ifstream bench(dir / "bench.csv");
    std::string header;
    std::getline(bench, header);
    CHECK(header == "model,algorithm,instances,total_seconds,mean_seconds");
    std::size_t rows = 0;
    for (std::string line; std::getline(bench, line);) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 12); // six models x two algorithms
}

TEST_SUITE_END();
