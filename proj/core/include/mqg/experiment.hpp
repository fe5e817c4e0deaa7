#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mqg/analysis.hpp"
#include "mqg/features.hpp"
#include "mqg/generators.hpp"
#include "mqg/mappers.hpp"

namespace mqg {

enum class MapperKind { Mqg, MhvgBaseline };

std::string_view mapper_kind_name(MapperKind kind);
MapperKind mapper_kind_from_name(std::string_view name);

/// The named column groups of the 21-entry feature vector.
enum class FeatureSubset { Intra, Inter, All, Relational, Full };

std::string_view feature_subset_name(FeatureSubset subset);
FeatureSubset feature_subset_from_name(std::string_view name);
std::vector<std::size_t> feature_subset_columns(FeatureSubset subset);

/// Runs fn(i) for i in [0, count) on up to `jobs` worker threads. Results
/// must be written to per-index slots; the schedule is work-stealing but the
/// outputs are position-deterministic.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

/// Maps every instance and extracts its 21 features; one row per instance,
/// in dataset order.
FeatureMatrix extract_feature_matrix(const std::vector<LabeledSeries>& dataset,
                                     MapperKind mapper, const MappingConfig& mapping,
                                     std::size_t jobs = 1);

struct ExperimentConfig {
    MapperKind mapper = MapperKind::Mqg;
    FeatureSubset subset = FeatureSubset::Full;
    std::size_t k = 6;
    std::size_t repetitions = 10;
    std::uint64_t seed = 1;
    MappingConfig mapping;
    std::size_t jobs = 1;
    NmiNormalization nmi_normalization = NmiNormalization::Arithmetic;
};

struct ExperimentResult {
    FeatureMatrix features;   // full 21 columns
    PcaResult pca;            // of the normalized selected subset
    ClusteringReport report;
};

/// The end-to-end evaluation: map -> features -> subset -> min-max -> PCA ->
/// repeated k-means on all principal components -> ARI/NMI/silhouette
/// against the dataset labels.
ExperimentResult run_experiment(const std::vector<LabeledSeries>& dataset,
                                const ExperimentConfig& config);

/// Same pipeline starting from an already extracted 21-column matrix.
ExperimentResult run_experiment(FeatureMatrix features, const ExperimentConfig& config);

/// Generation recipe for the regenerating repetition variant.
struct DatasetSpec {
    std::vector<MdgpKind> kinds;
    std::size_t n_per_model = 100;
    std::size_t length = 10000;
    std::uint64_t seed = 1;
};

/// Repetition variant that redraws the dataset each round instead of only
/// restarting k-means: round r regenerates with derive_seed(spec.seed, r),
/// extracts features, and runs a single k-means. Features and PCA in the
/// result come from the last round.
ExperimentResult run_experiment_regenerating(const DatasetSpec& spec,
                                             const ExperimentConfig& config);

struct TimingRecord {
    std::string instance_id;
    std::string model;
    std::string algorithm; // "mqg" | "mhvg"
    double seconds = 0.0;
};

/// Times the bare mapping call per instance and algorithm on a monotonic
/// clock (no I/O, no feature extraction). Runs sequentially so the records
/// are not distorted by contention.
std::vector<TimingRecord> time_mappings(const std::vector<LabeledSeries>& dataset,
                                        const MappingConfig& mapping);

// ---------------------------------------------------------------------------
// On-disk artifacts shared by the CLI and the tests
// ---------------------------------------------------------------------------

/// Writes instance_<id>.csv per series plus manifest.csv
/// (instance_id,model,seed,T).
void write_dataset(const std::vector<LabeledSeries>& dataset,
                   const std::filesystem::path& directory);

/// Reads a directory produced by write_dataset.
std::vector<LabeledSeries> read_dataset(const std::filesystem::path& directory);

/// Feature table as CSV: instance_id,model,<feature columns>.
void write_feature_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);
FeatureMatrix read_feature_matrix_csv(const std::filesystem::path& path);

/// Timing records as CSV: instance_id,model,algorithm,seconds.
void write_timings_csv(const std::vector<TimingRecord>& records,
                       const std::filesystem::path& path);

/// Per-(model, algorithm) aggregation of timing records:
/// model,algorithm,instances,total_seconds,mean_seconds.
void write_bench_summary_csv(const std::vector<TimingRecord>& records,
                             const std::filesystem::path& path);

/// PC coordinates per instance: instance_id,model,pc1..pcN.
void write_pc_coordinates_csv(const FeatureMatrix& matrix, const PcaResult& pca,
                              const std::filesystem::path& path);

} // namespace mqg
