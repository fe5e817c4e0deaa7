#include "mqg/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "mqg/rng.hpp"

namespace mqg {

std::string_view mapper_kind_name(MapperKind kind) {
    switch (kind) {
        case MapperKind::Mqg: return "mqg";
        case MapperKind::MhvgBaseline: return "mhvg";
    }
    throw DomainError("unknown mapper kind");
}

MapperKind mapper_kind_from_name(std::string_view name) {
    if (name == "mqg") return MapperKind::Mqg;
    if (name == "mhvg") return MapperKind::MhvgBaseline;
    throw DomainError("unknown mapper: '" + std::string(name) + "' (expected mqg or mhvg)");
}

std::string_view feature_subset_name(FeatureSubset subset) {
    switch (subset) {
        case FeatureSubset::Intra: return "intra";
        case FeatureSubset::Inter: return "inter";
        case FeatureSubset::All: return "all";
        case FeatureSubset::Relational: return "relational";
        case FeatureSubset::Full: return "full";
    }
    throw DomainError("unknown feature subset");
}

FeatureSubset feature_subset_from_name(std::string_view name) {
    for (const FeatureSubset subset :
         {FeatureSubset::Intra, FeatureSubset::Inter, FeatureSubset::All,
          FeatureSubset::Relational, FeatureSubset::Full}) {
        if (feature_subset_name(subset) == name) return subset;
    }
    throw DomainError("unknown feature subset: '" + std::string(name) + "'");
}

std::vector<std::size_t> feature_subset_columns(FeatureSubset subset) {
    const auto range = [](std::size_t first, std::size_t last) {
        std::vector<std::size_t> out;
        for (std::size_t i = first; i < last; ++i) out.push_back(i);
        return out;
    };
    switch (subset) {
        case FeatureSubset::Intra: return range(0, 8);
        case FeatureSubset::Inter: return range(8, 12);
        case FeatureSubset::All: return range(12, 16);
        case FeatureSubset::Relational: return range(16, 21);
        case FeatureSubset::Full: return range(0, 21);
    }
    throw DomainError("unknown feature subset");
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min(jobs, count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
                next.store(count); // stop handing out work
            }
        });
    }
    for (auto& worker : pool) worker.join();
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
}

namespace {

MultilayerNetwork map_instance(const LabeledSeries& instance, MapperKind mapper,
                               const MappingConfig& mapping) {
    switch (mapper) {
        case MapperKind::Mqg: return map_mqg(instance.series, mapping).net;
        case MapperKind::MhvgBaseline: return map_mhvg_baseline(instance.series);
    }
    throw DomainError("unknown mapper kind");
}

} // namespace

FeatureMatrix extract_feature_matrix(const std::vector<LabeledSeries>& dataset,
                                     MapperKind mapper, const MappingConfig& mapping,
                                     std::size_t jobs) {
    FeatureMatrix matrix;
    matrix.column_names.assign(FeatureVector::names().begin(), FeatureVector::names().end());
    matrix.row_ids.resize(dataset.size());
    matrix.labels.resize(dataset.size());
    matrix.rows.resize(dataset.size());

    parallel_for(dataset.size(), jobs, [&](std::size_t i) {
        const MultilayerNetwork net = map_instance(dataset[i], mapper, mapping);
        const FeatureVector fv = feature_vector(net);
        matrix.row_ids[i] = dataset[i].id;
        matrix.labels[i] = std::string(mdgp_kind_name(dataset[i].kind));
        matrix.rows[i].assign(fv.values.begin(), fv.values.end());
    });
    return matrix;
}

ExperimentResult run_experiment(const std::vector<LabeledSeries>& dataset,
                                const ExperimentConfig& config) {
    return run_experiment(
        extract_feature_matrix(dataset, config.mapper, config.mapping, config.jobs), config);
}

ExperimentResult run_experiment(FeatureMatrix features, const ExperimentConfig& config) {
    ExperimentResult result;
    const FeatureMatrix selected =
        features.select_columns(feature_subset_columns(config.subset));
    const FeatureMatrix normalized = minmax_normalize(selected);
    result.pca = pca(normalized);
    result.report = cluster_and_score(result.pca.scores, encode_labels(features.labels),
                                      config.k, config.repetitions, config.seed,
                                      config.nmi_normalization);
    result.features = std::move(features);
    return result;
}

ExperimentResult run_experiment_regenerating(const DatasetSpec& spec,
                                             const ExperimentConfig& config) {
    if (config.repetitions == 0) throw DomainError("need at least one repetition");

    ExperimentResult result;
    ClusteringReport& report = result.report;
    report.repetitions = config.repetitions;

    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        const auto dataset = generate_dataset(spec.kinds, spec.n_per_model, spec.length,
                                              derive_seed(spec.seed, rep));
        ExperimentConfig round = config;
        round.repetitions = 1;
        round.seed = derive_seed(config.seed, rep);
        ExperimentResult round_result = run_experiment(dataset, round);

        const RepetitionScores scores = round_result.report.per_repetition.front();
        report.per_repetition.push_back(scores);
        report.ari += scores.ari;
        report.nmi += scores.nmi;
        report.silhouette += scores.silhouette;

        // Inertia is not comparable across datasets; keep the last round's
        // assignments and artifacts.
        report.assignments = std::move(round_result.report.assignments);
        result.features = std::move(round_result.features);
        result.pca = std::move(round_result.pca);
    }
    const auto reps = static_cast<double>(config.repetitions);
    report.ari /= reps;
    report.nmi /= reps;
    report.silhouette /= reps;
    return result;
}

std::vector<TimingRecord> time_mappings(const std::vector<LabeledSeries>& dataset,
                                        const MappingConfig& mapping) {
    using Clock = std::chrono::steady_clock;
    std::vector<TimingRecord> records;
    records.reserve(dataset.size() * 2);
    for (const auto& instance : dataset) {
        const auto t0 = Clock::now();
        const MqgResult mqg = map_mqg(instance.series, mapping);
        const auto t1 = Clock::now();
        const MultilayerNetwork baseline = map_mhvg_baseline(instance.series);
        const auto t2 = Clock::now();

        const std::string model{mdgp_kind_name(instance.kind)};
        records.push_back({instance.id, model, "mqg",
                           std::chrono::duration<double>(t1 - t0).count()});
        records.push_back({instance.id, model, "mhvg",
                           std::chrono::duration<double>(t2 - t1).count()});
        // Keep the optimizer honest about the mapped results.
        if (mqg.net.layer_count() + baseline.layer_count() == 0) {
            throw DomainError("mapping produced no layers");
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// On-disk artifacts
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace

void write_dataset(const std::vector<LabeledSeries>& dataset,
                   const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    std::ofstream manifest(directory / "manifest.csv");
    if (!manifest) throw IoError("cannot write manifest in " + directory.string());
    manifest << "instance_id,model,seed,T\n";
    for (const auto& instance : dataset) {
        save_csv(instance.series, directory / ("instance_" + instance.id + ".csv"));
        manifest << instance.id << ',' << mdgp_kind_name(instance.kind) << ',' << instance.seed
                 << ',' << instance.series.length() << '\n';
    }
    if (!manifest) throw IoError("write failed for manifest in " + directory.string());
}

std::vector<LabeledSeries> read_dataset(const std::filesystem::path& directory) {
    const auto manifest_path = directory / "manifest.csv";
    std::ifstream manifest(manifest_path);
    if (!manifest) throw IoError("cannot open " + manifest_path.string() + " (expected a dataset manifest)");

    std::vector<LabeledSeries> dataset;
    std::string line;
    std::getline(manifest, line); // header
    while (std::getline(manifest, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw IoError("malformed manifest row: '" + line + "'");
        }
        LabeledSeries instance;
        instance.id = fields[0];
        instance.kind = mdgp_kind_from_name(fields[1]);
        instance.seed = std::stoull(fields[2]);
        instance.series = load_csv(directory / ("instance_" + instance.id + ".csv"));
        dataset.push_back(std::move(instance));
    }
    return dataset;
}

void write_feature_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "instance_id,model";
    for (const auto& name : matrix.column_names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < matrix.row_count(); ++r) {
        out << matrix.row_ids[r] << ',' << matrix.labels[r];
        for (const double value : matrix.rows[r]) out << ',' << format_double(value);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

FeatureMatrix read_feature_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");

    FeatureMatrix matrix;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "instance_id" || header[1] != "model") {
        throw IoError(path.string() + " is not a feature matrix (header mismatch)");
    }
    matrix.column_names.assign(header.begin() + 2, header.end());

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw IoError("malformed feature row: '" + line + "'");
        }
        matrix.row_ids.push_back(fields[0]);
        matrix.labels.push_back(fields[1]);
        std::vector<double> row;
        row.reserve(matrix.column_names.size());
        for (std::size_t c = 2; c < fields.size(); ++c) row.push_back(std::stod(fields[c]));
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

void write_timings_csv(const std::vector<TimingRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "instance_id,model,algorithm,seconds\n";
    for (const auto& record : records) {
        out << record.instance_id << ',' << record.model << ',' << record.algorithm << ','
            << format_double(record.seconds) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void write_bench_summary_csv(const std::vector<TimingRecord>& records,
                             const std::filesystem::path& path) {
    struct Aggregate {
        std::size_t instances = 0;
        double total = 0.0;
    };
    std::map<std::pair<std::string, std::string>, Aggregate> by_model;
    for (const auto& record : records) {
        auto& agg = by_model[{record.model, record.algorithm}];
        ++agg.instances;
        agg.total += record.seconds;
    }

    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "model,algorithm,instances,total_seconds,mean_seconds\n";
    for (const auto& [key, agg] : by_model) {
        out << key.first << ',' << key.second << ',' << agg.instances << ','
            << format_double(agg.total) << ','
            << format_double(agg.total / static_cast<double>(agg.instances)) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void write_pc_coordinates_csv(const FeatureMatrix& matrix, const PcaResult& pca,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::size_t p = pca.scores.empty() ? 0 : pca.scores.front().size();
    out << "instance_id,model";
    for (std::size_t c = 0; c < p; ++c) out << ",pc" << (c + 1);
    out << '\n';
    for (std::size_t r = 0; r < pca.scores.size(); ++r) {
        out << matrix.row_ids[r] << ',' << matrix.labels[r];
        for (const double value : pca.scores[r]) out << ',' << format_double(value);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace mqg
