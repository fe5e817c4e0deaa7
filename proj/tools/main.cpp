// mqg: map multivariate time series to multilayer quantile graphs, extract
// topological features, cluster, and benchmark the mapping algorithms.
//
// Subcommands: generate, map, features, cluster, bench. Commands communicate
// through on-disk artifacts (dataset directory, network exports, feature
// CSV), so every stage can be re-run independently.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqg/experiment.hpp"
#include "mqg/multilayer_network.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string out;
    std::string config_file;
    std::size_t jobs = 1;
};

fs::path resolve_out(const CommonOptions& common, const std::string& command) {
    if (!common.out.empty()) return common.out;
    if (const char* root = std::getenv("MQG_OUT_ROOT")) {
        return fs::path(root) / command;
    }
    throw mqg::DomainError("--out is required (or set MQG_OUT_ROOT)");
}

/// Values from --config override the command-line flags.
json load_config_overrides(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw mqg::IoError("cannot open config file " + path);
    json config;
    in >> config;
    if (!config.is_object()) throw mqg::DomainError("config file must hold a JSON object");
    return config;
}

template <typename T>
void apply_override(const json& config, const char* key, T& value) {
    if (config.contains(key)) value = config.at(key).get<T>();
}

void write_effective_config(const json& config, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream out(dir / "config.json");
    out << config.dump(2) << '\n';
}

std::vector<mqg::MdgpKind> parse_models(const std::vector<std::string>& names) {
    if (names.empty()) {
        return {mqg::all_mdgp_kinds.begin(), mqg::all_mdgp_kinds.end()};
    }
    std::vector<mqg::MdgpKind> kinds;
    kinds.reserve(names.size());
    for (const auto& name : names) kinds.push_back(mqg::mdgp_kind_from_name(name));
    return kinds;
}

mqg::MappingConfig parse_mapping(const std::string& eta) {
    mqg::MappingConfig mapping;
    if (eta == "auto") {
        mapping.eta.reset();
        return mapping;
    }
    try {
        std::size_t consumed = 0;
        const unsigned long parsed = std::stoul(eta, &consumed);
        if (consumed != eta.size() || parsed == 0) throw std::invalid_argument(eta);
        mapping.eta = parsed;
    } catch (const std::exception&) {
        throw mqg::DomainError("--eta expects a positive integer or 'auto', got '" + eta + "'");
    }
    return mapping;
}

json mapping_to_json(const mqg::MappingConfig& mapping) {
    json j;
    j["eta"] = mapping.eta ? json(*mapping.eta) : json("auto");
    j["lag"] = mapping.lag;
    return j;
}

// -------------------------------------------------------------------------
// generate
// -------------------------------------------------------------------------

int cmd_generate(const CommonOptions& common, std::vector<std::string> models,
                 std::size_t n_per_model, std::size_t length, std::uint64_t seed,
                 std::int64_t burn_in_flag) {
    const json overrides = load_config_overrides(common.config_file);
    apply_override(overrides, "models", models);
    apply_override(overrides, "n", n_per_model);
    apply_override(overrides, "T", length);
    apply_override(overrides, "seed", seed);
    apply_override(overrides, "burn_in", burn_in_flag);

    std::optional<std::size_t> burn_in;
    if (burn_in_flag >= 0) burn_in = static_cast<std::size_t>(burn_in_flag);

    const fs::path out = resolve_out(common, "generate");
    const auto kinds = parse_models(models);
    const auto dataset = mqg::generate_dataset(kinds, n_per_model, length, seed, burn_in);
    mqg::write_dataset(dataset, out);

    json effective;
    effective["command"] = "generate";
    effective["models"] = json::array();
    for (const auto kind : kinds) effective["models"].push_back(std::string(mqg::mdgp_kind_name(kind)));
    effective["n"] = n_per_model;
    effective["T"] = length;
    effective["seed"] = seed;
    effective["burn_in"] = burn_in ? json(*burn_in) : json("model default");
    write_effective_config(effective, out);

    std::cout << "wrote " << dataset.size() << " instances to " << out << '\n';
    return 0;
}

// -------------------------------------------------------------------------
// map
// -------------------------------------------------------------------------

int cmd_map(const CommonOptions& common, const std::string& in, std::string mapper_name,
            std::string eta, const std::string& format_name) {
    const json overrides = load_config_overrides(common.config_file);
    apply_override(overrides, "mapper", mapper_name);
    apply_override(overrides, "eta", eta);

    const fs::path out = resolve_out(common, "map");
    const auto dataset = mqg::read_dataset(in);
    const auto mapper = mqg::mapper_kind_from_name(mapper_name);
    const mqg::MappingConfig mapping = parse_mapping(eta);

    mqg::ExportFormat format = mqg::ExportFormat::EdgeList;
    std::string extension = ".edges.tsv";
    if (format_name == "graphml") {
        format = mqg::ExportFormat::GraphMl;
        extension = ".graphml";
    } else if (format_name == "supra") {
        format = mqg::ExportFormat::SupraCsv;
        extension = ".supra.csv";
    } else if (format_name != "edgelist") {
        throw mqg::DomainError("unknown format: '" + format_name + "'");
    }

    fs::create_directories(out);
    std::vector<mqg::TimingRecord> timings(dataset.size());
    mqg::parallel_for(dataset.size(), common.jobs, [&](std::size_t i) {
        const auto& instance = dataset[i];
        const auto t0 = std::chrono::steady_clock::now();
        const mqg::MultilayerNetwork net =
            mapper == mqg::MapperKind::Mqg ? mqg::map_mqg(instance.series, mapping).net
                                           : mqg::map_mhvg_baseline(instance.series);
        const auto t1 = std::chrono::steady_clock::now();
        mqg::export_network(net, format, out / ("instance_" + instance.id + extension));
        timings[i] = {instance.id, std::string(mqg::mdgp_kind_name(instance.kind)),
                      std::string(mqg::mapper_kind_name(mapper)),
                      std::chrono::duration<double>(t1 - t0).count()};
    });
    mqg::write_timings_csv(timings, out / "timing.csv");
    fs::copy_file(fs::path(in) / "manifest.csv", out / "manifest.csv",
                  fs::copy_options::overwrite_existing);

    json effective;
    effective["command"] = "map";
    effective["in"] = in;
    effective["mapper"] = mapper_name;
    effective["mapping"] = mapping_to_json(mapping);
    effective["format"] = format_name;
    write_effective_config(effective, out);

    std::cout << "mapped " << dataset.size() << " instances to " << out << '\n';
    return 0;
}

// -------------------------------------------------------------------------
// features
// -------------------------------------------------------------------------

/// Feature extraction from already exported edge lists (the map command's
/// output directory): labels come from the copied manifest.
mqg::FeatureMatrix features_from_networks(const fs::path& dir, std::size_t jobs) {
    std::ifstream manifest(dir / "manifest.csv");
    if (!manifest) throw mqg::IoError("cannot open manifest in " + dir.string());
    struct Entry {
        std::string id;
        std::string model;
    };
    std::vector<Entry> entries;
    std::string line;
    std::getline(manifest, line); // header
    while (std::getline(manifest, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto first = line.find(',');
        const auto second = first == std::string::npos ? std::string::npos
                                                       : line.find(',', first + 1);
        if (second == std::string::npos) {
            throw mqg::IoError("malformed manifest row in " + dir.string() + ": '" + line + "'");
        }
        entries.push_back({line.substr(0, first), line.substr(first + 1, second - first - 1)});
    }

    mqg::FeatureMatrix matrix;
    matrix.column_names.assign(mqg::FeatureVector::names().begin(),
                               mqg::FeatureVector::names().end());
    matrix.row_ids.resize(entries.size());
    matrix.labels.resize(entries.size());
    matrix.rows.resize(entries.size());
    mqg::parallel_for(entries.size(), jobs, [&](std::size_t i) {
        const fs::path edges = dir / ("instance_" + entries[i].id + ".edges.tsv");
        if (!fs::exists(edges)) {
            throw mqg::IoError("expected network export " + edges.string() +
                               " (produced by the map command with the edgelist format)");
        }
        const mqg::MultilayerNetwork net = mqg::import_edge_list(edges);
        const mqg::FeatureVector fv = mqg::feature_vector(net);
        matrix.row_ids[i] = entries[i].id;
        matrix.labels[i] = entries[i].model;
        matrix.rows[i].assign(fv.values.begin(), fv.values.end());
    });
    return matrix;
}

bool is_networks_dir(const fs::path& dir) {
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().filename().string().ends_with(".edges.tsv")) return true;
    }
    return false;
}

int cmd_features(const CommonOptions& common, const std::string& in, std::string mapper_name,
                 std::string eta) {
    const json overrides = load_config_overrides(common.config_file);
    apply_override(overrides, "mapper", mapper_name);
    apply_override(overrides, "eta", eta);

    const fs::path out = resolve_out(common, "features");
    const mqg::MappingConfig mapping = parse_mapping(eta);

    // Either chain from a raw dataset or consume the map command's exports.
    mqg::FeatureMatrix matrix;
    if (is_networks_dir(in)) {
        matrix = features_from_networks(in, common.jobs);
    } else {
        const auto dataset = mqg::read_dataset(in);
        const auto mapper = mqg::mapper_kind_from_name(mapper_name);
        matrix = mqg::extract_feature_matrix(dataset, mapper, mapping, common.jobs);
    }
    fs::create_directories(out);
    mqg::write_feature_matrix_csv(matrix, out / "features.csv");

    json effective;
    effective["command"] = "features";
    effective["in"] = in;
    effective["mapper"] = mapper_name;
    effective["mapping"] = mapping_to_json(mapping);
    write_effective_config(effective, out);

    std::cout << "wrote " << matrix.row_count() << " feature rows to " << (out / "features.csv")
              << '\n';
    return 0;
}

// -------------------------------------------------------------------------
// cluster
// -------------------------------------------------------------------------

json report_to_json(const mqg::ClusteringReport& report) {
    json j;
    j["repetitions"] = report.repetitions;
    j["mean"] = {{"ari", report.ari}, {"nmi", report.nmi}, {"silhouette", report.silhouette}};
    j["per_repetition"] = json::array();
    for (const auto& rep : report.per_repetition) {
        j["per_repetition"].push_back({{"ari", rep.ari},
                                       {"nmi", rep.nmi},
                                       {"silhouette", rep.silhouette},
                                       {"silhouette_degenerate", rep.silhouette_degenerate}});
    }
    j["assignments"] = report.assignments;
    return j;
}

mqg::NmiNormalization parse_nmi_norm(const std::string& name) {
    if (name == "arithmetic") return mqg::NmiNormalization::Arithmetic;
    if (name == "min") return mqg::NmiNormalization::Min;
    if (name == "geometric") return mqg::NmiNormalization::Geometric;
    if (name == "max") return mqg::NmiNormalization::Max;
    throw mqg::DomainError("unknown NMI normalization: '" + name + "'");
}

/// Dataset recipe recorded by the generate command, for --regen-reps.
mqg::DatasetSpec dataset_spec_from_config(const fs::path& dataset_dir) {
    const fs::path config_path = dataset_dir / "config.json";
    std::ifstream in(config_path);
    if (!in) {
        throw mqg::IoError("cannot open " + config_path.string() +
                           " (--regen-reps needs the generation recipe written by generate)");
    }
    json config;
    in >> config;
    mqg::DatasetSpec spec;
    for (const auto& name : config.at("models")) {
        spec.kinds.push_back(mqg::mdgp_kind_from_name(name.get<std::string>()));
    }
    spec.n_per_model = config.at("n").get<std::size_t>();
    spec.length = config.at("T").get<std::size_t>();
    spec.seed = config.at("seed").get<std::uint64_t>();
    return spec;
}

int cmd_cluster(const CommonOptions& common, const std::string& in, std::string mapper_name,
                std::string eta, std::string subset_name, std::size_t k, std::size_t reps,
                std::uint64_t seed, std::string nmi_norm, bool regen_reps) {
    const json overrides = load_config_overrides(common.config_file);
    apply_override(overrides, "mapper", mapper_name);
    apply_override(overrides, "eta", eta);
    apply_override(overrides, "subset", subset_name);
    apply_override(overrides, "k", k);
    apply_override(overrides, "reps", reps);
    apply_override(overrides, "seed", seed);
    apply_override(overrides, "nmi_norm", nmi_norm);
    apply_override(overrides, "regen_reps", regen_reps);

    const fs::path out = resolve_out(common, "cluster");

    mqg::ExperimentConfig config;
    config.mapper = mqg::mapper_kind_from_name(mapper_name);
    config.subset = mqg::feature_subset_from_name(subset_name);
    config.k = k;
    config.repetitions = reps;
    config.seed = seed;
    config.jobs = common.jobs;
    config.nmi_normalization = parse_nmi_norm(nmi_norm);
    config.mapping = parse_mapping(eta);

    mqg::ExperimentResult result;
    if (regen_reps) {
        // Each repetition redraws the dataset named by the input directory's
        // generation recipe.
        result = mqg::run_experiment_regenerating(dataset_spec_from_config(in), config);
    } else if (fs::is_directory(in)) {
        // Chain from a raw dataset directory.
        const auto dataset = mqg::read_dataset(in);
        result = mqg::run_experiment(
            mqg::extract_feature_matrix(dataset, config.mapper, config.mapping, common.jobs),
            config);
    } else {
        result = mqg::run_experiment(mqg::read_feature_matrix_csv(in), config);
    }

    fs::create_directories(out);
    {
        std::ofstream summary(out / "summary.csv");
        summary << "feature_set,ari,nmi,as\n";
        summary << subset_name << ',' << result.report.ari << ',' << result.report.nmi << ','
                << result.report.silhouette << '\n';
    }
    {
        json report = report_to_json(result.report);
        report["config"] = {{"mapper", mapper_name}, {"subset", subset_name},
                            {"k", k},                {"reps", reps},
                            {"seed", seed},          {"in", in},
                            {"nmi_norm", nmi_norm},  {"regen_reps", regen_reps},
                            {"mapping", mapping_to_json(config.mapping)}};
        report["explained_variance_ratio"] = result.pca.explained_variance_ratio;
        std::ofstream report_out(out / "report.json");
        report_out << report.dump(2) << '\n';
    }
    mqg::write_pc_coordinates_csv(result.features, result.pca, out / "pc_coordinates.csv");

    json effective;
    effective["command"] = "cluster";
    effective["in"] = in;
    effective["mapper"] = mapper_name;
    effective["subset"] = subset_name;
    effective["k"] = k;
    effective["reps"] = reps;
    effective["seed"] = seed;
    effective["nmi_norm"] = nmi_norm;
    effective["regen_reps"] = regen_reps;
    effective["mapping"] = mapping_to_json(config.mapping);
    write_effective_config(effective, out);

    std::cout << "subset=" << subset_name << " ari=" << result.report.ari
              << " nmi=" << result.report.nmi << " as=" << result.report.silhouette << '\n';
    return 0;
}

// -------------------------------------------------------------------------
// bench
// -------------------------------------------------------------------------

int cmd_bench(const CommonOptions& common, const std::string& in, std::string eta) {
    const json overrides = load_config_overrides(common.config_file);
    apply_override(overrides, "eta", eta);

    const fs::path out = resolve_out(common, "bench");
    const auto dataset = mqg::read_dataset(in);
    const mqg::MappingConfig mapping = parse_mapping(eta);

    // Sequential on purpose: wall-clock records should not fight for cores.
    const auto records = mqg::time_mappings(dataset, mapping);
    fs::create_directories(out);
    mqg::write_timings_csv(records, out / "timing.csv");
    mqg::write_bench_summary_csv(records, out / "bench.csv");

    json effective;
    effective["command"] = "bench";
    effective["in"] = in;
    effective["mapping"] = mapping_to_json(mapping);
    write_effective_config(effective, out);

    std::cout << "timed " << dataset.size() << " instances; summary in " << (out / "bench.csv")
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilayer quantile graphs for multivariate time series"};
    app.require_subcommand(1);

    CommonOptions common;

    std::vector<std::string> models;
    std::size_t n_per_model = 100;
    std::size_t length = 10000;
    std::uint64_t seed = 1;
    std::string in;
    std::string mapper_name = "mqg";
    std::string eta = "50";
    std::string format_name = "edgelist";
    std::string subset_name = "full";
    std::size_t k = 6;
    std::size_t reps = 10;
    std::string nmi_norm = "arithmetic";
    bool regen_reps = false;
    std::int64_t burn_in_flag = -1;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out, "Output directory");
        cmd->add_option("--config", common.config_file,
                        "JSON config file; its values override flags");
        cmd->add_option("--jobs", common.jobs, "Worker threads for per-instance work");
    };

    auto* generate = app.add_subcommand("generate", "Generate the synthetic dataset");
    generate->add_option("--models", models, "Model subset (default: all six)");
    generate->add_option("--n", n_per_model, "Instances per model");
    generate->add_option("--T", length, "Series length");
    generate->add_option("--seed", seed, "Base seed");
    generate->add_option("--burn-in", burn_in_flag,
                         "Discarded warm-up samples (default: 500 for VAR/VGARCH, 0 otherwise)");
    add_common(generate);

    auto* map_cmd = app.add_subcommand("map", "Map a dataset to multilayer networks");
    map_cmd->add_option("--in", in, "Dataset directory")->required();
    map_cmd->add_option("--mapper", mapper_name, "mqg | mhvg");
    map_cmd->add_option("--eta", eta, "Quantile count or 'auto'");
    map_cmd->add_option("--format", format_name, "edgelist | graphml | supra");
    add_common(map_cmd);

    auto* features = app.add_subcommand("features", "Extract feature vectors from a dataset");
    features->add_option("--in", in, "Dataset directory")->required();
    features->add_option("--mapper", mapper_name, "mqg | mhvg");
    features->add_option("--eta", eta, "Quantile count or 'auto'");
    add_common(features);

    auto* cluster = app.add_subcommand("cluster", "Cluster feature vectors and score them");
    cluster->add_option("--in", in, "features.csv or a dataset directory")->required();
    cluster->add_option("--mapper", mapper_name, "mqg | mhvg (dataset input only)");
    cluster->add_option("--eta", eta, "Quantile count or 'auto' (dataset input only)");
    cluster->add_option("--subset", subset_name, "intra | inter | all | relational | full");
    cluster->add_option("--k", k, "Cluster count");
    cluster->add_option("--reps", reps, "k-means repetitions");
    cluster->add_option("--seed", seed, "Clustering seed");
    cluster->add_option("--nmi-norm", nmi_norm, "arithmetic | min | geometric | max");
    cluster->add_flag("--regen-reps", regen_reps,
                      "Redraw the dataset each repetition instead of only restarting k-means");
    add_common(cluster);

    auto* bench = app.add_subcommand("bench", "Time the mapping algorithms on a dataset");
    bench->add_option("--in", in, "Dataset directory")->required();
    bench->add_option("--eta", eta, "Quantile count or 'auto'");
    add_common(bench);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(common, models, n_per_model, length, seed, burn_in_flag);
        }
        if (map_cmd->parsed()) return cmd_map(common, in, mapper_name, eta, format_name);
        if (features->parsed()) return cmd_features(common, in, mapper_name, eta);
        if (cluster->parsed()) {
            return cmd_cluster(common, in, mapper_name, eta, subset_name, k, reps, seed,
                               nmi_norm, regen_reps);
        }
        if (bench->parsed()) return cmd_bench(common, in, eta);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
