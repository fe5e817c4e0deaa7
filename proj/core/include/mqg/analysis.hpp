#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqg/error.hpp"

namespace mqg {

/// Instances-by-features table with ground-truth labels per row.
struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::vector<std::string> row_ids;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t col_count() const noexcept { return column_names.size(); }

    /// Projection onto the named columns, preserving row order and labels.
    FeatureMatrix select_columns(const std::vector<std::size_t>& indices) const;
};

/// Per-column (x - min) / (max - min); constant columns map to 0.
FeatureMatrix minmax_normalize(const FeatureMatrix& matrix);

struct PcaResult {
    std::vector<std::vector<double>> scores;     // n x p, all components
    std::vector<double> explained_variance_ratio; // descending, sums to 1
    std::vector<std::vector<double>> components;  // p x p, one eigenvector per row
    std::vector<double> column_means;
};

/// Principal components of the mean-centered matrix (no re-standardization),
/// via Jacobi eigendecomposition of the covariance. Eigenvector signs are
/// fixed by making each vector's largest-magnitude entry positive. Throws
/// DomainError with fewer than two rows.
PcaResult pca(const FeatureMatrix& matrix);

struct KmeansResult {
    std::vector<std::uint32_t> assignments;
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
    std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding driven by the given seed.
/// Convergence: assignments stable or 300 iterations. Empty clusters are
/// re-seeded with the point farthest from its centroid. Throws DomainError
/// when k is 0 or exceeds the number of points.
KmeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                    std::uint64_t seed, std::size_t max_iterations = 300);

/// Adjusted Rand Index (permutation-model expectation correction), in [-1, 1].
double adjusted_rand_index(const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b);

enum class NmiNormalization { Arithmetic, Min, Geometric, Max };

/// Mutual information normalized by the chosen mean of the entropies
/// (arithmetic by default), in [0, 1].
double normalized_mutual_information(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b,
                                     NmiNormalization normalization = NmiNormalization::Arithmetic);

struct SilhouetteResult {
    double value = 0.0;
    bool degenerate = false; // fewer than two clusters
};

/// Mean silhouette over all points, Euclidean distances; singleton-cluster
/// points contribute 0.
SilhouetteResult silhouette(const std::vector<std::vector<double>>& points,
                            const std::vector<std::uint32_t>& assignments);

struct RepetitionScores {
    double ari = 0.0;
    double nmi = 0.0;
    double silhouette = 0.0;
    bool silhouette_degenerate = false;
};

struct ClusteringReport {
    std::vector<std::uint32_t> assignments; // from the lowest-inertia repetition
    double ari = 0.0;                       // means over repetitions
    double nmi = 0.0;
    double silhouette = 0.0;
    std::size_t repetitions = 0;
    std::vector<RepetitionScores> per_repetition;
};

/// Runs `repetitions` independently seeded k-means rounds (seed of round r is
/// derive_seed(seed, r)) against the ground truth and averages the metrics.
ClusteringReport cluster_and_score(const std::vector<std::vector<double>>& points,
                                   const std::vector<std::uint32_t>& ground_truth,
                                   std::size_t k, std::size_t repetitions, std::uint64_t seed,
                                   NmiNormalization nmi_normalization = NmiNormalization::Arithmetic);

/// Maps label strings to dense ids in order of first appearance.
std::vector<std::uint32_t> encode_labels(const std::vector<std::string>& labels);

} // namespace mqg
