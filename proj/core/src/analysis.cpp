#include "mqg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "mqg/rng.hpp"

namespace mqg {

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::size_t>& indices) const {
    FeatureMatrix out;
    out.row_ids = row_ids;
    out.labels = labels;
    out.column_names.reserve(indices.size());
    for (const std::size_t c : indices) out.column_names.push_back(column_names.at(c));
    out.rows.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> selected;
        selected.reserve(indices.size());
        for (const std::size_t c : indices) selected.push_back(row.at(c));
        out.rows.push_back(std::move(selected));
    }
    return out;
}

FeatureMatrix minmax_normalize(const FeatureMatrix& matrix) {
    FeatureMatrix out = matrix;
    const std::size_t p = matrix.col_count();
    if (matrix.row_count() == 0) return out;

    for (std::size_t c = 0; c < p; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& row : matrix.rows) {
            lo = std::min(lo, row[c]);
            hi = std::max(hi, row[c]);
        }
        const double span = hi - lo;
        for (std::size_t r = 0; r < matrix.row_count(); ++r) {
            out.rows[r][c] = span > 0.0 ? (matrix.rows[r][c] - lo) / span : 0.0;
        }
    }
    return out;
}

namespace {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major).
/// Returns eigenvalues and matching eigenvectors (as rows), unsorted.
void jacobi_eigen(std::vector<double> a, std::size_t p, std::vector<double>& eigenvalues,
                  std::vector<double>& eigenvectors) {
    eigenvectors.assign(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) eigenvectors[i * p + i] = 1.0;

    for (std::size_t sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) off += a[i * p + j] * a[i * p + j];
        }
        if (off < 1e-24) break;

        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                const double apq = a[i * p + j];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[i * p + i];
                const double aqq = a[j * p + j];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < p; ++k) {
                    const double aik = a[i * p + k];
                    const double ajk = a[j * p + k];
                    a[i * p + k] = c * aik - s * ajk;
                    a[j * p + k] = s * aik + c * ajk;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double aki = a[k * p + i];
                    const double akj = a[k * p + j];
                    a[k * p + i] = c * aki - s * akj;
                    a[k * p + j] = s * aki + c * akj;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double vik = eigenvectors[i * p + k];
                    const double vjk = eigenvectors[j * p + k];
                    eigenvectors[i * p + k] = c * vik - s * vjk;
                    eigenvectors[j * p + k] = s * vik + c * vjk;
                }
            }
        }
    }

    eigenvalues.resize(p);
    for (std::size_t i = 0; i < p; ++i) eigenvalues[i] = a[i * p + i];
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

} // namespace

PcaResult pca(const FeatureMatrix& matrix) {
    const std::size_t n = matrix.row_count();
    const std::size_t p = matrix.col_count();
    if (n < 2) throw DomainError("PCA needs at least two rows");

    PcaResult result;
    result.column_means.assign(p, 0.0);
    for (const auto& row : matrix.rows) {
        for (std::size_t c = 0; c < p; ++c) result.column_means[c] += row[c];
    }
    for (auto& mean : result.column_means) mean /= static_cast<double>(n);

    std::vector<std::vector<double>> centered(n, std::vector<double>(p));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            centered[r][c] = matrix.rows[r][c] - result.column_means[c];
        }
    }

    std::vector<double> covariance(p * p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            const double xi = centered[r][i];
            for (std::size_t j = i; j < p; ++j) covariance[i * p + j] += xi * centered[r][j];
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            covariance[i * p + j] /= static_cast<double>(n - 1);
            covariance[j * p + i] = covariance[i * p + j];
        }
    }

    std::vector<double> eigenvalues;
    std::vector<double> vectors;
    jacobi_eigen(covariance, p, eigenvalues, vectors);

    std::vector<std::size_t> order(p);
    for (std::size_t i = 0; i < p; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return eigenvalues[x] > eigenvalues[y];
    });

    result.components.assign(p, std::vector<double>(p));
    std::vector<double> sorted_values(p);
    for (std::size_t rank = 0; rank < p; ++rank) {
        const std::size_t src = order[rank];
        sorted_values[rank] = std::max(eigenvalues[src], 0.0);
        for (std::size_t c = 0; c < p; ++c) result.components[rank][c] = vectors[src * p + c];
        // Sign convention: largest-magnitude loading is positive.
        std::size_t arg = 0;
        for (std::size_t c = 1; c < p; ++c) {
            if (std::abs(result.components[rank][c]) > std::abs(result.components[rank][arg])) arg = c;
        }
        if (result.components[rank][arg] < 0.0) {
            for (auto& v : result.components[rank]) v = -v;
        }
    }

    double total = 0.0;
    for (const double v : sorted_values) total += v;
    result.explained_variance_ratio.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        result.explained_variance_ratio[i] = total > 0.0 ? sorted_values[i] / total : 0.0;
    }

    result.scores.assign(n, std::vector<double>(p, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t comp = 0; comp < p; ++comp) {
            double dot = 0.0;
            for (std::size_t c = 0; c < p; ++c) dot += centered[r][c] * result.components[comp][c];
            result.scores[r][comp] = dot;
        }
    }
    return result;
}

KmeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                    std::uint64_t seed, std::size_t max_iterations) {
    const std::size_t n = points.size();
    if (k == 0) throw DomainError("k must be positive");
    if (k > n) throw DomainError("k exceeds the number of points");
    const std::size_t dim = points.front().size();

    Xoshiro256pp rng(seed);
    KmeansResult result;

    // k-means++ seeding.
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.next_below(n)]);
    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) min_dist[i] = squared_distance(points[i], centroids[0]);
    while (centroids.size() < k) {
        double total = 0.0;
        for (const double d : min_dist) total += d;
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double target = rng.next_unit() * total;
            double cumulative = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += min_dist[i];
                if (cumulative >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng.next_below(n); // all points coincide with a centroid
        }
        centroids.push_back(points[chosen]);
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], squared_distance(points[i], centroids.back()));
        }
    }

    std::vector<std::uint32_t> assignments(n, 0);
    std::vector<std::size_t> cluster_size(k, 0);
    for (std::size_t iteration = 0; iteration < max_iterations; ++iteration) {
        bool changed = iteration == 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_dist = squared_distance(points[i], centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = squared_distance(points[i], centroids[c]);
                if (d < best_dist) {
                    best_dist = d;
                    best = c;
                }
            }
            if (assignments[i] != best) {
                assignments[i] = static_cast<std::uint32_t>(best);
                changed = true;
            }
        }
        result.iterations = iteration + 1;
        if (!changed) break;

        std::fill(cluster_size.begin(), cluster_size.end(), 0);
        for (auto& centroid : centroids) std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            ++cluster_size[assignments[i]];
            for (std::size_t d = 0; d < dim; ++d) centroids[assignments[i]][d] += points[i][d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (cluster_size[c] == 0) continue;
            for (std::size_t d = 0; d < dim; ++d) {
                centroids[c][d] /= static_cast<double>(cluster_size[c]);
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (cluster_size[c] > 0) continue;
            // Re-seed an empty cluster with the point farthest from its centroid.
            std::size_t farthest = 0;
            double farthest_dist = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (cluster_size[assignments[i]] == 0) continue;
                const double d = squared_distance(points[i], centroids[assignments[i]]);
                if (d > farthest_dist) {
                    farthest_dist = d;
                    farthest = i;
                }
            }
            centroids[c] = points[farthest];
        }
    }

    result.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        result.inertia += squared_distance(points[i], centroids[assignments[i]]);
    }
    result.assignments = std::move(assignments);
    result.centroids = std::move(centroids);
    return result;
}

namespace {

struct Contingency {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> cells;
    std::map<std::uint32_t, double> row_sums;
    std::map<std::uint32_t, double> col_sums;
    double n = 0.0;
};

Contingency contingency_table(const std::vector<std::uint32_t>& a,
                              const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) throw DomainError("partitions cover different row counts");
    if (a.empty()) throw DomainError("partitions are empty");
    Contingency table;
    for (std::size_t i = 0; i < a.size(); ++i) {
        table.cells[{a[i], b[i]}] += 1.0;
        table.row_sums[a[i]] += 1.0;
        table.col_sums[b[i]] += 1.0;
    }
    table.n = static_cast<double>(a.size());
    return table;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

double entropy_nats(const std::map<std::uint32_t, double>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        if (count > 0.0) {
            const double p = count / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

} // namespace

double adjusted_rand_index(const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b) {
    const Contingency table = contingency_table(a, b);

    double sum_cells = 0.0;
    for (const auto& [cell, count] : table.cells) sum_cells += comb2(count);
    double sum_rows = 0.0;
    for (const auto& [label, count] : table.row_sums) sum_rows += comb2(count);
    double sum_cols = 0.0;
    for (const auto& [label, count] : table.col_sums) sum_cols += comb2(count);

    const double pairs = comb2(table.n);
    const double expected = sum_rows * sum_cols / pairs;
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (std::abs(maximum - expected) < 1e-12) {
        return 1.0; // both partitions trivial in the same way
    }
    return (sum_cells - expected) / (maximum - expected);
}

double normalized_mutual_information(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b,
                                     NmiNormalization normalization) {
    const Contingency table = contingency_table(a, b);

    const double h_a = entropy_nats(table.row_sums, table.n);
    const double h_b = entropy_nats(table.col_sums, table.n);
    if (h_a == 0.0 && h_b == 0.0) return 1.0; // both trivial, hence identical

    double mutual = 0.0;
    for (const auto& [cell, count] : table.cells) {
        const double joint = count / table.n;
        const double pa = table.row_sums.at(cell.first) / table.n;
        const double pb = table.col_sums.at(cell.second) / table.n;
        if (joint > 0.0) mutual += joint * std::log(joint / (pa * pb));
    }

    double normalizer = 0.0;
    switch (normalization) {
        case NmiNormalization::Arithmetic: normalizer = 0.5 * (h_a + h_b); break;
        case NmiNormalization::Min: normalizer = std::min(h_a, h_b); break;
        case NmiNormalization::Geometric: normalizer = std::sqrt(h_a * h_b); break;
        case NmiNormalization::Max: normalizer = std::max(h_a, h_b); break;
    }
    if (normalizer <= 0.0) return 0.0;
    return std::clamp(mutual / normalizer, 0.0, 1.0);
}

SilhouetteResult silhouette(const std::vector<std::vector<double>>& points,
                            const std::vector<std::uint32_t>& assignments) {
    const std::size_t n = points.size();
    if (assignments.size() != n) throw DomainError("assignment size does not match point count");
    if (n == 0) throw DomainError("silhouette of an empty point set");

    std::uint32_t k = 0;
    for (const std::uint32_t c : assignments) k = std::max(k, c + 1);
    std::vector<std::size_t> cluster_size(k, 0);
    for (const std::uint32_t c : assignments) ++cluster_size[c];
    std::size_t non_empty = 0;
    for (const std::size_t size : cluster_size) non_empty += size > 0 ? 1 : 0;
    if (non_empty < 2) return {0.0, true};

    double total = 0.0;
    std::vector<double> mean_dist(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            mean_dist[assignments[j]] += std::sqrt(squared_distance(points[i], points[j]));
        }
        const std::uint32_t own = assignments[i];
        if (cluster_size[own] <= 1) continue; // convention: singleton points score 0

        const double a = mean_dist[own] / static_cast<double>(cluster_size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::uint32_t c = 0; c < k; ++c) {
            if (c != own && cluster_size[c] > 0) {
                b = std::min(b, mean_dist[c] / static_cast<double>(cluster_size[c]));
            }
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return {total / static_cast<double>(n), false};
}

ClusteringReport cluster_and_score(const std::vector<std::vector<double>>& points,
                                   const std::vector<std::uint32_t>& ground_truth,
                                   std::size_t k, std::size_t repetitions, std::uint64_t seed,
                                   NmiNormalization nmi_normalization) {
    if (repetitions == 0) throw DomainError("need at least one repetition");
    if (ground_truth.size() != points.size()) {
        throw DomainError("ground truth size does not match point count");
    }

    ClusteringReport report;
    report.repetitions = repetitions;
    double best_inertia = std::numeric_limits<double>::infinity();
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const KmeansResult run = kmeans(points, k, derive_seed(seed, rep));
        RepetitionScores scores;
        scores.ari = adjusted_rand_index(run.assignments, ground_truth);
        scores.nmi = normalized_mutual_information(run.assignments, ground_truth, nmi_normalization);
        const SilhouetteResult sil = silhouette(points, run.assignments);
        scores.silhouette = sil.value;
        scores.silhouette_degenerate = sil.degenerate;
        report.per_repetition.push_back(scores);

        report.ari += scores.ari;
        report.nmi += scores.nmi;
        report.silhouette += scores.silhouette;
        if (run.inertia < best_inertia) {
            best_inertia = run.inertia;
            report.assignments = run.assignments;
        }
    }
    const auto reps = static_cast<double>(repetitions);
    report.ari /= reps;
    report.nmi /= reps;
    report.silhouette /= reps;
    return report;
}

std::vector<std::uint32_t> encode_labels(const std::vector<std::string>& labels) {
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::uint32_t> encoded;
    encoded.reserve(labels.size());
    for (const auto& label : labels) {
        const auto [it, inserted] = ids.emplace(label, static_cast<std::uint32_t>(ids.size()));
        encoded.push_back(it->second);
    }
    return encoded;
}

} // namespace mqg
