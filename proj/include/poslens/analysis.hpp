/*
 * Copyright 2026 The poslens authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "poslens/common.hpp"
#include "poslens/embeddings.hpp"

namespace poslens::analysis {

struct ConfusionMatrix {
    std::vector<std::string> classes;
    /// Distinct word types per (gold, predicted) cell: a key counts once per
    /// cell it appears in.
    std::vector<std::vector<std::int64_t>> type_counts;
    /// Frequency-weighted counts: weights summed per cell.
    std::vector<std::vector<double>> weighted_counts;
    /// Row sums of type_counts (per-gold-class type totals).
    std::vector<std::int64_t> class_type_totals;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& gold,
                                 const std::vector<int>& pred,
                                 const std::vector<double>& weights,
                                 const std::vector<std::string>& keys,
                                 const std::vector<std::string>& classes);

struct ErrorCount {
    std::string gold, pred;
    std::int64_t types = 0;
};

/// Off-diagonal cells by descending type count, ties by (gold, pred) name.
std::vector<ErrorCount> rank_errors_by_count(const ConfusionMatrix& cm);

struct ErrorCoverage {
    double coverage = 0.0;  // type_counts[g][p] / class_type_totals[g]
    std::string gold, pred;
    std::int64_t types = 0;
};

/// Off-diagonal cells by descending coverage; cells with type count <= 1 are
/// excluded. Ties by descending count, then (gold, pred) name.
std::vector<ErrorCoverage> rank_errors_by_coverage(const ConfusionMatrix& cm);

struct OutlierRow {
    std::string key, gold, pred;
    double confidence = 0.0;       // predicted-class probability
    std::int64_t frequency = 0;
};

/// Misclassified rows (gold != pred, gold outside exclude_tags), sorted by
/// descending frequency, then descending confidence, then key.
using OutlierReport = std::vector<OutlierRow>;

OutlierReport list_outliers(const std::vector<std::string>& keys,
                            const std::vector<int>& gold,
                            const std::vector<int>& pred,
                            const Eigen::MatrixXd& proba,
                            const std::vector<std::int64_t>& freqs,
                            const std::set<std::string>& exclude_tags,
                            const std::vector<std::string>& classes);

struct CentroidTable {
    std::vector<std::string> tags;               // sorted; zero centroids excluded
    std::vector<std::vector<double>> centroids;  // aligned with tags
    Eigen::MatrixXd cosine;                      // pairwise over tags
    std::vector<std::string> zero_tags;          // flagged and left out
};

/// Per-tag centroid = unweighted mean of member input vectors (optionally
/// frequency-weighted). Tags with no members are omitted; exactly-zero
/// centroids are flagged and excluded from the cosine matrix.
CentroidTable pos_centroids(const embeddings::EmbeddingModel& model,
                            const std::vector<std::pair<std::string, std::string>>& word_tags,
                            bool frequency_weighted = false);

struct SimilarityRow {
    double cosine = 0.0;
    std::string tag_a, tag_b;
};

/// All unordered tag pairs by descending cosine. Throws ConfigError naming
/// the tag if a zero centroid slips in.
std::vector<SimilarityRow> centroid_similarity_table(const CentroidTable& table);

/// Lloyd iterations from k-means++ seeding; best of `restarts` runs by
/// inertia (ties by restart index). Deterministic under a fixed seed.
std::vector<int> kmeans_cluster(std::span<const double> data, std::size_t n, int dim,
                                int k, std::uint64_t seed, int restarts = 10,
                                double* inertia_out = nullptr);

/// Permutation-model chance-corrected Rand index.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

/// Adjusted mutual information with the hypergeometric expected MI and
/// max-entropy normalization.
double adjusted_mutual_info(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace poslens::analysis
