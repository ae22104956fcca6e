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

#include "poslens/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

namespace poslens::analysis {

ConfusionMatrix confusion_matrix(const std::vector<int>& gold,
                                 const std::vector<int>& pred,
                                 const std::vector<double>& weights,
                                 const std::vector<std::string>& keys,
                                 const std::vector<std::string>& classes) {
    if (gold.size() != pred.size() || gold.size() != weights.size() ||
        gold.size() != keys.size())
        throw ConfigError("confusion matrix inputs must align");
    std::size_t c = classes.size();
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.type_counts.assign(c, std::vector<std::int64_t>(c, 0));
    cm.weighted_counts.assign(c, std::vector<double>(c, 0.0));
    cm.class_type_totals.assign(c, 0);

    std::unordered_set<std::string> seen;
    seen.reserve(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] < 0 || gold[i] >= static_cast<int>(c) || pred[i] < 0 ||
            pred[i] >= static_cast<int>(c))
            throw ConfigError("label index out of range in confusion input");
        auto g = static_cast<std::size_t>(gold[i]);
        auto p = static_cast<std::size_t>(pred[i]);
        cm.weighted_counts[g][p] += weights[i];
        std::string cell_key = std::to_string(gold[i]) + "|" +
                               std::to_string(pred[i]) + "|" + keys[i];
        if (seen.insert(std::move(cell_key)).second) {
            ++cm.type_counts[g][p];
            ++cm.class_type_totals[g];
        }
    }
    return cm;
}

std::vector<ErrorCount> rank_errors_by_count(const ConfusionMatrix& cm) {
    std::vector<ErrorCount> rows;
    std::size_t c = cm.classes.size();
    for (std::size_t g = 0; g < c; ++g)
        for (std::size_t p = 0; p < c; ++p)
            if (g != p && cm.type_counts[g][p] > 0)
                rows.push_back({cm.classes[g], cm.classes[p], cm.type_counts[g][p]});
    std::sort(rows.begin(), rows.end(), [](const ErrorCount& a, const ErrorCount& b) {
        if (a.types != b.types) return a.types > b.types;
        if (a.gold != b.gold) return a.gold < b.gold;
        return a.pred < b.pred;
    });
    return rows;
}

std::vector<ErrorCoverage> rank_errors_by_coverage(const ConfusionMatrix& cm) {
    std::vector<ErrorCoverage> rows;
    std::size_t c = cm.classes.size();
    for (std::size_t g = 0; g < c; ++g) {
        for (std::size_t p = 0; p < c; ++p) {
            if (g == p || cm.type_counts[g][p] <= 1) continue;  // drop solitary cases
            if (cm.class_type_totals[g] <= 0)
                throw ConfigError("class " + cm.classes[g] +
                                  " has errors but no type total");
            rows.push_back({static_cast<double>(cm.type_counts[g][p]) /
                                static_cast<double>(cm.class_type_totals[g]),
                            cm.classes[g], cm.classes[p], cm.type_counts[g][p]});
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const ErrorCoverage& a, const ErrorCoverage& b) {
                  if (a.coverage != b.coverage) return a.coverage > b.coverage;
                  if (a.types != b.types) return a.types > b.types;
                  if (a.gold != b.gold) return a.gold < b.gold;
                  return a.pred < b.pred;
              });
    return rows;
}

OutlierReport list_outliers(const std::vector<std::string>& keys,
                            const std::vector<int>& gold,
                            const std::vector<int>& pred,
                            const Eigen::MatrixXd& proba,
                            const std::vector<std::int64_t>& freqs,
                            const std::set<std::string>& exclude_tags,
                            const std::vector<std::string>& classes) {
    if (keys.size() != gold.size() || keys.size() != pred.size() ||
        keys.size() != freqs.size() ||
        static_cast<std::size_t>(proba.rows()) != keys.size())
        throw ConfigError("outlier inputs must align");
    OutlierReport report;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (gold[i] == pred[i]) continue;
        const std::string& gold_tag = classes[static_cast<std::size_t>(gold[i])];
        if (exclude_tags.contains(gold_tag)) continue;
        report.push_back({keys[i], gold_tag,
                          classes[static_cast<std::size_t>(pred[i])],
                          proba(static_cast<Eigen::Index>(i), pred[i]), freqs[i]});
    }
    std::sort(report.begin(), report.end(),
              [](const OutlierRow& a, const OutlierRow& b) {
                  if (a.frequency != b.frequency) return a.frequency > b.frequency;
                  if (a.confidence != b.confidence) return a.confidence > b.confidence;
                  return a.key < b.key;
              });
    return report;
}

CentroidTable pos_centroids(
    const embeddings::EmbeddingModel& model,
    const std::vector<std::pair<std::string, std::string>>& word_tags,
    bool frequency_weighted) {
    std::map<std::string, std::pair<std::vector<double>, double>> sums;  // tag -> (sum, mass)
    int dim = model.dim();
    for (const auto& [word, tag] : word_tags) {
        auto vec = model.vector_of(word);  // throws on OOV
        double w = 1.0;
        if (frequency_weighted) {
            std::int32_t idx = model.vocab.find(word);
            w = static_cast<double>(model.vocab.freqs[static_cast<std::size_t>(idx)]);
        }
        auto& [sum, mass] = sums[tag];
        if (sum.empty()) sum.assign(static_cast<std::size_t>(dim), 0.0);
        for (int d = 0; d < dim; ++d)
            sum[static_cast<std::size_t>(d)] += w * vec[static_cast<std::size_t>(d)];
        mass += w;
    }

    CentroidTable table;
    for (auto& [tag, entry] : sums) {
        auto& [sum, mass] = entry;
        for (double& v : sum) v /= mass;
        bool zero = std::all_of(sum.begin(), sum.end(),
                                [](double v) { return v == 0.0; });
        if (zero) {
            table.zero_tags.push_back(tag);
            continue;
        }
        table.tags.push_back(tag);
        table.centroids.push_back(std::move(sum));
    }
    auto t = static_cast<Eigen::Index>(table.tags.size());
    table.cosine.resize(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        table.cosine(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < t; ++j) {
            double cs = embeddings::cosine(table.centroids[static_cast<std::size_t>(i)],
                                           table.centroids[static_cast<std::size_t>(j)]);
            table.cosine(i, j) = cs;
            table.cosine(j, i) = cs;
        }
    }
    return table;
}

std::vector<SimilarityRow> centroid_similarity_table(const CentroidTable& table) {
    if (table.tags.size() < 2)
        throw ConfigError("similarity table needs at least 2 centroids");
    for (std::size_t i = 0; i < table.tags.size(); ++i) {
        const auto& cvec = table.centroids[i];
        if (std::all_of(cvec.begin(), cvec.end(), [](double v) { return v == 0.0; }))
            throw ConfigError("zero centroid for tag " + table.tags[i]);
    }
    std::vector<SimilarityRow> rows;
    for (std::size_t i = 0; i < table.tags.size(); ++i)
        for (std::size_t j = i + 1; j < table.tags.size(); ++j)
            rows.push_back({table.cosine(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)),
                            table.tags[i], table.tags[j]});
    std::sort(rows.begin(), rows.end(),
              [](const SimilarityRow& a, const SimilarityRow& b) {
                  if (a.cosine != b.cosine) return a.cosine > b.cosine;
                  if (a.tag_a != b.tag_a) return a.tag_a < b.tag_a;
                  return a.tag_b < b.tag_b;
              });
    return rows;
}

namespace {

double sq_distance(std::span<const double> a, const std::vector<double>& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        d2 += d * d;
    }
    return d2;
}

struct KmeansRun {
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

KmeansRun kmeans_once(std::span<const double> data, std::size_t n, int dim, int k,
                      Rng& rng) {
    auto point = [&](std::size_t i) {
        return data.subspan(i * static_cast<std::size_t>(dim),
                            static_cast<std::size_t>(dim));
    };

    // k-means++ seeding.
    std::vector<std::vector<double>> centers;
    centers.reserve(static_cast<std::size_t>(k));
    std::size_t first = static_cast<std::size_t>(rng.uniform_int(n));
    centers.emplace_back(point(first).begin(), point(first).end());
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sq_distance(point(i), centers[0]);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t chosen;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (u < acc) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<std::size_t>(rng.uniform_int(n));
        }
        centers.emplace_back(point(chosen).begin(), point(chosen).end());
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], sq_distance(point(i), centers.back()));
    }

    std::vector<int> labels(n, -1);
    std::vector<double> best_d2(n, 0.0);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_dist = sq_distance(point(i), centers[0]);
            for (int c = 1; c < k; ++c) {
                double dist = sq_distance(point(i), centers[static_cast<std::size_t>(c)]);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            best_d2[i] = best_dist;
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }
        // Re-seed any empty cluster with the point farthest from its center.
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(labels[i])];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (best_d2[i] > best_d2[far]) far = i;
            if (counts[static_cast<std::size_t>(labels[far])] <= 1) continue;
            --counts[static_cast<std::size_t>(labels[far])];
            labels[far] = c;
            counts[static_cast<std::size_t>(c)] = 1;
            best_d2[far] = 0.0;
            changed = true;
        }
        if (!changed && iter > 0) break;
        for (auto& ctr : centers) std::fill(ctr.begin(), ctr.end(), 0.0);
        std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto p = point(i);
            auto c = static_cast<std::size_t>(labels[i]);
            for (int d = 0; d < dim; ++d) centers[c][static_cast<std::size_t>(d)] += p[static_cast<std::size_t>(d)];
            mass[c] += 1.0;
        }
        for (int c = 0; c < k; ++c)
            if (mass[static_cast<std::size_t>(c)] > 0.0)
                for (double& v : centers[static_cast<std::size_t>(c)])
                    v /= mass[static_cast<std::size_t>(c)];
    }
    KmeansRun run;
    run.labels = std::move(labels);
    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        run.inertia +=
            sq_distance(point(i), centers[static_cast<std::size_t>(run.labels[i])]);
    return run;
}

}  // namespace

std::vector<int> kmeans_cluster(std::span<const double> data, std::size_t n, int dim,
                                int k, std::uint64_t seed, int restarts,
                                double* inertia_out) {
    if (dim < 1) throw ConfigError("k-means needs dim >= 1");
    if (data.size() != n * static_cast<std::size_t>(dim))
        throw ConfigError("k-means data size does not match n x dim");
    if (k < 1) throw ConfigError("k-means needs k >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw ConfigError("k-means k exceeds the number of points");
    if (restarts < 1) throw ConfigError("k-means needs restarts >= 1");

    KmeansRun best;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, "kmeans-r" + std::to_string(r)));
        KmeansRun run = kmeans_once(data, n, dim, k, rng);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    if (inertia_out) *inertia_out = best.inertia;
    return best.labels;
}

namespace {

// Contingency table over compacted label ids.
struct Contingency {
    std::vector<std::vector<std::int64_t>> cells;
    std::vector<std::int64_t> row_sums, col_sums;
    std::int64_t n = 0;
};

Contingency contingency_table(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size())
        throw ConfigError("partitions must have equal length");
    if (a.empty()) throw ConfigError("partitions must be non-empty");
    std::map<int, std::size_t> amap, bmap;
    for (int v : a) amap.emplace(v, amap.size());
    for (int v : b) bmap.emplace(v, bmap.size());
    Contingency t;
    t.cells.assign(amap.size(), std::vector<std::int64_t>(bmap.size(), 0));
    t.row_sums.assign(amap.size(), 0);
    t.col_sums.assign(bmap.size(), 0);
    t.n = static_cast<std::int64_t>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t r = amap[a[i]];
        std::size_t c = bmap[b[i]];
        ++t.cells[r][c];
        ++t.row_sums[r];
        ++t.col_sums[c];
    }
    return t;
}

// Identical partitions up to relabeling: exactly one non-empty cell in every
// row and every column.
bool is_permutation_match(const Contingency& t) {
    if (t.cells.size() != t.cells[0].size()) return false;
    for (const auto& row : t.cells) {
        int nonzero = 0;
        for (std::int64_t v : row) nonzero += v > 0 ? 1 : 0;
        if (nonzero != 1) return false;
    }
    std::vector<int> col_nonzero(t.cells[0].size(), 0);
    for (const auto& row : t.cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row[c] > 0) ++col_nonzero[c];
    return std::all_of(col_nonzero.begin(), col_nonzero.end(),
                       [](int v) { return v == 1; });
}

double comb2(std::int64_t m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

}  // namespace

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    Contingency t = contingency_table(a, b);
    if (is_permutation_match(t)) return 1.0;

    double index = 0.0;
    for (const auto& row : t.cells)
        for (std::int64_t v : row) index += comb2(v);
    double sum_a = 0.0, sum_b = 0.0;
    for (std::int64_t v : t.row_sums) sum_a += comb2(v);
    for (std::int64_t v : t.col_sums) sum_b += comb2(v);
    double expected = sum_a * sum_b / comb2(t.n);
    double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return index == expected ? 1.0 : 0.0;
    return (index - expected) / (max_index - expected);
}

double adjusted_mutual_info(const std::vector<int>& a, const std::vector<int>& b) {
    Contingency t = contingency_table(a, b);
    if (is_permutation_match(t)) return 1.0;

    const double n = static_cast<double>(t.n);
    double mi = 0.0;
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
        for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
            std::int64_t nij = t.cells[r][c];
            if (nij == 0) continue;
            mi += (static_cast<double>(nij) / n) *
                  std::log(n * static_cast<double>(nij) /
                           (static_cast<double>(t.row_sums[r]) *
                            static_cast<double>(t.col_sums[c])));
        }
    }
    auto entropy = [&](const std::vector<std::int64_t>& sums) {
        double h = 0.0;
        for (std::int64_t v : sums) {
            if (v == 0) continue;
            double p = static_cast<double>(v) / n;
            h -= p * std::log(p);
        }
        return h;
    };
    double h_a = entropy(t.row_sums);
    double h_b = entropy(t.col_sums);

    // Expected MI under the hypergeometric model.
    std::vector<double> log_fact(static_cast<std::size_t>(t.n) + 1, 0.0);
    for (std::size_t i = 2; i < log_fact.size(); ++i)
        log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
    auto lf = [&](std::int64_t m) { return log_fact[static_cast<std::size_t>(m)]; };

    double emi = 0.0;
    for (std::int64_t ai : t.row_sums) {
        for (std::int64_t bj : t.col_sums) {
            std::int64_t lo = std::max<std::int64_t>(1, ai + bj - t.n);
            std::int64_t hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                double log_p = lf(ai) + lf(bj) + lf(t.n - ai) + lf(t.n - bj) -
                               lf(t.n) - lf(nij) - lf(ai - nij) - lf(bj - nij) -
                               lf(t.n - ai - bj + nij);
                emi += (static_cast<double>(nij) / n) *
                       std::log(n * static_cast<double>(nij) /
                                (static_cast<double>(ai) * static_cast<double>(bj))) *
                       std::exp(log_p);
            }
        }
    }

    double denominator = std::max(h_a, h_b) - emi;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    if (denominator < 0.0)
        denominator = std::min(denominator, -kEps);
    else
        denominator = std::max(denominator, kEps);
    return (mi - emi) / denominator;
}

}  // namespace poslens::analysis
