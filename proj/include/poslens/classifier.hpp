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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "poslens/common.hpp"
#include "poslens/embeddings.hpp"

namespace poslens::classifier {

enum class WeightSource { frequency, uniform };

struct LabeledDataset {
    Eigen::MatrixXd x;                  // items x dim
    std::vector<int> labels;            // indices into classes
    Eigen::VectorXd weights;            // all > 0
    std::vector<std::string> keys;      // word-key per item
    std::vector<std::string> classes;   // ordered tag list

    std::size_t size() const { return static_cast<std::size_t>(x.rows()); }
    int dim() const { return static_cast<int>(x.cols()); }
    void validate() const;  // throws ConfigError on invariant violations
};

/// One item per word, vector taken from the model, weight from the corpus
/// frequency or 1. Classes are the sorted distinct labels. Throws
/// ConfigError listing every out-of-vocabulary word.
LabeledDataset build_dataset(const embeddings::EmbeddingModel& model,
                             const std::vector<std::string>& words,
                             const std::vector<std::string>& labels,
                             WeightSource source);

/// Same, with caller-supplied per-word weights.
LabeledDataset build_dataset(const embeddings::EmbeddingModel& model,
                             const std::vector<std::string>& words,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& weights);

/// Dataset restricted to the given feature columns, in the given order.
LabeledDataset select_dims(const LabeledDataset& dataset,
                           const std::vector<int>& dims);

struct FitOptions {
    double lambda = 1e-4;  // L2 on weights only; biases unregularized
    double tol = 1e-6;     // gradient-norm convergence threshold
    int max_iter = 1000;

    void validate() const;  // throws ConfigError
};

/// fit() did not reach the gradient-norm tolerance.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, double grad_norm)
        : std::runtime_error(what), grad_norm_(grad_norm) {}
    double grad_norm() const { return grad_norm_; }

private:
    double grad_norm_;
};

struct LinearClassifier {
    Eigen::MatrixXd weights;  // C x dim
    Eigen::VectorXd biases;   // C
    std::vector<std::string> classes;
    double lambda = 0.0;

    int dim() const { return static_cast<int>(weights.cols()); }
    int num_classes() const { return static_cast<int>(weights.rows()); }

    /// softmax(weights . x + biases); sums to 1 within 1e-12.
    Eigen::VectorXd proba(const Eigen::VectorXd& x) const;

    /// argmax class index; exact ties go to the lowest index.
    int predict_index(const Eigen::VectorXd& x) const;
    const std::string& predict(const Eigen::VectorXd& x) const;

    /// Versioned text format: "poslens-clf v1 C dim lambda", class names,
    /// then one "bias w1 .. wdim" row per class, 9 significant digits.
    void save(std::ostream& out) const;
    static LinearClassifier load(std::istream& in);
};

/// Minimizes weighted-mean cross-entropy + lambda * |W|^2 to gradient norm
/// <= tol (L-BFGS from zero). The objective divides by the total weight, so
/// uniformly rescaling all weights leaves the optimum unchanged. Throws
/// FitError on non-convergence.
LinearClassifier fit(const LabeledDataset& dataset, const FitOptions& options = {});

/// fit() from an explicit starting point (exposed for convexity tests).
LinearClassifier fit_from(const LabeledDataset& dataset, const FitOptions& options,
                          const Eigen::MatrixXd& w0, const Eigen::VectorXd& b0);

struct ClassMetrics {
    std::string tag;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double support = 0.0;  // gold weight mass
};

struct Metrics {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    double weighted_precision = 0.0;  // support-weighted over non-empty classes
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
};

/// Weighted accuracy and per-class / support-weighted P, R, F1. Classes with
/// zero gold support are reported but excluded from the weighted averages.
Metrics compute_metrics(const std::vector<int>& gold, const std::vector<int>& pred,
                        const std::vector<double>& weights,
                        const std::vector<std::string>& classes);

/// Stratified k-fold cross-validation; metrics are pooled over out-of-fold
/// predictions with item weights. Optionally returns the pooled predictions
/// aligned with the dataset.
Metrics cross_validate(const LabeledDataset& dataset, int folds, std::uint64_t seed,
                       const FitOptions& options = {},
                       std::vector<int>* out_of_fold_pred = nullptr,
                       std::ostream* warnings = nullptr);

struct BaselineResult {
    int dimension = 0;   // the selected feature
    Metrics cv;          // cross-validated on the single feature
    Metrics train;       // training-set metrics of the single-feature fit
};

/// One-feature baseline: picks the dimension with maximum ANOVA F-value and
/// fits the same logistic regression on it alone.
BaselineResult one_feature_baseline(const LabeledDataset& dataset, int folds,
                                    std::uint64_t seed,
                                    const FitOptions& options = {});

/// Majority tag among the K nearest items by cosine distance, votes
/// weighted by item weight; ties go to the lowest class index.
std::string knn_classify(const LabeledDataset& train, const Eigen::VectorXd& query,
                         int k);

}  // namespace poslens::classifier
