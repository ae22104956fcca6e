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

#include "poslens/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

namespace poslens::features {

FeatureRanking anova_f_scores(const classifier::LabeledDataset& dataset,
                              std::ostream* warnings) {
    dataset.validate();
    std::set<int> present(dataset.labels.begin(), dataset.labels.end());
    if (present.size() < 2)
        throw ConfigError("ANOVA needs at least 2 classes present");

    const Eigen::Index n = dataset.x.rows();
    const Eigen::Index dim = dataset.x.cols();
    const std::size_t c = dataset.classes.size();

    Eigen::VectorXd class_weight = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < n; ++i)
        class_weight[dataset.labels[static_cast<std::size_t>(i)]] += dataset.weights[i];
    double total_weight = dataset.weights.sum();

    // Weighted per-class means: sums[c][d] / class_weight[c].
    Eigen::MatrixXd sums =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c), dim);
    for (Eigen::Index i = 0; i < n; ++i)
        sums.row(dataset.labels[static_cast<std::size_t>(i)]) +=
            dataset.weights[i] * dataset.x.row(i);
    Eigen::RowVectorXd grand_mean = sums.colwise().sum() / total_weight;
    Eigen::MatrixXd class_mean = sums;
    for (Eigen::Index k = 0; k < class_mean.rows(); ++k)
        if (class_weight[k] > 0.0) class_mean.row(k) /= class_weight[k];

    Eigen::RowVectorXd ss_between = Eigen::RowVectorXd::Zero(dim);
    for (Eigen::Index k = 0; k < class_mean.rows(); ++k) {
        if (class_weight[k] <= 0.0) continue;
        Eigen::RowVectorXd dev = class_mean.row(k) - grand_mean;
        ss_between += class_weight[k] * dev.cwiseProduct(dev);
    }
    Eigen::RowVectorXd ss_within = Eigen::RowVectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::RowVectorXd dev =
            dataset.x.row(i) - class_mean.row(dataset.labels[static_cast<std::size_t>(i)]);
        ss_within += dataset.weights[i] * dev.cwiseProduct(dev);
    }

    FeatureRanking ranking;
    ranking.f_values.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index d = 0; d < dim; ++d) {
        double ssb = ss_between[d];
        double ssw = ss_within[d];
        if (ssw > 0.0) {
            ranking.f_values[static_cast<std::size_t>(d)] = ssb / ssw;
        } else if (ssb > 0.0) {
            ranking.f_values[static_cast<std::size_t>(d)] =
                std::numeric_limits<double>::infinity();
            ++ranking.infinite_count;
            if (warnings)
                *warnings << "warning: dimension " << d
                          << " has zero within-class variance; F flagged infinite\n";
        } else {
            ranking.f_values[static_cast<std::size_t>(d)] = 0.0;  // constant dimension
        }
    }
    ranking.order.resize(static_cast<std::size_t>(dim));
    std::iota(ranking.order.begin(), ranking.order.end(), 0);
    std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
        return ranking.f_values[static_cast<std::size_t>(a)] >
               ranking.f_values[static_cast<std::size_t>(b)];
    });
    return ranking;
}

std::vector<CurvePoint> top_k_accuracy_curve(const classifier::LabeledDataset& dataset,
                                             const FeatureRanking& ranking,
                                             const std::vector<int>& ks,
                                             const classifier::FitOptions& options,
                                             std::ostream* warnings) {
    if (ranking.order.size() != static_cast<std::size_t>(dataset.dim()))
        throw ConfigError("ranking does not match dataset dimensionality");
    for (int k : ks)
        if (k < 1 || k > dataset.dim())
            throw ConfigError("curve k = " + std::to_string(k) +
                              " outside [1, " + std::to_string(dataset.dim()) + "]");

    std::vector<double> weights(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i)
        weights[i] = dataset.weights[static_cast<Eigen::Index>(i)];

    std::vector<CurvePoint> curve;
    for (int k : ks) {
        std::vector<int> dims(ranking.order.begin(), ranking.order.begin() + k);
        classifier::LabeledDataset sub = classifier::select_dims(dataset, dims);
        try {
            classifier::LinearClassifier clf = classifier::fit(sub, options);
            std::vector<int> pred(sub.size());
            for (std::size_t i = 0; i < sub.size(); ++i)
                pred[i] = clf.predict_index(
                    sub.x.row(static_cast<Eigen::Index>(i)).transpose());
            classifier::Metrics m =
                classifier::compute_metrics(sub.labels, pred, weights, sub.classes);
            curve.push_back({k, m.accuracy});
        } catch (const classifier::FitError& e) {
            if (warnings)
                *warnings << "warning: top-" << k << " fit failed (" << e.what()
                          << "); point left out\n";
        }
    }
    return curve;
}

}  // namespace poslens::features
