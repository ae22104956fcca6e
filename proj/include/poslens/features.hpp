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

#include <iosfwd>
#include <vector>

#include "poslens/classifier.hpp"

namespace poslens::features {

struct FeatureRanking {
    /// Per-dimension F statistic; +inf flags zero within-class variance with
    /// non-zero between-class variance (a perfectly separating dimension).
    std::vector<double> f_values;
    /// Dimension indices by descending F; infinite first, ties by lower index.
    std::vector<int> order;
    int infinite_count = 0;
};

/// One-way weighted ANOVA F per embedding dimension, weights acting as
/// fractional replication. F is the between-class to within-class
/// sum-of-squares ratio; the df constants are shared by every dimension and
/// cannot change the ranking. Dimensions that are constant everywhere get
/// F = 0; zero within-class variance with spread class means is flagged
/// infinite and ranked first (warned when a stream is given).
FeatureRanking anova_f_scores(const classifier::LabeledDataset& dataset,
                              std::ostream* warnings = nullptr);

struct CurvePoint {
    int k = 0;
    double accuracy = 0.0;
};

/// Training-set weighted accuracy of the classifier refit on the top-k
/// ranked dimensions, for each requested k. A k whose fit fails is reported
/// to `warnings` and left out instead of aborting the curve.
std::vector<CurvePoint> top_k_accuracy_curve(const classifier::LabeledDataset& dataset,
                                             const FeatureRanking& ranking,
                                             const std::vector<int>& ks,
                                             const classifier::FitOptions& options = {},
                                             std::ostream* warnings = nullptr);

}  // namespace poslens::features
