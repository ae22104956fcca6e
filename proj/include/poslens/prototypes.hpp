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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "poslens/classifier.hpp"
#include "poslens/corpus.hpp"

namespace poslens::prototypes {

/// lemma -> tag -> token count.
using LemmaTagCounts = std::map<std::string, std::map<std::string, std::int64_t>>;

LemmaTagCounts collect_lemma_tag_counts(const corpus::TaggedCorpus& corpus);

struct PrototypeConfig {
    std::int64_t min_freq = 10;
    double dominance_ratio = 0.5;
    std::set<std::string> excluded = {"PUNCT", "X", "SYM"};

    void validate() const;  // throws ConfigError
};

struct PrototypeLexicon {
    std::map<std::string, std::string> entries;  // lemma -> dominant tag
    PrototypeConfig config;
};

/// A lemma enters iff its total count >= min_freq, its max-count tag is a
/// unique maximum, every other tag's count is <= dominance_ratio * max, and
/// the dominant tag is not excluded.
PrototypeLexicon extract_prototypes(const LemmaTagCounts& counts,
                                    const PrototypeConfig& config = {});

/// "lemma TAB tag TAB total_count" rows.
void save_lexicon(const PrototypeLexicon& lexicon, const LemmaTagCounts& counts,
                  std::ostream& out);

struct PrototypeTrainResult {
    classifier::LinearClassifier clf;
    classifier::LabeledDataset dataset;  // the intersected training data
    std::size_t used = 0;                // prototype lemmas found in the model
    std::size_t oov = 0;                 // prototype lemmas missing from the model
};

/// Fits the logistic regression on the lexicon lemmas present in the
/// (lemma-mode) model, weighted by treebank lemma frequencies. Throws
/// ConfigError when fewer than 2 classes survive the intersection.
PrototypeTrainResult train_prototype_classifier(
    const embeddings::EmbeddingModel& model, const PrototypeLexicon& lexicon,
    const LemmaTagCounts& treebank_counts,
    const classifier::FitOptions& options = {});

struct TokenEvalResult {
    std::optional<classifier::Metrics> metrics;  // absent when nothing scorable
    std::int64_t scored_tokens = 0;
    std::int64_t oov_tokens = 0;
    std::int64_t oov_types = 0;
};

/// Token-level tagging over the test corpus: each non-PUNCT/X/SYM token is
/// predicted from its lemma vector with uniform weight 1; out-of-vocabulary
/// lemmas are skipped and counted, unless a fallback tag is supplied, in
/// which case they are predicted as that tag and scored.
TokenEvalResult evaluate_on_tokens(
    const corpus::TaggedCorpus& test, const classifier::LinearClassifier& clf,
    const embeddings::EmbeddingModel& model,
    const std::optional<std::string>& oov_fallback_tag = std::nullopt);

}  // namespace poslens::prototypes
