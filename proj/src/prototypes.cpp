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

#include "poslens/prototypes.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

namespace poslens::prototypes {

namespace {

const std::set<std::string> kUnscoredTags = {"PUNCT", "X", "SYM"};

}  // namespace

LemmaTagCounts collect_lemma_tag_counts(const corpus::TaggedCorpus& corpus) {
    LemmaTagCounts counts;
    for (const auto& sentence : corpus.sentences)
        for (const auto& tok : sentence) {
            if (!corpus::TagMap::is_universal(tok.tag))
                throw ConfigError("non-Universal tag \"" + tok.tag +
                                  "\" in prototype counting input");
            ++counts[tok.lemma][tok.tag];
        }
    return counts;
}

void PrototypeConfig::validate() const {
    if (min_freq < 1) throw ConfigError("min_freq must be >= 1");
    if (!(dominance_ratio > 0.0) || dominance_ratio > 1.0)
        throw ConfigError("dominance_ratio must be in (0, 1]");
}

PrototypeLexicon extract_prototypes(const LemmaTagCounts& counts,
                                    const PrototypeConfig& config) {
    config.validate();
    PrototypeLexicon lexicon;
    lexicon.config = config;
    for (const auto& [lemma, tag_counts] : counts) {
        std::int64_t total = 0;
        std::int64_t max_count = 0;
        const std::string* dominant = nullptr;
        bool unique_max = true;
        for (const auto& [tag, count] : tag_counts) {
            total += count;
            if (count > max_count) {
                max_count = count;
                dominant = &tag;
                unique_max = true;
            } else if (count == max_count) {
                unique_max = false;
            }
        }
        if (total < config.min_freq || !dominant || !unique_max) continue;
        if (config.excluded.contains(*dominant)) continue;
        bool dominated = true;
        for (const auto& [tag, count] : tag_counts) {
            if (tag == *dominant) continue;
            if (static_cast<double>(count) >
                config.dominance_ratio * static_cast<double>(max_count)) {
                dominated = false;
                break;
            }
        }
        if (dominated) lexicon.entries.emplace(lemma, *dominant);
    }
    return lexicon;
}

void save_lexicon(const PrototypeLexicon& lexicon, const LemmaTagCounts& counts,
                  std::ostream& out) {
    out << "lemma\ttag\ttotal_count\n";
    for (const auto& [lemma, tag] : lexicon.entries) {
        std::int64_t total = 0;
        auto it = counts.find(lemma);
        if (it != counts.end())
            for (const auto& [t, c] : it->second) total += c;
        out << lemma << '\t' << tag << '\t' << total << '\n';
    }
}

PrototypeTrainResult train_prototype_classifier(
    const embeddings::EmbeddingModel& model, const PrototypeLexicon& lexicon,
    const LemmaTagCounts& treebank_counts, const classifier::FitOptions& options) {
    std::vector<std::string> words, labels;
    std::vector<double> weights;
    std::size_t oov = 0;
    for (const auto& [lemma, tag] : lexicon.entries) {
        if (model.vocab.find(lemma) < 0) {
            ++oov;
            continue;
        }
        std::int64_t freq = 0;
        auto it = treebank_counts.find(lemma);
        if (it != treebank_counts.end())
            for (const auto& [t, c] : it->second) freq += c;
        words.push_back(lemma);
        labels.push_back(tag);
        weights.push_back(static_cast<double>(std::max<std::int64_t>(1, freq)));
    }
    std::set<std::string> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2)
        throw ConfigError("prototype training needs >= 2 classes after "
                          "intersecting with the model vocabulary (" +
                          std::to_string(oov) + " of " +
                          std::to_string(lexicon.entries.size()) +
                          " lemmas were out of vocabulary)");

    PrototypeTrainResult result;
    result.dataset = classifier::build_dataset(model, words, labels, weights);
    result.clf = classifier::fit(result.dataset, options);
    result.used = words.size();
    result.oov = oov;
    return result;
}

TokenEvalResult evaluate_on_tokens(
    const corpus::TaggedCorpus& test, const classifier::LinearClassifier& clf,
    const embeddings::EmbeddingModel& model,
    const std::optional<std::string>& oov_fallback_tag) {
    // Metric label space: classifier classes plus any gold tag seen in the
    // test corpus (plus the fallback tag, when enabled).
    std::set<std::string> tag_space(clf.classes.begin(), clf.classes.end());
    for (const auto& sentence : test.sentences)
        for (const auto& tok : sentence) {
            if (!corpus::TagMap::is_universal(tok.tag))
                throw ConfigError("non-Universal tag \"" + tok.tag +
                                  "\" in evaluation corpus");
            tag_space.insert(tok.tag);
        }
    if (oov_fallback_tag) tag_space.insert(*oov_fallback_tag);
    std::vector<std::string> classes(tag_space.begin(), tag_space.end());
    std::map<std::string, int> class_index;
    for (std::size_t c = 0; c < classes.size(); ++c)
        class_index[classes[c]] = static_cast<int>(c);

    TokenEvalResult result;
    std::vector<int> gold, pred;
    std::unordered_set<std::string> oov_seen;
    Eigen::VectorXd x(model.dim());
    for (const auto& sentence : test.sentences) {
        for (const auto& tok : sentence) {
            if (kUnscoredTags.contains(tok.tag)) continue;
            std::int32_t idx = model.vocab.find(tok.lemma);
            if (idx < 0) {
                ++result.oov_tokens;
                if (oov_seen.insert(tok.lemma).second) ++result.oov_types;
                if (!oov_fallback_tag) continue;
                gold.push_back(class_index.at(tok.tag));
                pred.push_back(class_index.at(*oov_fallback_tag));
                ++result.scored_tokens;
                continue;
            }
            auto row = model.input(static_cast<std::size_t>(idx));
            for (int d = 0; d < model.dim(); ++d)
                x[d] = row[static_cast<std::size_t>(d)];
            gold.push_back(class_index.at(tok.tag));
            pred.push_back(class_index.at(clf.predict(x)));
            ++result.scored_tokens;
        }
    }
    if (!gold.empty()) {
        std::vector<double> weights(gold.size(), 1.0);
        result.metrics = classifier::compute_metrics(gold, pred, weights, classes);
    }
    return result;
}

}  // namespace poslens::prototypes
