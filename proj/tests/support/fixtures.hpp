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

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Everything here is test-only and must stay independent of the library code
// paths it checks.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "poslens/common.hpp"
#include "poslens/corpus.hpp"

namespace poslens::testing {

// ---------------------------------------------------------------------------
// Template-grammar corpus: five word classes with class-specific context
// frames, Zipf-distributed types, one PUNCT full stop per sentence. Words
// additionally carry a latent topic and sentences are topically coherent, so
// the embedding geometry is dominated by topical co-occurrence while class
// membership stays a distributed, multi-component signal (no single
// dimension separates the classes).

inline corpus::TaggedCorpus template_grammar_corpus(std::size_t min_tokens,
                                                    std::uint64_t seed,
                                                    int types_per_class = 40,
                                                    int topics = 8) {
    enum { DET, ADJ, NOUN, VERB, ADV };
    const std::vector<std::string> tags = {"DET", "ADJ", "NOUN", "VERB", "ADV"};
    const std::vector<std::string> prefixes = {"det", "adj", "noun", "verb", "adv"};
    // Several frames per class: attributive and predicative adjectives, bare
    // and determined subjects, pre- and post-verbal adverbs.
    const std::vector<std::vector<int>> templates = {
        {DET, NOUN, VERB},
        {DET, ADJ, NOUN, VERB},
        {NOUN, VERB, DET, NOUN},
        {DET, NOUN, VERB, ADJ},
        {NOUN, ADV, VERB},
        {DET, NOUN, VERB, ADV},
        {DET, ADJ, NOUN, VERB, DET, ADJ, NOUN},
        {NOUN, VERB, ADV, DET, NOUN},
        {DET, NOUN, ADV, VERB, ADJ},
        {ADJ, NOUN, VERB, DET, ADJ, NOUN},
    };

    if (topics < 1) topics = 1;
    if (topics > types_per_class) topics = types_per_class;
    // words[class][topic] lists that topic's members of the class; the
    // type index r goes to topic r % topics.
    std::vector<std::vector<std::vector<std::string>>> words(
        tags.size(),
        std::vector<std::vector<std::string>>(static_cast<std::size_t>(topics)));
    for (std::size_t c = 0; c < tags.size(); ++c)
        for (int r = 0; r < types_per_class; ++r) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%s%02d", prefixes[c].c_str(), r);
            words[c][static_cast<std::size_t>(r % topics)].push_back(buf);
        }

    Rng rng(derive_seed(seed, "template-grammar"));
    auto zipf_pick = [&](std::size_t n) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) total += 1.0 / static_cast<double>(r + 1);
        double u = rng.uniform() * total;
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            acc += 1.0 / static_cast<double>(r + 1);
            if (u < acc) return r;
        }
        return n - 1;
    };

    corpus::TaggedCorpus out;
    out.source = "template-grammar";
    std::size_t tokens = 0;
    while (tokens < min_tokens) {
        const auto& tmpl =
            templates[static_cast<std::size_t>(rng.uniform_int(templates.size()))];
        auto topic = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::uint64_t>(topics)));
        std::vector<corpus::Token> sentence;
        sentence.reserve(tmpl.size() + 1);
        for (int cls : tmpl) {
            const auto& pool = words[static_cast<std::size_t>(cls)][topic];
            const std::string& w = pool[zipf_pick(pool.size())];
            sentence.push_back({w, w, tags[static_cast<std::size_t>(cls)]});
        }
        sentence.push_back({".", ".", "PUNCT"});
        tokens += tmpl.size();
        out.sentences.push_back(std::move(sentence));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pair-counting adjusted Rand index (independent of the contingency-table
// implementation).

inline double ari_pair_counting_oracle(const std::vector<int>& a,
                                       const std::vector<int>& b) {
    double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            bool same_a = a[i] == a[j];
            bool same_b = b[i] == b[j];
            if (same_a && same_b) ++n11;
            else if (same_a) ++n10;
            else if (same_b) ++n01;
            else ++n00;
        }
    }
    double num = 2.0 * (n11 * n00 - n10 * n01);
    double den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
    if (den == 0.0) return 1.0;  // both partitions trivially agree on all pairs
    return num / den;
}

// ---------------------------------------------------------------------------
// Adjusted mutual information via direct contingency-table evaluation with
// exact binomial coefficients (no lgamma), max-entropy normalization.

inline double comb_exact(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::int64_t i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

inline double ami_contingency_oracle(const std::vector<int>& a,
                                     const std::vector<int>& b) {
    std::vector<int> avals = a, bvals = b;
    std::sort(avals.begin(), avals.end());
    avals.erase(std::unique(avals.begin(), avals.end()), avals.end());
    std::sort(bvals.begin(), bvals.end());
    bvals.erase(std::unique(bvals.begin(), bvals.end()), bvals.end());
    auto n = static_cast<std::int64_t>(a.size());
    std::vector<std::vector<std::int64_t>> cells(
        avals.size(), std::vector<std::int64_t>(bvals.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto r = static_cast<std::size_t>(
            std::lower_bound(avals.begin(), avals.end(), a[i]) - avals.begin());
        auto c = static_cast<std::size_t>(
            std::lower_bound(bvals.begin(), bvals.end(), b[i]) - bvals.begin());
        ++cells[r][c];
    }
    std::vector<std::int64_t> row(avals.size(), 0), col(bvals.size(), 0);
    for (std::size_t r = 0; r < cells.size(); ++r)
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            row[r] += cells[r][c];
            col[c] += cells[r][c];
        }

    double nd = static_cast<double>(n);
    double mi = 0.0;
    for (std::size_t r = 0; r < cells.size(); ++r)
        for (std::size_t c = 0; c < cells[r].size(); ++c)
            if (cells[r][c] > 0)
                mi += (cells[r][c] / nd) *
                      std::log(nd * static_cast<double>(cells[r][c]) /
                               (static_cast<double>(row[r]) *
                                static_cast<double>(col[c])));
    auto entropy = [&](const std::vector<std::int64_t>& sums) {
        double h = 0.0;
        for (std::int64_t v : sums)
            if (v > 0) h -= (v / nd) * std::log(v / nd);
        return h;
    };
    double emi = 0.0;
    for (std::int64_t ai : row) {
        for (std::int64_t bj : col) {
            std::int64_t lo = std::max<std::int64_t>(1, ai + bj - n);
            std::int64_t hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                double p = comb_exact(ai, nij) * comb_exact(n - ai, bj - nij) /
                           comb_exact(n, bj);
                emi += (nij / nd) *
                       std::log(nd * static_cast<double>(nij) /
                                (static_cast<double>(ai) * static_cast<double>(bj))) *
                       p;
            }
        }
    }
    double h_max = std::max(entropy(row), entropy(col));
    return (mi - emi) / (h_max - emi);
}

// ---------------------------------------------------------------------------
// Unweighted one-way ANOVA as a between/within sum-of-squares ratio, written
// with naive per-group loops.

inline std::vector<double> anova_f_oracle(const Eigen::MatrixXd& x,
                                          const std::vector<int>& labels,
                                          int num_classes) {
    std::vector<double> f(static_cast<std::size_t>(x.cols()), 0.0);
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
        std::vector<std::vector<double>> groups(static_cast<std::size_t>(num_classes));
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            groups[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]
                .push_back(x(i, d));
        double grand_sum = 0.0;
        std::size_t n = 0;
        for (const auto& g : groups) {
            for (double v : g) grand_sum += v;
            n += g.size();
        }
        double grand_mean = grand_sum / static_cast<double>(n);
        double ssb = 0.0, ssw = 0.0;
        for (const auto& g : groups) {
            if (g.empty()) continue;
            double mean = 0.0;
            for (double v : g) mean += v;
            mean /= static_cast<double>(g.size());
            ssb += static_cast<double>(g.size()) * (mean - grand_mean) *
                   (mean - grand_mean);
            for (double v : g) ssw += (v - mean) * (v - mean);
        }
        if (ssw > 0.0)
            f[static_cast<std::size_t>(d)] = ssb / ssw;
        else if (ssb > 0.0)
            f[static_cast<std::size_t>(d)] =
                std::numeric_limits<double>::infinity();
    }
    return f;
}

// ---------------------------------------------------------------------------
// Prediction stream realizing a fixed reference census of misclassification
// counts and per-class type totals (one key per word type).

struct PredictionStream {
    std::vector<std::string> keys;
    std::vector<std::string> gold;
    std::vector<std::string> pred;
};

inline PredictionStream reference_confusion_stream() {
    struct ClassSpec {
        const char* gold;
        std::int64_t total_types;
        std::vector<std::pair<const char*, std::int64_t>> errors;
    };
    const std::vector<ClassSpec> spec = {
        {"SCONJ", 9, {{"ADV", 2}}},
        {"INTJ", 47, {{"PROPN", 8}}},
        {"ADP", 27, {{"ADJ", 3}}},
        {"ADJ", 3478, {{"NOUN", 313}, {"PROPN", 25}}},
        {"PROPN", 3856, {{"NOUN", 347}, {"ADJ", 87}}},
        {"NUM", 580, {{"NOUN", 52}, {"PROPN", 45}}},
        {"NOUN", 5000, {{"ADJ", 190}, {"PROPN", 91}, {"NUM", 55}}},
        {"VERB", 2000, {{"ADJ", 57}}},
        {"ADV", 400, {{"PROPN", 28}, {"NOUN", 25}, {"ADJ", 20}}},
    };
    PredictionStream out;
    std::size_t counter = 0;
    auto push = [&](const char* gold, const char* pred) {
        out.keys.push_back("w" + std::to_string(counter++));
        out.gold.push_back(gold);
        out.pred.push_back(pred);
    };
    for (const auto& cls : spec) {
        std::int64_t wrong = 0;
        for (const auto& [pred, count] : cls.errors) {
            for (std::int64_t i = 0; i < count; ++i) push(cls.gold, pred);
            wrong += count;
        }
        for (std::int64_t i = wrong; i < cls.total_types; ++i)
            push(cls.gold, cls.gold);
    }
    return out;
}

}  // namespace poslens::testing
