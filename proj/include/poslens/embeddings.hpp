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
#include <span>
#include <string_view>
#include <vector>

#include "poslens/common.hpp"
#include "poslens/corpus.hpp"

namespace poslens::embeddings {

struct TrainConfig {
    int dim = 300;
    int negatives = 10;
    int window = 2;                     // symmetric context radius
    int epochs = 5;
    std::int64_t min_count = 5;
    double subsample_threshold = 0.0;   // 0 disables frequent-word down-sampling
    double initial_lr = 0.025;
    std::uint64_t seed = 1;
    double unigram_power = 0.75;

    void validate() const;  // throws ConfigError
};

struct EmbeddingModel {
    corpus::Vocabulary vocab;
    std::vector<double> input_vectors;   // N x dim, row-major; the published vectors
    std::vector<double> output_vectors;  // context vectors, kept for gradient tests
    TrainConfig config;

    int dim() const { return config.dim; }
    std::size_t size() const { return vocab.size(); }

    std::span<double> input(std::size_t idx);
    std::span<const double> input(std::size_t idx) const;
    std::span<double> output(std::size_t idx);
    std::span<const double> output(std::size_t idx) const;

    /// Input vector for a key; throws ConfigError when absent.
    std::span<const double> vector_of(std::string_view key) const;
};

/// Input vectors uniform in [-0.5/dim, +0.5/dim) from the config seed;
/// output vectors all zero.
EmbeddingModel init_model(const corpus::Vocabulary& vocab, const TrainConfig& config);

/// Unigram noise distribution P(w) = freq(w)^power / sum, sampled via an
/// alias table.
class NoiseDistribution {
public:
    NoiseDistribution(const corpus::Vocabulary& vocab, double power);

    double prob(std::size_t idx) const { return probs_[idx]; }
    std::size_t size() const { return probs_.size(); }
    std::size_t sample(Rng& rng) const;

private:
    std::vector<double> probs_;
    std::vector<double> accept_;
    std::vector<std::uint32_t> alias_;
};

double sigmoid(double x);
double log_sigmoid(double x);

struct SgnsGradients {
    double loss = 0.0;
    std::vector<double> center;
    std::vector<double> context;
    std::vector<std::vector<double>> negatives;
};

/// Loss and analytic partial derivatives of
///   L = -log sigmoid(ctx . center) - sum_neg log sigmoid(-neg . center)
SgnsGradients sgns_gradients(std::span<const double> center,
                             std::span<const double> context,
                             const std::vector<std::span<const double>>& negatives);

struct EpochStats {
    int epoch = 0;              // 1-based
    std::int64_t pairs = 0;     // pairs processed so far, all epochs
    double smoothed_loss = 0.0;
    double lr = 0.0;
};

/// Skip-gram with negative sampling over per-sentence key streams. The
/// context window never crosses a sentence boundary. threads == 1 is the
/// deterministic mode; with more threads workers apply unsynchronized
/// overlapping updates and results are approximate.
EmbeddingModel train_skipgram(const corpus::TokenStream& stream,
                              const corpus::Vocabulary& vocab,
                              const TrainConfig& config,
                              int threads = 1,
                              std::vector<EpochStats>* stats_out = nullptr,
                              std::ostream* progress = nullptr);

/// a.b / (|a||b|); throws ConfigError on a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);

/// word2vec text format: "N dim" header, then one "key v1 .. vdim" row per
/// word in index order, 6 significant digits. Output vectors are not
/// persisted.
void save_text(const EmbeddingModel& model, std::ostream& out);

/// Loads the text format. Vocabulary frequencies are not part of the format
/// and are set to 1; output vectors are zeroed.
EmbeddingModel load_text(std::istream& in);

}  // namespace poslens::embeddings
