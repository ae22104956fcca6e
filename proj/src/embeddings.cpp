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

#include "poslens/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>

namespace poslens::embeddings {

void TrainConfig::validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    if (!(initial_lr > 0.0)) throw ConfigError("initial_lr must be > 0");
    if (subsample_threshold < 0.0)
        throw ConfigError("subsample_threshold must be >= 0");
    if (unigram_power < 0.0) throw ConfigError("unigram_power must be >= 0");
}

std::span<double> EmbeddingModel::input(std::size_t idx) {
    return {input_vectors.data() + idx * static_cast<std::size_t>(config.dim),
            static_cast<std::size_t>(config.dim)};
}

std::span<const double> EmbeddingModel::input(std::size_t idx) const {
    return {input_vectors.data() + idx * static_cast<std::size_t>(config.dim),
            static_cast<std::size_t>(config.dim)};
}

std::span<double> EmbeddingModel::output(std::size_t idx) {
    return {output_vectors.data() + idx * static_cast<std::size_t>(config.dim),
            static_cast<std::size_t>(config.dim)};
}

std::span<const double> EmbeddingModel::output(std::size_t idx) const {
    return {output_vectors.data() + idx * static_cast<std::size_t>(config.dim),
            static_cast<std::size_t>(config.dim)};
}

std::span<const double> EmbeddingModel::vector_of(std::string_view key) const {
    std::int32_t idx = vocab.find(key);
    if (idx < 0)
        throw ConfigError("key \"" + std::string(key) + "\" not in model vocabulary");
    return input(static_cast<std::size_t>(idx));
}

EmbeddingModel init_model(const corpus::Vocabulary& vocab, const TrainConfig& config) {
    config.validate();
    if (vocab.size() == 0) throw ConfigError("cannot init model on empty vocabulary");
    EmbeddingModel model;
    model.vocab = vocab;
    model.config = config;
    std::size_t cells = vocab.size() * static_cast<std::size_t>(config.dim);
    model.input_vectors.resize(cells);
    model.output_vectors.assign(cells, 0.0);
    Rng rng(derive_seed(config.seed, "init"));
    double half = 0.5 / config.dim;
    for (double& v : model.input_vectors) v = rng.uniform(-half, half);
    return model;
}

NoiseDistribution::NoiseDistribution(const corpus::Vocabulary& vocab, double power) {
    if (vocab.size() == 0)
        throw ConfigError("noise distribution needs a non-empty vocabulary");
    if (power < 0.0) throw ConfigError("unigram power must be >= 0");
    std::size_t n = vocab.size();
    probs_.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        probs_[i] = std::pow(static_cast<double>(vocab.freqs[i]), power);
        total += probs_[i];
    }
    for (double& p : probs_) p /= total;

    // Vose alias construction; the two worklists are filled in index order
    // so the table is deterministic.
    accept_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = probs_[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        std::uint32_t s = small.back();
        small.pop_back();
        std::uint32_t l = large.back();
        large.pop_back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) accept_[i] = 1.0;
    for (std::uint32_t i : small) accept_[i] = 1.0;
}

std::size_t NoiseDistribution::sample(Rng& rng) const {
    std::size_t slot = static_cast<std::size_t>(rng.uniform_int(probs_.size()));
    return rng.uniform() < accept_[slot] ? slot : alias_[slot];
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sigmoid(double x) {
    // -log(1 + e^-x), evaluated on the side that cannot overflow.
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

SgnsGradients sgns_gradients(std::span<const double> center,
                             std::span<const double> context,
                             const std::vector<std::span<const double>>& negatives) {
    std::size_t dim = center.size();
    if (context.size() != dim)
        throw ConfigError("context vector dimensionality mismatch");
    for (const auto& neg : negatives)
        if (neg.size() != dim)
            throw ConfigError("negative vector dimensionality mismatch");

    SgnsGradients g;
    g.center.assign(dim, 0.0);
    g.context.assign(dim, 0.0);
    g.negatives.resize(negatives.size());

    double s_pos = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s_pos += context[j] * center[j];
    g.loss = -log_sigmoid(s_pos);
    double coeff_pos = sigmoid(s_pos) - 1.0;
    for (std::size_t j = 0; j < dim; ++j) {
        g.center[j] += coeff_pos * context[j];
        g.context[j] = coeff_pos * center[j];
    }
    for (std::size_t k = 0; k < negatives.size(); ++k) {
        double s_neg = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s_neg += negatives[k][j] * center[j];
        g.loss -= log_sigmoid(-s_neg);
        double coeff = sigmoid(s_neg);
        g.negatives[k].assign(dim, 0.0);
        for (std::size_t j = 0; j < dim; ++j) {
            g.center[j] += coeff * negatives[k][j];
            g.negatives[k][j] = coeff * center[j];
        }
    }
    return g;
}

namespace {

// Sentences mapped to vocabulary indices, out-of-vocabulary tokens dropped.
std::vector<std::vector<std::int32_t>> index_stream(const corpus::TokenStream& stream,
                                                    const corpus::Vocabulary& vocab) {
    std::vector<std::vector<std::int32_t>> indexed;
    indexed.reserve(stream.size());
    for (const auto& sentence : stream) {
        std::vector<std::int32_t> ids;
        ids.reserve(sentence.size());
        for (const auto& key : sentence) {
            std::int32_t idx = vocab.find(key);
            if (idx >= 0) ids.push_back(idx);
        }
        if (!ids.empty()) indexed.push_back(std::move(ids));
    }
    return indexed;
}

std::int64_t count_pairs(const std::vector<std::vector<std::int32_t>>& sentences,
                         int window) {
    std::int64_t pairs = 0;
    for (const auto& s : sentences) {
        std::int64_t len = static_cast<std::int64_t>(s.size());
        for (std::int64_t i = 0; i < len; ++i) {
            std::int64_t lo = std::max<std::int64_t>(0, i - window);
            std::int64_t hi = std::min<std::int64_t>(len - 1, i + window);
            pairs += hi - lo;  // the [lo, hi] range minus the center itself
        }
    }
    return pairs;
}

struct WorkerResult {
    double loss_ema = 0.0;
    std::int64_t pairs = 0;
};

}  // namespace

EmbeddingModel train_skipgram(const corpus::TokenStream& stream,
                              const corpus::Vocabulary& vocab,
                              const TrainConfig& config,
                              int threads,
                              std::vector<EpochStats>* stats_out,
                              std::ostream* progress) {
    config.validate();
    if (threads < 1) throw ConfigError("threads must be >= 1");
    auto sentences = index_stream(stream, vocab);
    std::int64_t pairs_per_epoch = count_pairs(sentences, config.window);
    if (sentences.empty() || pairs_per_epoch == 0)
        throw ConfigError("stream has no trainable in-vocabulary pairs");

    EmbeddingModel model = init_model(vocab, config);
    NoiseDistribution noise(vocab, config.unigram_power);
    const std::int64_t total_pairs = pairs_per_epoch * config.epochs;
    const double lr_floor = config.initial_lr * 1e-4;
    const int dim = config.dim;

    // Keep probabilities for frequent-word down-sampling (word2vec rule);
    // empty when disabled.
    std::vector<double> keep_prob;
    if (config.subsample_threshold > 0.0) {
        keep_prob.resize(vocab.size());
        double total = static_cast<double>(std::max<std::int64_t>(1, vocab.total_tokens));
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            double f = static_cast<double>(vocab.freqs[i]) / total;
            double p = std::sqrt(config.subsample_threshold / f) +
                       config.subsample_threshold / f;
            keep_prob[i] = std::min(1.0, p);
        }
    }

    std::atomic<std::int64_t> pairs_done{0};

    auto run_worker = [&](int epoch, int worker, WorkerResult& result) {
        Rng rng(derive_seed(config.seed, "train-e" + std::to_string(epoch) +
                                            "-w" + std::to_string(worker)));
        std::vector<double> center_grad(static_cast<std::size_t>(dim));
        std::vector<std::int32_t> kept;
        double ema = 0.0;
        bool ema_started = false;
        std::int64_t local_pairs = 0;
        double lr = config.initial_lr;

        for (std::size_t si = static_cast<std::size_t>(worker); si < sentences.size();
             si += static_cast<std::size_t>(threads)) {
            const std::vector<std::int32_t>* sent = &sentences[si];
            if (!keep_prob.empty()) {
                kept.clear();
                for (std::int32_t id : *sent)
                    if (rng.uniform() < keep_prob[static_cast<std::size_t>(id)])
                        kept.push_back(id);
                sent = &kept;
            }
            std::int64_t len = static_cast<std::int64_t>(sent->size());
            for (std::int64_t i = 0; i < len; ++i) {
                std::int32_t center_id = (*sent)[static_cast<std::size_t>(i)];
                double* center = model.input_vectors.data() +
                                 static_cast<std::size_t>(center_id) * dim;
                std::int64_t lo = std::max<std::int64_t>(0, i - config.window);
                std::int64_t hi = std::min<std::int64_t>(len - 1, i + config.window);
                for (std::int64_t j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    std::int32_t context_id = (*sent)[static_cast<std::size_t>(j)];

                    if ((local_pairs & 63) == 0) {
                        std::int64_t done = pairs_done.load(std::memory_order_relaxed) +
                                            local_pairs;
                        double frac = static_cast<double>(done) /
                                      static_cast<double>(total_pairs);
                        lr = std::max(lr_floor, config.initial_lr * (1.0 - frac));
                    }

                    std::fill(center_grad.begin(), center_grad.end(), 0.0);
                    double pair_loss = 0.0;

                    // Positive target, then the negative draws. Output rows
                    // are updated against the pre-update center vector; the
                    // accumulated center gradient is applied last.
                    {
                        double* ctx = model.output_vectors.data() +
                                      static_cast<std::size_t>(context_id) * dim;
                        double s = 0.0;
                        for (int d = 0; d < dim; ++d) s += ctx[d] * center[d];
                        pair_loss -= log_sigmoid(s);
                        double coeff = sigmoid(s) - 1.0;
                        for (int d = 0; d < dim; ++d) {
                            center_grad[static_cast<std::size_t>(d)] += coeff * ctx[d];
                            ctx[d] -= lr * coeff * center[d];
                        }
                    }
                    for (int k = 0; k < config.negatives; ++k) {
                        std::int32_t neg_id =
                            static_cast<std::int32_t>(noise.sample(rng));
                        if (neg_id == context_id) continue;  // collided with the target
                        double* neg = model.output_vectors.data() +
                                      static_cast<std::size_t>(neg_id) * dim;
                        double s = 0.0;
                        for (int d = 0; d < dim; ++d) s += neg[d] * center[d];
                        pair_loss -= log_sigmoid(-s);
                        double coeff = sigmoid(s);
                        for (int d = 0; d < dim; ++d) {
                            center_grad[static_cast<std::size_t>(d)] += coeff * neg[d];
                            neg[d] -= lr * coeff * center[d];
                        }
                    }
                    for (int d = 0; d < dim; ++d)
                        center[d] -= lr * center_grad[static_cast<std::size_t>(d)];

                    if (!ema_started) {
                        ema = pair_loss;
                        ema_started = true;
                    } else {
                        ema += 1e-3 * (pair_loss - ema);
                    }
                    ++local_pairs;
                }
            }
        }
        pairs_done.fetch_add(local_pairs, std::memory_order_relaxed);
        result.loss_ema = ema;
        result.pairs = local_pairs;
    };

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::vector<WorkerResult> results(static_cast<std::size_t>(threads));
        if (threads == 1) {
            run_worker(epoch, 0, results[0]);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            for (int w = 0; w < threads; ++w)
                pool.emplace_back(run_worker, epoch, w,
                                  std::ref(results[static_cast<std::size_t>(w)]));
            for (auto& t : pool) t.join();
        }
        double loss = 0.0;
        std::int64_t epoch_pairs = 0;
        for (const auto& r : results) {
            loss += r.loss_ema * static_cast<double>(r.pairs);
            epoch_pairs += r.pairs;
        }
        if (epoch_pairs > 0) loss /= static_cast<double>(epoch_pairs);
        std::int64_t done = pairs_done.load();
        double lr_now = std::max(
            lr_floor, config.initial_lr *
                          (1.0 - static_cast<double>(done) /
                                     static_cast<double>(total_pairs)));
        EpochStats st{epoch, done, loss, lr_now};
        if (stats_out) stats_out->push_back(st);
        if (progress)
            *progress << "epoch " << epoch << "/" << config.epochs << " pairs "
                      << done << " loss " << fmt_g(loss, 6) << " lr "
                      << fmt_g(lr_now, 6) << "\n";
    }
    return model;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ConfigError("cosine: dimensionality mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw ConfigError("cosine undefined for a zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

void save_text(const EmbeddingModel& model, std::ostream& out) {
    out << model.size() << ' ' << model.dim() << '\n';
    for (std::size_t i = 0; i < model.size(); ++i) {
        out << model.vocab.keys[i];
        auto row = model.input(i);
        for (double v : row) out << ' ' << fmt_g(v, 6);
        out << '\n';
    }
}

EmbeddingModel load_text(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty model file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t n = 0;
    int dim = 0;
    {
        const char* begin = line.data();
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(begin, end, n);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ' ')
            throw ParseError(1, "malformed header \"" + line + "\"");
        auto r2 = std::from_chars(r1.ptr + 1, end, dim);
        if (r2.ec != std::errc() || r2.ptr != end)
            throw ParseError(1, "malformed header \"" + line + "\"");
    }
    if (n == 0 || dim < 1) throw ParseError(1, "header declares an empty model");

    EmbeddingModel model;
    model.config.dim = dim;
    model.config.min_count = 1;
    model.input_vectors.reserve(n * static_cast<std::size_t>(dim));
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (rows == n)
            throw ParseError(lineno, "more rows than the header's " +
                                         std::to_string(n));
        std::size_t sp = line.find(' ');
        if (sp == std::string::npos || sp == 0)
            throw ParseError(lineno, "missing key or vector");
        std::string key = line.substr(0, sp);
        if (model.vocab.index.contains(key))
            throw ParseError(lineno, "duplicate key \"" + key + "\"");
        const char* p = line.data() + sp;
        const char* end = line.data() + line.size();
        int got = 0;
        while (p < end) {
            while (p < end && *p == ' ') ++p;
            if (p == end) break;
            double v = 0.0;
            auto r = std::from_chars(p, end, v);
            if (r.ec != std::errc())
                throw ParseError(lineno, "bad vector component");
            if (!std::isfinite(v))
                throw ParseError(lineno, "non-finite vector component");
            if (got == dim)
                throw ParseError(lineno, "row has more than " +
                                             std::to_string(dim) + " components");
            model.input_vectors.push_back(v);
            ++got;
            p = r.ptr;
        }
        if (got != dim)
            throw ParseError(lineno, "row has " + std::to_string(got) +
                                         " components, expected " +
                                         std::to_string(dim));
        model.vocab.index.emplace(key, static_cast<std::int32_t>(rows));
        model.vocab.keys.push_back(std::move(key));
        model.vocab.freqs.push_back(1);
        ++rows;
    }
    if (rows != n)
        throw ParseError(lineno, "header declared " + std::to_string(n) +
                                     " rows but file has " + std::to_string(rows));
    model.vocab.total_tokens = static_cast<std::int64_t>(n);
    model.output_vectors.assign(model.input_vectors.size(), 0.0);
    return model;
}

}  // namespace poslens::embeddings
