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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poslens/analysis.hpp"
#include "poslens/classifier.hpp"
#include "poslens/common.hpp"
#include "poslens/corpus.hpp"
#include "poslens/embeddings.hpp"
#include "poslens/features.hpp"
#include "poslens/prototypes.hpp"
#include "poslens/report.hpp"

namespace fs = std::filesystem;
using namespace poslens;

namespace {

constexpr const char* kVersion = "1.0.0";

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// Re-raise parse errors as "<file>:<line>: ...".
template <typename Fn>
auto with_file_context(const fs::path& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw std::runtime_error(path.string() + ":" + std::to_string(e.line()) +
                                 ": " + e.what());
    }
}

corpus::TaggedCorpus read_corpus(const fs::path& path, const std::string& format) {
    auto in = open_input(path);
    return with_file_context(path, [&] {
        return format == "conllu" ? corpus::parse_conllu(in, path.string())
                                  : corpus::parse_vertical(in, path.string());
    });
}

corpus::TagMap read_tag_map(const fs::path& path) {
    auto in = open_input(path);
    return with_file_context(path, [&] { return corpus::TagMap::load_tsv(in); });
}

corpus::Vocabulary read_vocabulary(const fs::path& path) {
    auto in = open_input(path);
    return with_file_context(path, [&] { return corpus::load_vocabulary(in); });
}

embeddings::EmbeddingModel read_model(const fs::path& path) {
    auto in = open_input(path);
    return with_file_context(path, [&] { return embeddings::load_text(in); });
}

classifier::LinearClassifier read_classifier(const fs::path& path) {
    auto in = open_input(path);
    return with_file_context(path,
                             [&] { return classifier::LinearClassifier::load(in); });
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

// Metrics over tag strings: the class space is the sorted union of gold and
// predicted tags.
struct TagMetrics {
    classifier::Metrics metrics;
    std::vector<std::string> classes;
    std::vector<int> gold, pred;
};

TagMetrics metrics_from_tags(const std::vector<std::string>& gold_tags,
                             const std::vector<std::string>& pred_tags,
                             const std::vector<double>& weights) {
    std::set<std::string> space(gold_tags.begin(), gold_tags.end());
    space.insert(pred_tags.begin(), pred_tags.end());
    TagMetrics out;
    out.classes.assign(space.begin(), space.end());
    std::map<std::string, int> idx;
    for (std::size_t c = 0; c < out.classes.size(); ++c)
        idx[out.classes[c]] = static_cast<int>(c);
    out.gold.reserve(gold_tags.size());
    out.pred.reserve(pred_tags.size());
    for (const auto& t : gold_tags) out.gold.push_back(idx[t]);
    for (const auto& t : pred_tags) out.pred.push_back(idx[t]);
    out.metrics =
        classifier::compute_metrics(out.gold, out.pred, weights, out.classes);
    return out;
}

void write_summary_tsv(const fs::path& path,
                       const std::vector<std::pair<std::string, std::string>>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& [k, v] : rows) cells.push_back({k, v});
    report::write_tsv(path, {"key", "value"}, cells);
}

void append_metrics_rows(std::vector<std::pair<std::string, std::string>>& rows,
                         const classifier::Metrics& m, const std::string& prefix) {
    rows.emplace_back(prefix + "accuracy", fmt_g(m.accuracy, 9));
    rows.emplace_back(prefix + "weighted_precision", fmt_g(m.weighted_precision, 9));
    rows.emplace_back(prefix + "weighted_recall", fmt_g(m.weighted_recall, 9));
    rows.emplace_back(prefix + "weighted_f1", fmt_g(m.weighted_f1, 9));
}

void write_per_class_tsv(const fs::path& path, const classifier::Metrics& m) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : m.per_class)
        rows.push_back({c.tag, fmt_g(c.precision, 9), fmt_g(c.recall, 9),
                        fmt_g(c.f1, 9), fmt_g(c.support, 9)});
    report::write_tsv(path, {"tag", "precision", "recall", "f1", "support"}, rows);
}

corpus::StreamMode parse_mode(const std::string& mode) {
    if (mode == "lemma_tag") return corpus::StreamMode::lemma_tag;
    if (mode == "lemma") return corpus::StreamMode::lemma;
    throw ConfigError("unknown mode \"" + mode + "\"");
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
    std::string corpus_path, format = "vertical", tag_map_path, mode = "lemma_tag";
    std::int64_t min_count = 5;
    std::string out_dir;
};

void run_ingest(const IngestArgs& args) {
    if (args.min_count < 1) throw ConfigError("min-count must be >= 1");
    parse_mode(args.mode);
    corpus::TagMap map = read_tag_map(args.tag_map_path);
    corpus::TaggedCorpus raw = read_corpus(args.corpus_path, args.format);
    corpus::TaggedCorpus mapped;
    try {
        mapped = corpus::apply_tag_map(raw, map);
    } catch (const ConfigError& e) {
        throw std::runtime_error(args.corpus_path + ": " + e.what());
    }
    corpus::TokenStream stream =
        corpus::to_token_stream(mapped, parse_mode(args.mode));
    corpus::Vocabulary vocab = corpus::build_vocabulary(stream, args.min_count);

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);
    {
        auto out = open_output(dir / "normalized.vert");
        corpus::serialize_vertical(mapped, out);
    }
    {
        auto out = open_output(dir / "vocab.tsv");
        corpus::save_vocabulary(vocab, out);
    }

    std::map<std::string, std::int64_t> tag_totals;
    for (const auto& sentence : mapped.sentences)
        for (const auto& tok : sentence) ++tag_totals[tok.tag];
    std::set<std::string> stream_tags;
    for (const auto& [tag, n] : tag_totals)
        if (tag != "PUNCT") stream_tags.insert(tag);

    std::int64_t stream_tokens = 0;
    for (const auto& s : stream) stream_tokens += static_cast<std::int64_t>(s.size());

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("source", args.corpus_path);
    rows.emplace_back("format", args.format);
    rows.emplace_back("mode", args.mode);
    rows.emplace_back("sentences", std::to_string(mapped.sentences.size()));
    rows.emplace_back("tokens", std::to_string(mapped.token_count()));
    rows.emplace_back("stream_tokens", std::to_string(stream_tokens));
    rows.emplace_back("distinct_stream_tags", std::to_string(stream_tags.size()));
    rows.emplace_back("min_count", std::to_string(args.min_count));
    rows.emplace_back("vocab_types", std::to_string(vocab.size()));
    rows.emplace_back("vocab_total_tokens", std::to_string(vocab.total_tokens));
    for (const auto& [tag, n] : tag_totals)
        rows.emplace_back("tag_" + tag, std::to_string(n));
    write_summary_tsv(dir / "summary.tsv", rows);

    std::cout << "ingested " << mapped.token_count() << " tokens, "
              << vocab.size() << " vocabulary types\n";
}

// ---------------------------------------------------------------------------
// train-embeddings

struct TrainEmbeddingsArgs {
    std::string corpus_path, mode = "lemma_tag", out_path;
    embeddings::TrainConfig config;
    int threads = 1;
};

void run_train_embeddings(const TrainEmbeddingsArgs& args) {
    args.config.validate();
    if (args.threads < 1) throw ConfigError("threads must be >= 1");
    parse_mode(args.mode);
    corpus::TaggedCorpus normalized = read_corpus(args.corpus_path, "vertical");
    corpus::TokenStream stream =
        corpus::to_token_stream(normalized, parse_mode(args.mode));
    corpus::Vocabulary vocab =
        corpus::build_vocabulary(stream, args.config.min_count);
    embeddings::EmbeddingModel model = embeddings::train_skipgram(
        stream, vocab, args.config, args.threads, nullptr, &std::cerr);
    auto out = open_output(args.out_path);
    embeddings::save_text(model, out);
    std::cout << "trained " << model.size() << " vectors of dimension "
              << model.dim() << "\n";
}

// ---------------------------------------------------------------------------
// train-classifier

struct TrainClassifierArgs {
    std::string model_path, vocab_path, out_dir;
    std::size_t top_n = 10000;
    std::string weighting = "frequency";
    classifier::FitOptions fit;
    int cv_folds = 10;
    std::uint64_t seed = 1;
    bool skip_baseline = false;
};

// Band or top-n keys restricted to the model, with vocabulary frequencies as
// weights and the key's tag part as the label.
struct KeyedDataset {
    classifier::LabeledDataset dataset;
    std::vector<std::int64_t> freqs;
    std::size_t skipped_oov = 0;
};

KeyedDataset dataset_from_keys(const embeddings::EmbeddingModel& model,
                               const corpus::Vocabulary& vocab,
                               const std::vector<std::string>& keys,
                               bool frequency_weighted) {
    KeyedDataset out;
    std::vector<std::string> words, labels;
    std::vector<double> weights;
    for (const auto& key : keys) {
        if (model.vocab.find(key) < 0) {
            ++out.skipped_oov;
            continue;
        }
        auto [lemma, tag] = corpus::split_key(key);
        std::int32_t vi = vocab.find(key);
        std::int64_t freq =
            vi >= 0 ? vocab.freqs[static_cast<std::size_t>(vi)] : 1;
        words.push_back(key);
        labels.push_back(tag);
        weights.push_back(frequency_weighted ? static_cast<double>(freq) : 1.0);
        out.freqs.push_back(freq);
    }
    if (words.empty()) throw ConfigError("no usable keys for the dataset");
    out.dataset = classifier::build_dataset(model, words, labels, weights);
    return out;
}

void run_train_classifier(const TrainClassifierArgs& args) {
    args.fit.validate();
    if (args.cv_folds < 2) throw ConfigError("cv-folds must be >= 2");
    if (args.top_n < 1) throw ConfigError("top-n must be >= 1");
    embeddings::EmbeddingModel model = read_model(args.model_path);
    corpus::Vocabulary vocab = read_vocabulary(args.vocab_path);
    std::vector<std::string> keys = corpus::top_frequent(vocab, args.top_n);
    KeyedDataset data = dataset_from_keys(model, vocab, keys,
                                          args.weighting == "frequency");

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);

    classifier::Metrics cv = classifier::cross_validate(
        data.dataset, args.cv_folds, args.seed, args.fit, nullptr, &std::cerr);
    classifier::LinearClassifier clf = classifier::fit(data.dataset, args.fit);
    {
        auto out = open_output(dir / "classifier.txt");
        clf.save(out);
    }

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("instances", std::to_string(data.dataset.size()));
    rows.emplace_back("weight_sum", fmt_g(data.dataset.weights.sum(), 9));
    rows.emplace_back("classes", std::to_string(data.dataset.classes.size()));
    rows.emplace_back("skipped_oov", std::to_string(data.skipped_oov));
    rows.emplace_back("cv_folds", std::to_string(args.cv_folds));
    append_metrics_rows(rows, cv, "cv_");
    write_summary_tsv(dir / "cv_metrics.tsv", rows);
    write_per_class_tsv(dir / "cv_per_class.tsv", cv);

    if (!args.skip_baseline) {
        classifier::BaselineResult baseline = classifier::one_feature_baseline(
            data.dataset, args.cv_folds, args.seed, args.fit);
        std::vector<std::pair<std::string, std::string>> brows;
        brows.emplace_back("dimension", std::to_string(baseline.dimension));
        append_metrics_rows(brows, baseline.cv, "cv_");
        append_metrics_rows(brows, baseline.train, "train_");
        write_summary_tsv(dir / "baseline.tsv", brows);
    }
    std::cout << "cv accuracy " << fmt_g(cv.accuracy, 6) << " weighted F1 "
              << fmt_g(cv.weighted_f1, 6) << "\n";
}

// ---------------------------------------------------------------------------
// evaluate / outliers

struct EvaluateArgs {
    std::string model_path, vocab_path, clf_path, out_dir;
    std::int64_t lo = 100, hi = 500;
    std::vector<std::string> exclude_gold = {"X"};
    bool outliers_only = false;
};

void run_evaluate(const EvaluateArgs& args) {
    if (args.lo > args.hi) throw ConfigError("band requires lo <= hi");
    embeddings::EmbeddingModel model = read_model(args.model_path);
    corpus::Vocabulary vocab = read_vocabulary(args.vocab_path);
    classifier::LinearClassifier clf = read_classifier(args.clf_path);

    std::vector<std::string> band = corpus::frequency_band(vocab, args.lo, args.hi);
    KeyedDataset data = dataset_from_keys(model, vocab, band, true);
    if (data.dataset.size() == 0) throw ConfigError("empty test band");

    const auto n = static_cast<Eigen::Index>(data.dataset.size());
    std::vector<std::string> gold_tags(data.dataset.size()),
        pred_tags(data.dataset.size());
    Eigen::MatrixXd proba(n, clf.num_classes());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& key = data.dataset.keys[static_cast<std::size_t>(i)];
        gold_tags[static_cast<std::size_t>(i)] = corpus::split_key(key).second;
        Eigen::VectorXd p = clf.proba(data.dataset.x.row(i).transpose());
        proba.row(i) = p.transpose();
        int best = 0;
        for (int c = 1; c < clf.num_classes(); ++c)
            if (p[c] > p[best]) best = c;
        pred_tags[static_cast<std::size_t>(i)] =
            clf.classes[static_cast<std::size_t>(best)];
    }

    std::vector<double> weights(data.dataset.size());
    for (std::size_t i = 0; i < data.dataset.size(); ++i)
        weights[i] = data.dataset.weights[static_cast<Eigen::Index>(i)];

    TagMetrics tm = metrics_from_tags(gold_tags, pred_tags, weights);

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);

    // Outlier report: probability columns mapped into the unified tag space.
    Eigen::MatrixXd proba_union = Eigen::MatrixXd::Zero(
        n, static_cast<Eigen::Index>(tm.classes.size()));
    {
        std::map<std::string, int> idx;
        for (std::size_t c = 0; c < tm.classes.size(); ++c)
            idx[tm.classes[c]] = static_cast<int>(c);
        for (int c = 0; c < clf.num_classes(); ++c)
            proba_union.col(idx.at(clf.classes[static_cast<std::size_t>(c)])) =
                proba.col(c);
    }
    std::set<std::string> exclude(args.exclude_gold.begin(),
                                  args.exclude_gold.end());
    analysis::OutlierReport outliers =
        analysis::list_outliers(data.dataset.keys, tm.gold, tm.pred, proba_union,
                                data.freqs, exclude, tm.classes);
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : outliers)
            rows.push_back({r.key, r.gold, r.pred, fmt_g(r.confidence, 9),
                            std::to_string(r.frequency)});
        report::write_tsv(dir / "outliers.tsv",
                          {"key", "gold", "predicted", "confidence", "frequency"},
                          rows);
    }
    if (args.outliers_only) {
        std::cout << outliers.size() << " outliers\n";
        return;
    }

    analysis::ConfusionMatrix cm = analysis::confusion_matrix(
        tm.gold, tm.pred, weights, data.dataset.keys, tm.classes);
    {
        std::vector<std::vector<std::string>> type_cells, weight_cells;
        for (std::size_t g = 0; g < tm.classes.size(); ++g) {
            std::vector<std::string> trow, wrow;
            for (std::size_t p = 0; p < tm.classes.size(); ++p) {
                trow.push_back(std::to_string(cm.type_counts[g][p]));
                wrow.push_back(fmt_g(cm.weighted_counts[g][p], 9));
            }
            type_cells.push_back(trow);
            weight_cells.push_back(wrow);
        }
        report::write_square_csv(dir / "confusion_types.csv", tm.classes, type_cells);
        report::write_square_csv(dir / "confusion_weighted.csv", tm.classes,
                                 weight_cells);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : analysis::rank_errors_by_count(cm))
            rows.push_back({std::to_string(r.types), r.gold, r.pred});
        report::write_tsv(dir / "errors_by_count.tsv",
                          {"types", "gold", "predicted"}, rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : analysis::rank_errors_by_coverage(cm))
            rows.push_back({fmt_f(r.coverage, 2), fmt_g(r.coverage, 9), r.gold,
                            r.pred, std::to_string(r.types)});
        report::write_tsv(dir / "errors_by_coverage.tsv",
                          {"coverage", "coverage_exact", "gold", "predicted",
                           "types"},
                          rows);
    }

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("band_lo", std::to_string(args.lo));
    rows.emplace_back("band_hi", std::to_string(args.hi));
    rows.emplace_back("band_types", std::to_string(band.size()));
    rows.emplace_back("scored_types", std::to_string(data.dataset.size()));
    rows.emplace_back("skipped_oov", std::to_string(data.skipped_oov));
    rows.emplace_back("instances_weight_sum", fmt_g(data.dataset.weights.sum(), 9));
    std::string excluded_join;
    for (const auto& t : exclude)
        excluded_join += (excluded_join.empty() ? "" : ",") + t;
    rows.emplace_back("outlier_exclude_gold", excluded_join);
    rows.emplace_back("outliers", std::to_string(outliers.size()));
    append_metrics_rows(rows, tm.metrics, "");
    write_summary_tsv(dir / "metrics.tsv", rows);
    write_per_class_tsv(dir / "per_class_metrics.tsv", tm.metrics);

    std::cout << "band [" << args.lo << "," << args.hi << "] accuracy "
              << fmt_g(tm.metrics.accuracy, 6) << " weighted F1 "
              << fmt_g(tm.metrics.weighted_f1, 6) << ", " << outliers.size()
              << " outliers\n";
}

// ---------------------------------------------------------------------------
// centroids

struct CentroidsArgs {
    std::string model_path, out_dir;
    std::size_t top_n = 10000;
    bool frequency_weighted = false;
};

void run_centroids(const CentroidsArgs& args) {
    embeddings::EmbeddingModel model = read_model(args.model_path);
    std::vector<std::pair<std::string, std::string>> word_tags;
    std::size_t limit = std::min(args.top_n, model.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const auto& key = model.vocab.keys[i];
        word_tags.emplace_back(key, corpus::split_key(key).second);
    }
    analysis::CentroidTable table =
        analysis::pos_centroids(model, word_tags, args.frequency_weighted);

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : analysis::centroid_similarity_table(table))
            rows.push_back({fmt_g(r.cosine, 9), r.tag_a, r.tag_b});
        report::write_tsv(dir / "centroid_similarity.tsv",
                          {"cosine", "tag_a", "tag_b"}, rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t t = 0; t < table.tags.size(); ++t)
            for (std::size_t d = 0; d < table.centroids[t].size(); ++d)
                rows.push_back({table.tags[t], std::to_string(d),
                                fmt_g(table.centroids[t][d], 9)});
        report::write_tsv(dir / "centroid_components.tsv",
                          {"tag", "component", "value"}, rows);
    }
    for (std::size_t t = 0; t < table.tags.size(); ++t)
        report::write_bar_svg(dir / ("centroid_" + table.tags[t] + ".svg"),
                              "Centroid embedding for " + table.tags[t],
                              "component", "value", table.centroids[t]);
    if (!table.zero_tags.empty()) {
        std::cerr << "warning: zero centroid excluded for:";
        for (const auto& t : table.zero_tags) std::cerr << ' ' << t;
        std::cerr << "\n";
    }
    std::cout << table.tags.size() << " centroids over " << word_tags.size()
              << " words\n";
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterArgs {
    std::string model_path, out_dir;
    int k = 16;
    std::uint64_t seed = 1;
    int restarts = 10;
    std::size_t top_n = 10000;
};

void run_cluster(const ClusterArgs& args) {
    if (args.k < 1) throw ConfigError("k must be >= 1");
    if (args.restarts < 1) throw ConfigError("restarts must be >= 1");
    embeddings::EmbeddingModel model = read_model(args.model_path);
    std::size_t n = std::min(args.top_n, model.size());
    std::span<const double> data(model.input_vectors.data(),
                                 n * static_cast<std::size_t>(model.dim()));
    double inertia = 0.0;
    std::vector<int> labels = analysis::kmeans_cluster(
        data, n, model.dim(), args.k, args.seed, args.restarts, &inertia);

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < n; ++i)
            rows.push_back({model.vocab.keys[i],
                            std::to_string(labels[i])});
        report::write_tsv(dir / "cluster_labels.tsv", {"key", "cluster"}, rows);
    }

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("points", std::to_string(n));
    rows.emplace_back("k", std::to_string(args.k));
    rows.emplace_back("restarts", std::to_string(args.restarts));
    rows.emplace_back("inertia", fmt_g(inertia, 9));

    // Sanity check against the tag partition when keys carry tags.
    bool keyed = true;
    std::vector<int> tag_labels(n, 0);
    std::map<std::string, int> tag_ids;
    for (std::size_t i = 0; i < n && keyed; ++i) {
        try {
            auto [lemma, tag] = corpus::split_key(model.vocab.keys[i]);
            tag_labels[i] = tag_ids.emplace(tag, static_cast<int>(tag_ids.size()))
                                .first->second;
        } catch (const ConfigError&) {
            keyed = false;
        }
    }
    if (keyed && tag_ids.size() > 1) {
        rows.emplace_back("ari_vs_tags",
                          fmt_g(analysis::adjusted_rand_index(labels, tag_labels), 9));
        rows.emplace_back(
            "ami_vs_tags",
            fmt_g(analysis::adjusted_mutual_info(labels, tag_labels), 9));
    }
    write_summary_tsv(dir / "cluster_summary.tsv", rows);
    std::cout << "clustered " << n << " points into " << args.k
              << " groups, inertia " << fmt_g(inertia, 6) << "\n";
}

// ---------------------------------------------------------------------------
// feature-rank

struct FeatureRankArgs {
    std::string model_path, vocab_path, out_dir;
    std::size_t top_n = 10000;
    std::string weighting = "frequency";
    std::vector<int> ks;
    classifier::FitOptions fit;
};

void run_feature_rank(const FeatureRankArgs& args) {
    args.fit.validate();
    for (int k : args.ks)
        if (k < 1) throw ConfigError("curve k values must be >= 1");
    embeddings::EmbeddingModel model = read_model(args.model_path);
    corpus::Vocabulary vocab = read_vocabulary(args.vocab_path);
    std::vector<std::string> keys = corpus::top_frequent(vocab, args.top_n);
    KeyedDataset data = dataset_from_keys(model, vocab, keys,
                                          args.weighting == "frequency");

    features::FeatureRanking ranking =
        features::anova_f_scores(data.dataset, &std::cerr);

    std::vector<int> ks = args.ks;
    if (ks.empty()) {
        for (int k : {1, 2, 3, 5, 10, 20, 50, 100, 150, 200, 250, 300})
            if (k <= model.dim()) ks.push_back(k);
    }
    if (std::find(ks.begin(), ks.end(), model.dim()) == ks.end())
        ks.push_back(model.dim());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<features::CurvePoint> curve = features::top_k_accuracy_curve(
        data.dataset, ranking, ks, args.fit, &std::cerr);

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);
    {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t r = 0; r < ranking.order.size(); ++r) {
            int d = ranking.order[r];
            rows.push_back({std::to_string(r), std::to_string(d),
                            fmt_g(ranking.f_values[static_cast<std::size_t>(d)], 9)});
        }
        report::write_tsv(dir / "f_values.tsv", {"rank", "dimension", "f_value"},
                          rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        std::vector<double> xs, ys;
        for (const auto& p : curve) {
            rows.push_back({std::to_string(p.k), fmt_g(p.accuracy, 9)});
            xs.push_back(p.k);
            ys.push_back(p.accuracy);
        }
        report::write_tsv(dir / "curve.tsv", {"k", "accuracy"}, rows);
        report::write_line_svg(dir / "curve.svg",
                               "Accuracy vs number of top-ranked components",
                               "k", "training accuracy", xs, ys);
    }
    std::cout << "ranked " << ranking.order.size() << " dimensions, "
              << curve.size() << " curve points\n";
}

// ---------------------------------------------------------------------------
// prototype

struct PrototypeArgs {
    std::string train_path, test_path, model_path, tag_map_path, out_dir;
    std::string format = "conllu";
    prototypes::PrototypeConfig proto;
    std::vector<std::string> excluded = {"PUNCT", "X", "SYM"};
    classifier::FitOptions fit;
    int cv_folds = 10;
    std::uint64_t seed = 1;
    bool oov_fallback = false;
};

void run_prototype(const PrototypeArgs& args) {
    prototypes::PrototypeConfig config = args.proto;
    config.excluded = {args.excluded.begin(), args.excluded.end()};
    config.validate();
    args.fit.validate();
    if (args.cv_folds < 2) throw ConfigError("cv-folds must be >= 2");
    embeddings::EmbeddingModel model = read_model(args.model_path);
    corpus::TaggedCorpus train = read_corpus(args.train_path, args.format);
    corpus::TaggedCorpus test = read_corpus(args.test_path, args.format);
    if (!args.tag_map_path.empty()) {
        corpus::TagMap map = read_tag_map(args.tag_map_path);
        try {
            train = corpus::apply_tag_map(train, map);
            test = corpus::apply_tag_map(test, map);
        } catch (const ConfigError& e) {
            throw std::runtime_error("tag mapping failed: " + std::string(e.what()));
        }
    }

    prototypes::LemmaTagCounts counts = prototypes::collect_lemma_tag_counts(train);
    prototypes::PrototypeLexicon lexicon =
        prototypes::extract_prototypes(counts, config);
    prototypes::PrototypeTrainResult trained =
        prototypes::train_prototype_classifier(model, lexicon, counts, args.fit);
    classifier::Metrics cv = classifier::cross_validate(
        trained.dataset, args.cv_folds, args.seed, args.fit, nullptr, &std::cerr);

    std::optional<std::string> fallback;
    if (args.oov_fallback) {
        // Majority tag by training weight mass.
        std::map<std::string, double> mass;
        for (std::size_t i = 0; i < trained.dataset.size(); ++i)
            mass[trained.dataset.classes[static_cast<std::size_t>(
                trained.dataset.labels[i])]] +=
                trained.dataset.weights[static_cast<Eigen::Index>(i)];
        double best = -1.0;
        for (const auto& [tag, m] : mass)
            if (m > best) {
                best = m;
                fallback = tag;
            }
    }
    prototypes::TokenEvalResult eval =
        prototypes::evaluate_on_tokens(test, trained.clf, model, fallback);

    ensure_out_dir(args.out_dir);
    fs::path dir(args.out_dir);
    {
        auto out = open_output(dir / "lexicon.tsv");
        prototypes::save_lexicon(lexicon, counts, out);
    }
    {
        auto out = open_output(dir / "prototype_classifier.txt");
        trained.clf.save(out);
    }
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("prototypes", std::to_string(lexicon.entries.size()));
    rows.emplace_back("prototypes_used", std::to_string(trained.used));
    rows.emplace_back("prototypes_oov", std::to_string(trained.oov));
    rows.emplace_back("classes", std::to_string(trained.dataset.classes.size()));
    rows.emplace_back("cv_folds", std::to_string(args.cv_folds));
    append_metrics_rows(rows, cv, "cv_");
    rows.emplace_back("test_scored_tokens", std::to_string(eval.scored_tokens));
    rows.emplace_back("test_oov_tokens", std::to_string(eval.oov_tokens));
    rows.emplace_back("test_oov_types", std::to_string(eval.oov_types));
    rows.emplace_back("oov_fallback", fallback ? *fallback : "off");
    if (eval.metrics) {
        append_metrics_rows(rows, *eval.metrics, "test_");
    } else {
        rows.emplace_back("test_metrics", "undefined (no scorable tokens)");
    }
    write_summary_tsv(dir / "prototype_eval.tsv", rows);
    if (eval.metrics)
        write_per_class_tsv(dir / "prototype_per_class.tsv", *eval.metrics);

    std::cout << "prototypes " << lexicon.entries.size() << " (used "
              << trained.used << ", oov " << trained.oov << "), cv accuracy "
              << fmt_g(cv.accuracy, 6);
    if (eval.metrics)
        std::cout << ", test accuracy " << fmt_g(eval.metrics->accuracy, 6);
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"poslens: part-of-speech boundary analysis over word embeddings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("poslens ") + kVersion);
    app.set_config("--config", "",
                   "Flat key=value file; keys are <subcommand>.<option>, e.g. "
                   "train-embeddings.dim=50. Flags override file values.");

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest",
                                      "Normalize a tagged corpus and build the "
                                      "vocabulary");
    ingest->add_option("--corpus", ingest_args.corpus_path, "Tagged corpus file")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--format", ingest_args.format, "vertical or conllu")
        ->check(CLI::IsMember({"vertical", "conllu"}));
    ingest->add_option("--tag-map", ingest_args.tag_map_path,
                       "Source-to-Universal tag map TSV")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--mode", ingest_args.mode, "lemma_tag or lemma")
        ->check(CLI::IsMember({"lemma_tag", "lemma"}));
    ingest->add_option("--min-count", ingest_args.min_count,
                       "Minimum corpus frequency");
    ingest->add_option("--out-dir", ingest_args.out_dir, "Output directory")
        ->required();
    ingest->callback([&] { run_ingest(ingest_args); });

    TrainEmbeddingsArgs emb_args;
    auto* emb = app.add_subcommand("train-embeddings",
                                   "Train skip-gram embeddings over a normalized "
                                   "corpus");
    emb->add_option("--corpus", emb_args.corpus_path,
                    "Normalized vertical corpus")
        ->required()
        ->check(CLI::ExistingFile);
    emb->add_option("--mode", emb_args.mode, "lemma_tag or lemma")
        ->check(CLI::IsMember({"lemma_tag", "lemma"}));
    emb->add_option("--dim", emb_args.config.dim, "Vector dimensionality");
    emb->add_option("--window", emb_args.config.window, "Symmetric window radius");
    emb->add_option("--negatives", emb_args.config.negatives,
                    "Negative samples per pair");
    emb->add_option("--epochs", emb_args.config.epochs, "Training passes");
    emb->add_option("--min-count", emb_args.config.min_count,
                    "Minimum corpus frequency");
    emb->add_option("--lr", emb_args.config.initial_lr, "Initial learning rate");
    emb->add_option("--sample", emb_args.config.subsample_threshold,
                    "Down-sampling threshold (0 disables)");
    emb->add_option("--power", emb_args.config.unigram_power,
                    "Noise distribution exponent");
    emb->add_option("--seed", emb_args.config.seed, "RNG seed");
    emb->add_option("--threads", emb_args.threads,
                    "Worker threads (1 = deterministic)");
    emb->add_option("--out", emb_args.out_path, "Model output path")->required();
    emb->callback([&] { run_train_embeddings(emb_args); });

    TrainClassifierArgs clf_args;
    auto* clf = app.add_subcommand("train-classifier",
                                   "Fit the frequency-weighted PoS classifier");
    clf->add_option("--model", clf_args.model_path, "Embedding model")
        ->required()
        ->check(CLI::ExistingFile);
    clf->add_option("--vocab", clf_args.vocab_path, "Vocabulary TSV")
        ->required()
        ->check(CLI::ExistingFile);
    clf->add_option("--top-n", clf_args.top_n, "Most frequent words to train on");
    clf->add_option("--weighting", clf_args.weighting, "frequency or uniform")
        ->check(CLI::IsMember({"frequency", "uniform"}));
    clf->add_option("--lambda", clf_args.fit.lambda, "L2 strength");
    clf->add_option("--tol", clf_args.fit.tol, "Gradient-norm tolerance");
    clf->add_option("--max-iter", clf_args.fit.max_iter, "Optimizer iteration cap");
    clf->add_option("--cv-folds", clf_args.cv_folds, "Cross-validation folds");
    clf->add_option("--seed", clf_args.seed, "RNG seed");
    clf->add_flag("--skip-baseline", clf_args.skip_baseline,
                  "Skip the one-feature baseline");
    clf->add_option("--out-dir", clf_args.out_dir, "Output directory")->required();
    clf->callback([&] { run_train_classifier(clf_args); });

    EvaluateArgs eval_args;
    auto* eval = app.add_subcommand("evaluate",
                                    "Score a frequency band and emit confusion, "
                                    "coverage and outlier reports");
    eval->add_option("--model", eval_args.model_path, "Embedding model")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--vocab", eval_args.vocab_path, "Vocabulary TSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--clf", eval_args.clf_path, "Classifier file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--lo", eval_args.lo, "Band lower frequency (inclusive)");
    eval->add_option("--hi", eval_args.hi, "Band upper frequency (inclusive)");
    eval->add_option("--exclude-gold", eval_args.exclude_gold,
                     "Gold tags excluded from the outlier report");
    eval->add_option("--out-dir", eval_args.out_dir, "Output directory")
        ->required();
    eval->callback([&] { run_evaluate(eval_args); });

    EvaluateArgs outlier_args;
    outlier_args.outliers_only = true;
    auto* outliers = app.add_subcommand("outliers",
                                        "Emit only the outlier report for a band");
    outliers->add_option("--model", outlier_args.model_path, "Embedding model")
        ->required()
        ->check(CLI::ExistingFile);
    outliers->add_option("--vocab", outlier_args.vocab_path, "Vocabulary TSV")
        ->required()
        ->check(CLI::ExistingFile);
    outliers->add_option("--clf", outlier_args.clf_path, "Classifier file")
        ->required()
        ->check(CLI::ExistingFile);
    outliers->add_option("--lo", outlier_args.lo, "Band lower frequency");
    outliers->add_option("--hi", outlier_args.hi, "Band upper frequency");
    outliers->add_option("--exclude-gold", outlier_args.exclude_gold,
                         "Gold tags excluded from the report");
    outliers->add_option("--out-dir", outlier_args.out_dir, "Output directory")
        ->required();
    outliers->callback([&] { run_evaluate(outlier_args); });

    CentroidsArgs cen_args;
    auto* cen = app.add_subcommand("centroids",
                                   "Per-tag centroid vectors and similarity table");
    cen->add_option("--model", cen_args.model_path, "Embedding model (lemma_tag)")
        ->required()
        ->check(CLI::ExistingFile);
    cen->add_option("--top-n", cen_args.top_n, "Words considered");
    cen->add_flag("--weighted", cen_args.frequency_weighted,
                  "Frequency-weighted centroids");
    cen->add_option("--out-dir", cen_args.out_dir, "Output directory")->required();
    cen->callback([&] { run_centroids(cen_args); });

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand("cluster",
                                       "K-means over embedding vectors with an "
                                       "ARI/AMI sanity check");
    cluster->add_option("--model", cluster_args.model_path, "Embedding model")
        ->required()
        ->check(CLI::ExistingFile);
    cluster->add_option("--k", cluster_args.k, "Number of clusters");
    cluster->add_option("--seed", cluster_args.seed, "RNG seed");
    cluster->add_option("--restarts", cluster_args.restarts, "k-means restarts");
    cluster->add_option("--top-n", cluster_args.top_n, "Words considered");
    cluster->add_option("--out-dir", cluster_args.out_dir, "Output directory")
        ->required();
    cluster->callback([&] { run_cluster(cluster_args); });

    FeatureRankArgs rank_args;
    auto* rank = app.add_subcommand("feature-rank",
                                    "ANOVA F ranking and top-k accuracy curve");
    rank->add_option("--model", rank_args.model_path, "Embedding model")
        ->required()
        ->check(CLI::ExistingFile);
    rank->add_option("--vocab", rank_args.vocab_path, "Vocabulary TSV")
        ->required()
        ->check(CLI::ExistingFile);
    rank->add_option("--top-n", rank_args.top_n, "Most frequent words to use");
    rank->add_option("--weighting", rank_args.weighting, "frequency or uniform")
        ->check(CLI::IsMember({"frequency", "uniform"}));
    rank->add_option("--ks", rank_args.ks, "Curve k values")->delimiter(',');
    rank->add_option("--lambda", rank_args.fit.lambda, "L2 strength");
    rank->add_option("--tol", rank_args.fit.tol, "Gradient-norm tolerance");
    rank->add_option("--max-iter", rank_args.fit.max_iter,
                     "Optimizer iteration cap");
    rank->add_option("--out-dir", rank_args.out_dir, "Output directory")
        ->required();
    rank->callback([&] { run_feature_rank(rank_args); });

    PrototypeArgs proto_args;
    auto* proto = app.add_subcommand("prototype",
                                     "Prototype lexicon, tagless classifier and "
                                     "token-level evaluation");
    proto->add_option("--train-treebank", proto_args.train_path,
                      "Training treebank")
        ->required()
        ->check(CLI::ExistingFile);
    proto->add_option("--test-treebank", proto_args.test_path, "Test treebank")
        ->required()
        ->check(CLI::ExistingFile);
    proto->add_option("--model", proto_args.model_path,
                      "Embedding model trained in lemma mode")
        ->required()
        ->check(CLI::ExistingFile);
    proto->add_option("--format", proto_args.format, "conllu or vertical")
        ->check(CLI::IsMember({"conllu", "vertical"}));
    proto->add_option("--tag-map", proto_args.tag_map_path,
                      "Optional tag map applied to both treebanks")
        ->check(CLI::ExistingFile);
    proto->add_option("--min-freq", proto_args.proto.min_freq,
                      "Minimum treebank frequency");
    proto->add_option("--dominance", proto_args.proto.dominance_ratio,
                      "Dominance ratio");
    proto->add_option("--excluded", proto_args.excluded,
                      "Tags never used as prototypes")
        ->delimiter(',');
    proto->add_option("--lambda", proto_args.fit.lambda, "L2 strength");
    proto->add_option("--tol", proto_args.fit.tol, "Gradient-norm tolerance");
    proto->add_option("--max-iter", proto_args.fit.max_iter,
                      "Optimizer iteration cap");
    proto->add_option("--cv-folds", proto_args.cv_folds, "Cross-validation folds");
    proto->add_option("--seed", proto_args.seed, "RNG seed");
    proto->add_flag("--oov-fallback", proto_args.oov_fallback,
                    "Predict the majority tag for out-of-vocabulary tokens");
    proto->add_option("--out-dir", proto_args.out_dir, "Output directory")
        ->required();
    proto->callback([&] { run_prototype(proto_args); });

    auto* version = app.add_subcommand("version", "Print the version");
    version->callback([] { std::cout << "poslens " << kVersion << "\n"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
