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

#include "poslens/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "poslens/features.hpp"

namespace poslens::classifier {

void LabeledDataset::validate() const {
    auto n = static_cast<std::size_t>(x.rows());
    if (labels.size() != n || keys.size() != n ||
        static_cast<std::size_t>(weights.size()) != n)
        throw ConfigError("dataset fields disagree on item count");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights[static_cast<Eigen::Index>(i)] > 0.0))
            throw ConfigError("non-positive weight for item \"" + keys[i] + "\"");
        if (labels[i] < 0 || labels[i] >= static_cast<int>(classes.size()))
            throw ConfigError("label out of range for item \"" + keys[i] + "\"");
    }
}

namespace {

LabeledDataset build_dataset_impl(const embeddings::EmbeddingModel& model,
                                  const std::vector<std::string>& words,
                                  const std::vector<std::string>& labels,
                                  const std::vector<double>& weights) {
    if (words.size() != labels.size() || words.size() != weights.size())
        throw ConfigError("words, labels and weights must align");

    std::vector<std::string> missing;
    for (const auto& w : words)
        if (model.vocab.find(w) < 0) missing.push_back(w);
    if (!missing.empty()) {
        std::string msg = "words not in model vocabulary:";
        std::size_t shown = std::min<std::size_t>(missing.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) msg += " " + missing[i];
        if (missing.size() > shown)
            msg += " (+" + std::to_string(missing.size() - shown) + " more)";
        throw ConfigError(msg);
    }

    std::set<std::string> distinct(labels.begin(), labels.end());
    LabeledDataset ds;
    ds.classes.assign(distinct.begin(), distinct.end());
    std::map<std::string, int> class_index;
    for (std::size_t c = 0; c < ds.classes.size(); ++c)
        class_index[ds.classes[c]] = static_cast<int>(c);

    auto n = static_cast<Eigen::Index>(words.size());
    ds.x.resize(n, model.dim());
    ds.weights.resize(n);
    ds.labels.resize(words.size());
    ds.keys = words;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto row = model.vector_of(words[static_cast<std::size_t>(i)]);
        for (int d = 0; d < model.dim(); ++d) ds.x(i, d) = row[static_cast<std::size_t>(d)];
        ds.weights[i] = weights[static_cast<std::size_t>(i)];
        ds.labels[static_cast<std::size_t>(i)] =
            class_index[labels[static_cast<std::size_t>(i)]];
    }
    ds.validate();
    return ds;
}

}  // namespace

LabeledDataset build_dataset(const embeddings::EmbeddingModel& model,
                             const std::vector<std::string>& words,
                             const std::vector<std::string>& labels,
                             WeightSource source) {
    std::vector<double> weights(words.size(), 1.0);
    if (source == WeightSource::frequency) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            std::int32_t idx = model.vocab.find(words[i]);
            if (idx >= 0)
                weights[i] =
                    static_cast<double>(model.vocab.freqs[static_cast<std::size_t>(idx)]);
        }
    }
    return build_dataset_impl(model, words, labels, weights);
}

LabeledDataset build_dataset(const embeddings::EmbeddingModel& model,
                             const std::vector<std::string>& words,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& weights) {
    return build_dataset_impl(model, words, labels, weights);
}

LabeledDataset select_dims(const LabeledDataset& dataset, const std::vector<int>& dims) {
    for (int d : dims)
        if (d < 0 || d >= dataset.dim())
            throw ConfigError("feature index " + std::to_string(d) + " out of range");
    LabeledDataset out;
    out.labels = dataset.labels;
    out.weights = dataset.weights;
    out.keys = dataset.keys;
    out.classes = dataset.classes;
    out.x.resize(dataset.x.rows(), static_cast<Eigen::Index>(dims.size()));
    for (std::size_t j = 0; j < dims.size(); ++j)
        out.x.col(static_cast<Eigen::Index>(j)) = dataset.x.col(dims[j]);
    return out;
}

void FitOptions::validate() const {
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

namespace {

// Weighted-mean cross-entropy with L2 on the weight matrix. Parameters are
// packed as [W (C x D, column-major) | b (C)].
class LogisticObjective {
public:
    LogisticObjective(const LabeledDataset& ds, double lambda)
        : x_(ds.x), labels_(ds.labels), lambda_(lambda),
          c_(static_cast<Eigen::Index>(ds.classes.size())), d_(ds.x.cols()) {
        wnorm_ = ds.weights / ds.weights.sum();
    }

    Eigen::Index param_count() const { return c_ * d_ + c_; }

    double eval(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
        Eigen::Map<const Eigen::MatrixXd> w(theta.data(), c_, d_);
        Eigen::Map<const Eigen::VectorXd> b(theta.data() + c_ * d_, c_);
        Eigen::MatrixXd z = x_ * w.transpose();
        z.rowwise() += b.transpose();

        Eigen::VectorXd row_max = z.rowwise().maxCoeff();
        Eigen::MatrixXd p = (z.colwise() - row_max).array().exp();
        Eigen::VectorXd row_sum = p.rowwise().sum();

        double loss = 0.0;
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            int y = labels_[static_cast<std::size_t>(i)];
            loss += wnorm_[i] * (std::log(row_sum[i]) + row_max[i] - z(i, y));
        }
        loss += lambda_ * w.squaredNorm();

        p.array().colwise() /= row_sum.array();
        for (Eigen::Index i = 0; i < p.rows(); ++i)
            p(i, labels_[static_cast<std::size_t>(i)]) -= 1.0;
        p.array().colwise() *= wnorm_.array();

        grad.resize(param_count());
        Eigen::Map<Eigen::MatrixXd> grad_w(grad.data(), c_, d_);
        Eigen::Map<Eigen::VectorXd> grad_b(grad.data() + c_ * d_, c_);
        grad_w = p.transpose() * x_ + 2.0 * lambda_ * w;
        grad_b = p.colwise().sum();
        return loss;
    }

private:
    const Eigen::MatrixXd& x_;
    const std::vector<int>& labels_;
    Eigen::VectorXd wnorm_;
    double lambda_;
    Eigen::Index c_, d_;
};

// L-BFGS with a weak-Wolfe bisection line search. Deterministic: no
// randomness, fixed history size, fixed bracketing rules. The curvature
// condition keeps s.y bounded away from zero, which matters in the nearly
// flat bias valleys of saturated softmax fits.
Eigen::VectorXd minimize_lbfgs(const LogisticObjective& objective,
                               Eigen::VectorXd theta, double tol, int max_iter) {
    constexpr int kHistory = 10;
    constexpr double kArmijo = 1e-4;    // sufficient-decrease constant
    constexpr double kCurvature = 0.9;  // weak-Wolfe curvature constant

    Eigen::VectorXd grad;
    double fx = objective.eval(theta, grad);
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;  // (s, y)

    for (int iter = 0; iter < max_iter; ++iter) {
        double gnorm = grad.norm();
        if (gnorm <= tol) return theta;

        // Two-loop recursion.
        Eigen::VectorXd dir = -grad;
        std::vector<double> alpha(history.size());
        for (std::size_t h = history.size(); h-- > 0;) {
            const auto& [s, y] = history[h];
            double rho = 1.0 / y.dot(s);
            alpha[h] = rho * s.dot(dir);
            dir -= alpha[h] * y;
        }
        if (!history.empty()) {
            const auto& [s, y] = history.back();
            dir *= s.dot(y) / y.dot(y);
        }
        for (std::size_t h = 0; h < history.size(); ++h) {
            const auto& [s, y] = history[h];
            double rho = 1.0 / y.dot(s);
            double beta = rho * y.dot(dir);
            dir += (alpha[h] - beta) * s;
        }
        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {  // not a descent direction; restart
            history.clear();
            dir = -grad;
            slope = grad.dot(dir);
        }

        double step = iter == 0 ? std::min(1.0, 1.0 / gnorm) : 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        Eigen::VectorXd theta_new, grad_new;
        Eigen::VectorXd theta_best, grad_best;
        double fx_new = fx, fx_best = fx;
        bool accepted = false, have_armijo = false;
        for (int ls = 0; ls < 60; ++ls) {
            theta_new = theta + step * dir;
            fx_new = objective.eval(theta_new, grad_new);
            if (fx_new > fx + kArmijo * step * slope) {
                hi = step;
                step = 0.5 * (lo + hi);
                continue;
            }
            if (!have_armijo || fx_new < fx_best) {
                theta_best = theta_new;
                grad_best = grad_new;
                fx_best = fx_new;
                have_armijo = true;
            }
            if (grad_new.dot(dir) < kCurvature * slope) {
                lo = step;
                step = std::isinf(hi) ? 2.0 * step : 0.5 * (lo + hi);
                continue;
            }
            accepted = true;
            break;
        }
        if (!accepted) {
            if (!have_armijo)
                throw FitError(
                    "logistic fit stalled in line search (gradient norm " +
                        fmt_g(gnorm, 6) + ", tol " + fmt_g(tol, 6) + ")",
                    gnorm);
            theta_new = std::move(theta_best);  // best sufficient-decrease point
            grad_new = std::move(grad_best);
            fx_new = fx_best;
        }

        Eigen::VectorXd s = theta_new - theta;
        Eigen::VectorXd y = grad_new - grad;
        double sy = s.dot(y);
        bool kept = sy > 1e-12 * s.norm() * y.norm();
        if (kept) {
            history.emplace_back(std::move(s), std::move(y));
            if (history.size() > kHistory) history.pop_front();
        }
        // No measurable decrease, no curvature pair, no state change: every
        // further iteration would repeat verbatim. The objective has hit the
        // floating-point resolution of its own value before reaching tol.
        if (!accepted && fx_new == fx && !kept)
            throw FitError(
                "logistic fit reached the floating-point precision floor "
                "(gradient norm " +
                    fmt_g(gnorm, 6) + ", tol " + fmt_g(tol, 6) + ")",
                gnorm);
        theta = std::move(theta_new);
        grad = std::move(grad_new);
        fx = fx_new;
    }
    double gnorm = grad.norm();
    if (gnorm <= tol) return theta;
    throw FitError("logistic fit did not converge in " + std::to_string(max_iter) +
                       " iterations (gradient norm " + fmt_g(gnorm, 6) + ", tol " +
                       fmt_g(tol, 6) + ")",
                   gnorm);
}

LinearClassifier fit_impl(const LabeledDataset& dataset, const FitOptions& options,
                          Eigen::VectorXd theta0) {
    dataset.validate();
    options.validate();
    std::set<int> present(dataset.labels.begin(), dataset.labels.end());
    if (present.size() < 2)
        throw ConfigError("fit needs at least 2 classes present among labels");

    LogisticObjective objective(dataset, options.lambda);
    Eigen::VectorXd theta =
        minimize_lbfgs(objective, std::move(theta0), options.tol, options.max_iter);

    auto c = static_cast<Eigen::Index>(dataset.classes.size());
    Eigen::Index d = dataset.x.cols();
    LinearClassifier clf;
    clf.classes = dataset.classes;
    clf.lambda = options.lambda;
    clf.weights = Eigen::Map<const Eigen::MatrixXd>(theta.data(), c, d);
    clf.biases = Eigen::Map<const Eigen::VectorXd>(theta.data() + c * d, c);
    return clf;
}

}  // namespace

LinearClassifier fit(const LabeledDataset& dataset, const FitOptions& options) {
    auto c = static_cast<Eigen::Index>(dataset.classes.size());
    return fit_impl(dataset, options,
                    Eigen::VectorXd::Zero(c * dataset.x.cols() + c));
}

LinearClassifier fit_from(const LabeledDataset& dataset, const FitOptions& options,
                          const Eigen::MatrixXd& w0, const Eigen::VectorXd& b0) {
    auto c = static_cast<Eigen::Index>(dataset.classes.size());
    Eigen::Index d = dataset.x.cols();
    if (w0.rows() != c || w0.cols() != d || b0.size() != c)
        throw ConfigError("starting point has wrong shape");
    Eigen::VectorXd theta(c * d + c);
    Eigen::Map<Eigen::MatrixXd>(theta.data(), c, d) = w0;
    Eigen::Map<Eigen::VectorXd>(theta.data() + c * d, c) = b0;
    return fit_impl(dataset, options, std::move(theta));
}

Eigen::VectorXd LinearClassifier::proba(const Eigen::VectorXd& x) const {
    if (x.size() != weights.cols())
        throw ConfigError("input dimensionality " + std::to_string(x.size()) +
                          " does not match classifier dimensionality " +
                          std::to_string(weights.cols()));
    Eigen::VectorXd z = weights * x + biases;
    double m = z.maxCoeff();
    Eigen::VectorXd e = (z.array() - m).exp();
    return e / e.sum();
}

int LinearClassifier::predict_index(const Eigen::VectorXd& x) const {
    Eigen::VectorXd p = proba(x);
    int best = 0;
    for (int c = 1; c < p.size(); ++c)
        if (p[c] > p[best]) best = c;  // strict: ties keep the lowest index
    return best;
}

const std::string& LinearClassifier::predict(const Eigen::VectorXd& x) const {
    return classes[static_cast<std::size_t>(predict_index(x))];
}

void LinearClassifier::save(std::ostream& out) const {
    out << "poslens-clf v1 " << num_classes() << ' ' << dim() << ' '
        << fmt_g(lambda, 9) << '\n';
    for (int c = 0; c < num_classes(); ++c) {
        if (c) out << '\t';
        out << classes[static_cast<std::size_t>(c)];
    }
    out << '\n';
    for (int c = 0; c < num_classes(); ++c) {
        out << fmt_g(biases[c], 9);
        for (int d = 0; d < dim(); ++d) out << ' ' << fmt_g(weights(c, d), 9);
        out << '\n';
    }
}

LinearClassifier LinearClassifier::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty classifier file");
    std::istringstream header(line);
    std::string magic, version;
    int c = 0, d = 0;
    double lambda = 0.0;
    header >> magic >> version >> c >> d >> lambda;
    if (header.fail() || magic != "poslens-clf" || version != "v1")
        throw ParseError(1, "not a poslens-clf v1 file");
    if (c < 2 || d < 1) throw ParseError(1, "implausible classifier shape");

    if (!std::getline(in, line)) throw ParseError(2, "missing class-name row");
    LinearClassifier clf;
    clf.lambda = lambda;
    {
        std::size_t start = 0;
        while (true) {
            std::size_t pos = line.find('\t', start);
            clf.classes.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }
    if (static_cast<int>(clf.classes.size()) != c)
        throw ParseError(2, "expected " + std::to_string(c) + " class names");

    clf.weights.resize(c, d);
    clf.biases.resize(c);
    for (int row = 0; row < c; ++row) {
        if (!std::getline(in, line))
            throw ParseError(3 + static_cast<std::size_t>(row), "missing weight row");
        std::istringstream is(line);
        if (!(is >> clf.biases[row]))
            throw ParseError(3 + static_cast<std::size_t>(row), "bad bias");
        for (int col = 0; col < d; ++col)
            if (!(is >> clf.weights(row, col)))
                throw ParseError(3 + static_cast<std::size_t>(row), "bad weight");
        double extra;
        if (is >> extra)
            throw ParseError(3 + static_cast<std::size_t>(row), "trailing values");
    }
    if (!clf.weights.allFinite() || !clf.biases.allFinite())
        throw ParseError(3, "non-finite classifier parameters");
    return clf;
}

Metrics compute_metrics(const std::vector<int>& gold, const std::vector<int>& pred,
                        const std::vector<double>& weights,
                        const std::vector<std::string>& classes) {
    if (gold.size() != pred.size() || gold.size() != weights.size())
        throw ConfigError("gold, pred and weights must have equal length");
    std::size_t c = classes.size();
    Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
    double total = 0.0, correct = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] < 0 || gold[i] >= static_cast<int>(c) || pred[i] < 0 ||
            pred[i] >= static_cast<int>(c))
            throw ConfigError("label index out of range in metrics input");
        confusion(gold[i], pred[i]) += weights[i];
        total += weights[i];
        if (gold[i] == pred[i]) correct += weights[i];
    }
    if (total <= 0.0) throw ConfigError("metrics need positive total weight");

    Metrics m;
    m.accuracy = correct / total;
    double support_total = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
        auto ki = static_cast<Eigen::Index>(k);
        double tp = confusion(ki, ki);
        double gold_mass = confusion.row(ki).sum();
        double pred_mass = confusion.col(ki).sum();
        ClassMetrics cm;
        cm.tag = classes[k];
        cm.support = gold_mass;
        cm.precision = pred_mass > 0.0 ? tp / pred_mass : 0.0;
        cm.recall = gold_mass > 0.0 ? tp / gold_mass : 0.0;
        cm.f1 = (cm.precision + cm.recall) > 0.0
                    ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                    : 0.0;
        m.per_class.push_back(cm);
        if (gold_mass > 0.0) {
            support_total += gold_mass;
            m.weighted_precision += gold_mass * cm.precision;
            m.weighted_recall += gold_mass * cm.recall;
            m.weighted_f1 += gold_mass * cm.f1;
        }
    }
    m.weighted_precision /= support_total;
    m.weighted_recall /= support_total;
    m.weighted_f1 /= support_total;
    return m;
}

namespace {

// Stratified fold assignment: per class, shuffled items are dealt through a
// global round-robin counter, so both per-class and total fold sizes differ
// by at most one.
std::vector<int> assign_folds(const LabeledDataset& dataset, int folds,
                              std::uint64_t seed, std::ostream* warnings) {
    std::vector<std::vector<std::size_t>> by_class(dataset.classes.size());
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_class[static_cast<std::size_t>(dataset.labels[i])].push_back(i);

    Rng rng(derive_seed(seed, "cv-folds"));
    std::vector<int> fold(dataset.size(), 0);
    std::size_t counter = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& items = by_class[c];
        if (!items.empty() && items.size() < static_cast<std::size_t>(folds) &&
            warnings)
            *warnings << "warning: class " << dataset.classes[c] << " has only "
                      << items.size() << " items for " << folds
                      << "-fold CV; folding best-effort\n";
        rng.shuffle(items);
        for (std::size_t idx : items) {
            fold[idx] = static_cast<int>(counter % static_cast<std::size_t>(folds));
            ++counter;
        }
    }
    return fold;
}

LabeledDataset subset(const LabeledDataset& dataset,
                      const std::vector<std::size_t>& rows) {
    LabeledDataset out;
    out.classes = dataset.classes;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), dataset.x.cols());
    out.weights.resize(static_cast<Eigen::Index>(rows.size()));
    out.labels.reserve(rows.size());
    out.keys.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.x.row(static_cast<Eigen::Index>(r)) =
            dataset.x.row(static_cast<Eigen::Index>(rows[r]));
        out.weights[static_cast<Eigen::Index>(r)] =
            dataset.weights[static_cast<Eigen::Index>(rows[r])];
        out.labels.push_back(dataset.labels[rows[r]]);
        out.keys.push_back(dataset.keys[rows[r]]);
    }
    return out;
}

}  // namespace

Metrics cross_validate(const LabeledDataset& dataset, int folds, std::uint64_t seed,
                       const FitOptions& options,
                       std::vector<int>* out_of_fold_pred, std::ostream* warnings) {
    dataset.validate();
    if (folds < 2) throw ConfigError("cross-validation needs k >= 2");
    if (static_cast<std::size_t>(folds) > dataset.size())
        throw ConfigError("cross-validation k exceeds the item count");

    std::vector<int> fold = assign_folds(dataset, folds, seed, warnings);
    std::vector<int> pooled(dataset.size(), -1);
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            (fold[i] == f ? test_rows : train_rows).push_back(i);
        if (test_rows.empty()) continue;
        LinearClassifier clf = fit(subset(dataset, train_rows), options);
        for (std::size_t i : test_rows)
            pooled[i] = clf.predict_index(
                dataset.x.row(static_cast<Eigen::Index>(i)).transpose());
    }
    std::vector<double> weights(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i)
        weights[i] = dataset.weights[static_cast<Eigen::Index>(i)];
    if (out_of_fold_pred) *out_of_fold_pred = pooled;
    return compute_metrics(dataset.labels, pooled, weights, dataset.classes);
}

BaselineResult one_feature_baseline(const LabeledDataset& dataset, int folds,
                                    std::uint64_t seed, const FitOptions& options) {
    dataset.validate();
    auto ranking = features::anova_f_scores(dataset);
    BaselineResult result;
    result.dimension = ranking.order.front();
    LabeledDataset one = select_dims(dataset, {result.dimension});
    result.cv = cross_validate(one, folds, seed, options);
    LinearClassifier clf = fit(one, options);
    std::vector<int> pred(one.size());
    for (std::size_t i = 0; i < one.size(); ++i)
        pred[i] =
            clf.predict_index(one.x.row(static_cast<Eigen::Index>(i)).transpose());
    std::vector<double> weights(one.size());
    for (std::size_t i = 0; i < one.size(); ++i)
        weights[i] = one.weights[static_cast<Eigen::Index>(i)];
    result.train = compute_metrics(one.labels, pred, weights, one.classes);
    return result;
}

std::string knn_classify(const LabeledDataset& train, const Eigen::VectorXd& query,
                         int k) {
    train.validate();
    if (k < 1) throw ConfigError("K must be >= 1");
    if (static_cast<std::size_t>(k) > train.size())
        throw ConfigError("K exceeds the number of training items");
    double qnorm = query.norm();
    if (qnorm == 0.0) throw ConfigError("cosine undefined for a zero query vector");

    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        Eigen::VectorXd row = train.x.row(static_cast<Eigen::Index>(i)).transpose();
        double rnorm = row.norm();
        if (rnorm == 0.0)
            throw ConfigError("cosine undefined for zero training vector \"" +
                              train.keys[i] + "\"");
        dist[i] = {1.0 - query.dot(row) / (qnorm * rnorm), i};
    }
    std::sort(dist.begin(), dist.end());
    std::vector<double> votes(train.classes.size(), 0.0);
    for (int j = 0; j < k; ++j) {
        std::size_t i = dist[static_cast<std::size_t>(j)].second;
        votes[static_cast<std::size_t>(train.labels[i])] +=
            train.weights[static_cast<Eigen::Index>(i)];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c)
        if (votes[c] > votes[best]) best = c;
    return train.classes[best];
}

}  // namespace poslens::classifier
