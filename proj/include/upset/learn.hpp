#pragma once

#include "upset/domain.hpp"
#include "upset/features.hpp"
#include "upset/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace upset {

using FeatureRow = std::vector<double>;

inline constexpr std::size_t kNumClasses = 2;

/// Class slot used by the model arrays: 0 = Upset, 1 = Baseline.
inline constexpr std::size_t class_slot(ClassLabel l) { return l == ClassLabel::Upset ? 0 : 1; }
inline constexpr std::array<ClassLabel, kNumClasses> kClasses{ClassLabel::Upset, ClassLabel::Baseline};

// ---------------------------------------------------------------------------
// Gaussian Naive Bayes
// ---------------------------------------------------------------------------
struct GnbModel {
    std::array<double, kNumClasses> priors{};
    std::array<std::vector<double>, kNumClasses> means;
    std::array<std::vector<double>, kNumClasses> variances;
    double var_floor = 0.0;

    std::size_t dim() const { return means[0].size(); }
};

struct GnbConfig {
    /// Variance floor = max(relative_floor * largest feature variance, absolute_floor).
    double relative_floor = 1e-9;
    double absolute_floor = 1e-12;
};

namespace detail {

inline std::size_t check_rows(std::span<const FeatureRow> X) {
    if (X.empty()) throw Error(Errc::MissingClass, "no training examples");
    const std::size_t d = X.front().size();
    if (d == 0) throw Error(Errc::DimensionMismatch, "zero-length feature rows");
    for (const auto& row : X) {
        if (row.size() != d) throw Error(Errc::DimensionMismatch, "feature rows differ in length");
    }
    return d;
}

}  // namespace detail

/// Per-class means and population variances (floored), priors from class frequencies.
inline GnbModel gnb_fit(std::span<const FeatureRow> X, std::span<const ClassLabel> y, const GnbConfig& cfg = {}) {
    if (X.size() != y.size()) throw Error(Errc::LengthMismatch, "features and labels differ in length");
    const std::size_t d = detail::check_rows(X);
    const std::size_t n = X.size();

    std::array<std::size_t, kNumClasses> count{};
    for (auto l : y) ++count[class_slot(l)];
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (count[c] == 0)
            throw Error(Errc::MissingClass, "no training examples of class " + std::string(to_string(kClasses[c])));
    }

    GnbModel m;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        m.means[c].assign(d, 0.0);
        m.variances[c].assign(d, 0.0);
        m.priors[c] = static_cast<double>(count[c]) / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& mu = m.means[class_slot(y[i])];
        for (std::size_t j = 0; j < d; ++j) mu[j] += X[i][j];
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (auto& v : m.means[c]) v /= static_cast<double>(count[c]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = class_slot(y[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double dx = X[i][j] - m.means[c][j];
            m.variances[c][j] += dx * dx;
        }
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (auto& v : m.variances[c]) v /= static_cast<double>(count[c]);

    // floor relative to the spread of the pooled data
    double max_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& row : X) mean += row[j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& row : X) var += (row[j] - mean) * (row[j] - mean);
        max_var = std::max(max_var, var / static_cast<double>(n));
    }
    m.var_floor = std::max(cfg.relative_floor * max_var, cfg.absolute_floor);
    for (auto& vars : m.variances)
        for (auto& v : vars) v = std::max(v, m.var_floor);
    return m;
}

/// Unnormalized log posterior per class: log prior + sum of log Gaussian densities.
/// Priors are renormalized, so scaling them all by a constant changes nothing.
inline std::array<double, kNumClasses> gnb_log_joint(const GnbModel& m, std::span<const double> x) {
    if (x.size() != m.dim()) throw Error(Errc::DimensionMismatch, "input length differs from model");
    const double prior_total = m.priors[0] + m.priors[1];
    std::array<double, kNumClasses> lj{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        double s = std::log(m.priors[c] / prior_total);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double var = m.variances[c][j];
            const double dx = x[j] - m.means[c][j];
            s += -0.5 * std::log(2.0 * std::numbers::pi * var) - dx * dx / (2.0 * var);
        }
        lj[c] = s;
    }
    return lj;
}

inline std::array<double, kNumClasses> gnb_predict_proba(const GnbModel& m, std::span<const double> x) {
    const auto lj = gnb_log_joint(m, x);
    const double top = std::max(lj[0], lj[1]);
    const double lse = top + std::log(std::exp(lj[0] - top) + std::exp(lj[1] - top));
    return {std::exp(lj[0] - lse), std::exp(lj[1] - lse)};
}

/// Argmax of the log posterior; exact ties go to Baseline.
inline ClassLabel decide(const std::array<double, kNumClasses>& log_joint) {
    return log_joint[class_slot(ClassLabel::Upset)] > log_joint[class_slot(ClassLabel::Baseline)]
               ? ClassLabel::Upset
               : ClassLabel::Baseline;
}

inline ClassLabel gnb_predict(const GnbModel& m, std::span<const double> x) { return decide(gnb_log_joint(m, x)); }

// ---------------------------------------------------------------------------
// Stratified k-fold
// ---------------------------------------------------------------------------

/// Fold index per example. Each class is shuffled and dealt round-robin, the
/// dealer position carrying over between classes so fold sizes stay balanced.
inline std::vector<std::size_t> stratified_kfold(std::span<const ClassLabel> labels, std::size_t k,
                                                 std::uint64_t seed) {
    if (k == 0) throw Error(Errc::InvalidConfig, "k must be at least 1");
    if (k > labels.size())
        throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " exceeds " + std::to_string(labels.size()) +
                                         " examples");
    std::vector<std::size_t> fold(labels.size(), 0);
    std::size_t dealer = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (class_slot(labels[i]) == c) members.push_back(i);
        Rng rng(derive_seed(seed, 0x6b666f6c64ULL, c));
        rng.shuffle(members);
        for (std::size_t i : members) {
            fold[i] = dealer;
            dealer = (dealer + 1) % k;
        }
    }
    return fold;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------
struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auroc = 0.5;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Probability that a random positive outscores a random negative, ties counted
/// half. 0.5 when either class is absent.
inline double auroc_pairs(std::span<const double> scores, std::span<const ClassLabel> labels,
                          ClassLabel positive = ClassLabel::Upset) {
    if (scores.size() != labels.size()) throw Error(Errc::LengthMismatch, "scores and labels differ in length");
    double wins = 0.0;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != positive) continue;
        ++pos;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] == positive) continue;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    for (auto l : labels) neg += l != positive;
    if (pos == 0 || neg == 0) return 0.5;
    return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

inline Metrics classification_metrics(std::span<const ClassLabel> predictions, std::span<const double> scores,
                                      std::span<const ClassLabel> labels, ClassLabel positive = ClassLabel::Upset) {
    if (predictions.size() != labels.size() || scores.size() != labels.size())
        throw Error(Errc::LengthMismatch, "predictions, scores and labels must align");
    Metrics m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool pred = predictions[i] == positive, truth = labels[i] == positive;
        if (pred && truth) ++m.tp;
        else if (pred) ++m.fp;
        else if (truth) ++m.fn;
        else ++m.tn;
    }
    const double n = static_cast<double>(labels.size());
    m.accuracy = n > 0 ? static_cast<double>(m.tp + m.tn) / n : 0.0;
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.auroc = auroc_pairs(scores, labels, positive);
    return m;
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------
struct CvReport {
    Metrics pooled;
    std::vector<Metrics> per_fold;
    std::vector<std::size_t> fold;          // per example
    std::vector<double> posterior_upset;    // out-of-fold
    std::vector<ClassLabel> predictions;    // out-of-fold
    std::size_t k = 3;
    std::uint64_t seed = 0;
};

/// Fits on k-1 folds and scores the held-out fold. Metrics use the pooled
/// out-of-fold predictions. A training split that lacks a class predicts the
/// class it has with certainty.
inline CvReport cross_validate(std::span<const FeatureRow> X, std::span<const ClassLabel> y, std::size_t k,
                               std::uint64_t seed, const GnbConfig& gnb = {}) {
    if (X.size() != y.size()) throw Error(Errc::LengthMismatch, "features and labels differ in length");
    detail::check_rows(X);
    CvReport rep;
    rep.k = k;
    rep.seed = seed;
    rep.fold = stratified_kfold(y, k, seed);
    rep.posterior_upset.assign(X.size(), 0.0);
    rep.predictions.assign(X.size(), ClassLabel::Baseline);

    for (std::size_t f = 0; f < k; ++f) {
        std::vector<FeatureRow> train_x;
        std::vector<ClassLabel> train_y;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (rep.fold[i] == f) {
                test.push_back(i);
            } else {
                train_x.push_back(X[i]);
                train_y.push_back(y[i]);
            }
        }
        const bool has_upset = std::count(train_y.begin(), train_y.end(), ClassLabel::Upset) > 0;
        const bool has_base = std::count(train_y.begin(), train_y.end(), ClassLabel::Baseline) > 0;
        if (has_upset && has_base) {
            const auto model = gnb_fit(train_x, train_y, gnb);
            for (std::size_t i : test) {
                const auto lj = gnb_log_joint(model, X[i]);
                rep.predictions[i] = decide(lj);
                rep.posterior_upset[i] = gnb_predict_proba(model, X[i])[class_slot(ClassLabel::Upset)];
            }
        } else {
            const ClassLabel only = has_upset ? ClassLabel::Upset : ClassLabel::Baseline;
            for (std::size_t i : test) {
                rep.predictions[i] = only;
                rep.posterior_upset[i] = only == ClassLabel::Upset ? 1.0 : 0.0;
            }
        }

        std::vector<ClassLabel> fp, fy;
        std::vector<double> fs;
        for (std::size_t i : test) {
            fp.push_back(rep.predictions[i]);
            fs.push_back(rep.posterior_upset[i]);
            fy.push_back(y[i]);
        }
        rep.per_fold.push_back(classification_metrics(fp, fs, fy));
    }
    rep.pooled = classification_metrics(rep.predictions, rep.posterior_upset, y);
    return rep;
}

inline std::vector<FeatureRow> feature_rows(std::span<const FeatureVector> features) {
    std::vector<FeatureRow> rows;
    rows.reserve(features.size());
    for (const auto& fv : features) rows.emplace_back(fv.p.begin(), fv.p.end());
    return rows;
}

inline std::vector<ClassLabel> feature_labels(std::span<const FeatureVector> features) {
    std::vector<ClassLabel> y;
    y.reserve(features.size());
    for (const auto& fv : features) {
        if (!fv.label) throw Error(Errc::UnlabeledGame, fv.game_id + ": no class label");
        y.push_back(*fv.label);
    }
    return y;
}

// ---------------------------------------------------------------------------
// Label-reshuffle null model
// ---------------------------------------------------------------------------
struct MeanStd {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
};

inline MeanStd mean_std(std::span<const double> xs) {
    if (xs.empty()) throw Error(Errc::EmptyAggregate, "nothing to aggregate");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

struct MetricsSummary {
    MeanStd accuracy, precision, recall, f1, auroc;
};

inline MetricsSummary summarize(std::span<const Metrics> runs) {
    auto pick = [&](auto field) {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& m : runs) v.push_back(m.*field);
        return mean_std(v);
    };
    return {pick(&Metrics::accuracy), pick(&Metrics::precision), pick(&Metrics::recall), pick(&Metrics::f1),
            pick(&Metrics::auroc)};
}

struct ReshuffleReport {
    std::vector<Metrics> rounds;
    MetricsSummary summary;
    std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kStreamLabelShuffle = 0x6c6162656cULL;
inline constexpr std::uint64_t kStreamCv = 0x6376ULL;

/// Each round permutes the labels uniformly and reruns cross-validation.
inline ReshuffleReport reshuffle_labels_experiment(std::span<const FeatureRow> X, std::span<const ClassLabel> y,
                                                   std::size_t rounds, std::uint64_t seed, std::size_t k = 3,
                                                   const GnbConfig& gnb = {}) {
    if (rounds == 0) throw Error(Errc::EmptyAggregate, "reshuffle experiment needs at least one round");
    ReshuffleReport rep;
    rep.seed = seed;
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<ClassLabel> shuffled(y.begin(), y.end());
        Rng rng(derive_seed(seed, kStreamLabelShuffle, r));
        rng.shuffle(shuffled);
        rep.rounds.push_back(cross_validate(X, shuffled, k, derive_seed(seed, kStreamCv, r), gnb).pooled);
    }
    rep.summary = summarize(rep.rounds);
    return rep;
}

}  // namespace upset
