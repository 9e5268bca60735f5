#pragma once

// Detection metrics and k-fold cross-validation.
//
// The detection target (the "positive" of precision/recall) is the Negative
// valence: a false positive is a comment wrongly judged to call the poster
// the asshole.

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "judge/labels.hpp"
#include "judge/rng.hpp"

namespace judge {

struct Confusion {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    bool operator==(const Confusion&) const = default;
};

// All rates are percentages. Undefined ratios (zero denominators) are 0.
struct EvalMetrics {
    Confusion confusion;
    double accuracy = 0, precision = 0, recall = 0, f1 = 0, fpr = 0;
};

inline EvalMetrics metrics_from_confusion(const Confusion& c) {
    auto ratio = [](double num, double den) { return den > 0 ? 100.0 * num / den : 0.0; };
    EvalMetrics m;
    m.confusion = c;
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
    m.accuracy = ratio(tp + tn, tp + fp + fn + tn);
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.fpr = ratio(fp, fp + tn);
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

inline Confusion confusion_of(std::span<const bool> predicted, std::span<const bool> actual) {
    if (predicted.size() != actual.size()) throw std::invalid_argument("evaluate: length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i]) {
            ++(actual[i] ? c.tp : c.fp);
        } else {
            ++(actual[i] ? c.fn : c.tn);
        }
    }
    return c;
}

inline EvalMetrics evaluate(std::span<const Valence> predictions, std::span<const Valence> truth) {
    if (predictions.size() != truth.size()) throw std::invalid_argument("evaluate: length mismatch");
    if (predictions.empty()) throw std::invalid_argument("evaluate: empty input");
    Confusion c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] == Valence::Negative;
        const bool t = truth[i] == Valence::Negative;
        if (p) {
            ++(t ? c.tp : c.fp);
        } else {
            ++(t ? c.fn : c.tn);
        }
    }
    return metrics_from_confusion(c);
}

// ---------------------------------------------------------------------------
// Cross-validation

inline constexpr std::array<std::string_view, 5> kMetricNames = {"accuracy", "precision", "recall",
                                                                 "f1", "fpr"};

inline std::array<double, 5> metric_values(const EvalMetrics& m) {
    return {m.accuracy, m.precision, m.recall, m.f1, m.fpr};
}

struct FoldReport {
    std::vector<EvalMetrics> folds;
    std::array<double, 5> mean{};    // in kMetricNames order
    std::array<double, 5> stddev{};  // population standard deviation
    std::uint64_t seed = 0;
};

inline FoldReport summarize_folds(std::vector<EvalMetrics> folds, std::uint64_t seed) {
    FoldReport r;
    r.folds = std::move(folds);
    r.seed = seed;
    const double k = static_cast<double>(r.folds.size());
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        double sum = 0;
        for (const auto& f : r.folds) sum += metric_values(f)[m];
        const double mean = sum / k;
        double ss = 0;
        for (const auto& f : r.folds) {
            const double dev = metric_values(f)[m] - mean;
            ss += dev * dev;
        }
        r.mean[m] = mean;
        r.stddev[m] = std::sqrt(ss / k);
    }
    return r;
}

// Seeded shuffle of 0..n-1 cut into k contiguous folds; the first n % k
// folds carry one extra index.
inline std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross_validate: k must be at least 2");
    if (n < k) throw std::invalid_argument("cross_validate: corpus smaller than k");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

template <typename T>
concept HasValence = requires(const T& t) {
    { t.valence } -> std::convertible_to<Valence>;
};

// trainer(span<const Item> training) returns a predictor callable as
// predictor(const Item&) -> Valence. Each fold trains from scratch, so any
// vocabulary is rebuilt from the training folds only.
template <HasValence Item, typename Trainer>
FoldReport cross_validate(std::span<const Item> corpus, std::size_t k, Trainer&& trainer, std::uint64_t seed) {
    const auto folds = make_folds(corpus.size(), k, seed);
    std::vector<EvalMetrics> results;
    results.reserve(k);
    std::vector<char> held_out(corpus.size());
    for (const auto& fold : folds) {
        std::fill(held_out.begin(), held_out.end(), 0);
        for (auto i : fold) held_out[i] = 1;
        std::vector<Item> training;
        training.reserve(corpus.size() - fold.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (!held_out[i]) training.push_back(corpus[i]);
        }
        auto predictor = trainer(std::span<const Item>(training));
        std::vector<Valence> predicted, truth;
        predicted.reserve(fold.size());
        truth.reserve(fold.size());
        for (auto i : fold) {
            predicted.push_back(predictor(corpus[i]));
            truth.push_back(corpus[i].valence);
        }
        results.push_back(evaluate(predicted, truth));
    }
    return summarize_folds(std::move(results), seed);
}

} // namespace judge
