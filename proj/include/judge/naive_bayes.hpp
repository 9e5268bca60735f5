#pragma once

// Multinomial naive Bayes over unigram counts.
//
// Class order is fixed [Positive, Negative]. With smoothing pseudo-count
// alpha and vocabulary size V the per-class term likelihood is
//
//     P(w | c) = (count(w, c) + alpha) / (total(c) + alpha * V)
//
// and the prior is the class's share of training documents. Prediction is
// the argmax of log prior + sum count(w) log P(w | c); out-of-vocabulary
// tokens are ignored and ties go to Positive.

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "judge/error.hpp"
#include "judge/labels.hpp"
#include "judge/text.hpp"

namespace judge {

struct NBModel {
    Vocabulary vocab;
    std::array<double, 2> log_priors{};
    std::array<std::vector<double>, 2> log_likelihoods;
    double alpha = 1.0;
};

struct NBPrediction {
    Valence valence = Valence::Positive;
    std::array<double, 2> log_posterior{};  // unnormalised: log prior + log likelihood

    // Normalised posterior probability of the Negative class.
    double p_negative() const {
        const double d = log_posterior[1] - log_posterior[0];
        return 1.0 / (1.0 + std::exp(-d));
    }
};

inline constexpr double kDefaultAlpha = 1.0;

inline NBModel nb_train(std::span<const TokenSequence> documents, std::span<const Valence> labels,
                        double alpha = kDefaultAlpha) {
    if (documents.size() != labels.size()) throw std::invalid_argument("nb_train: size mismatch");
    if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("nb_train: alpha must be > 0");
    if (documents.empty()) throw TrainingError("nb_train: empty corpus");

    NBModel m;
    m.alpha = alpha;
    m.vocab = Vocabulary::from_documents(documents);
    const std::size_t v = m.vocab.size();

    std::array<std::size_t, 2> docs{0, 0};
    std::array<std::vector<double>, 2> counts{std::vector<double>(v, 0.0), std::vector<double>(v, 0.0)};
    std::array<double, 2> totals{0, 0};
    for (std::size_t i = 0; i < documents.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++docs[c];
        for (const auto& tok : documents[i]) {
            counts[c][*m.vocab.index_of(tok)] += 1;
            totals[c] += 1;
        }
    }
    if (docs[0] == 0 || docs[1] == 0) throw TrainingError("nb_train: both classes must be present");

    const double n = static_cast<double>(documents.size());
    for (std::size_t c = 0; c < 2; ++c) {
        m.log_priors[c] = std::log(static_cast<double>(docs[c]) / n);
        const double denom = std::log(totals[c] + alpha * static_cast<double>(v));
        m.log_likelihoods[c].resize(v);
        for (std::size_t w = 0; w < v; ++w) {
            m.log_likelihoods[c][w] = std::log(counts[c][w] + alpha) - denom;
        }
    }
    return m;
}

inline NBModel nb_train(std::span<const LabeledComment> corpus, double alpha = kDefaultAlpha) {
    std::vector<TokenSequence> docs;
    std::vector<Valence> labels;
    docs.reserve(corpus.size());
    labels.reserve(corpus.size());
    for (const auto& lc : corpus) {
        docs.push_back(tokenize(lc.comment.body));
        labels.push_back(lc.valence);
    }
    return nb_train(docs, labels, alpha);
}

inline NBPrediction nb_predict_tokens(const NBModel& m, const TokenSequence& tokens) {
    NBPrediction p;
    p.log_posterior = m.log_priors;
    for (const auto& tok : tokens) {
        if (auto w = m.vocab.index_of(tok)) {
            p.log_posterior[0] += m.log_likelihoods[0][*w];
            p.log_posterior[1] += m.log_likelihoods[1][*w];
        }
    }
    p.valence = p.log_posterior[1] > p.log_posterior[0] ? Valence::Negative : Valence::Positive;
    return p;
}

inline NBPrediction nb_predict(const NBModel& m, std::string_view text) {
    return nb_predict_tokens(m, tokenize(text));
}

// ---------------------------------------------------------------------------
// Serialisation

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::ordered_json nb_to_json(const NBModel& m) {
    nlohmann::ordered_json vocab = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < m.vocab.size(); ++i) vocab[m.vocab.term(i)] = i;
    return {{"format_version", kModelFormatVersion},
            {"kind", "multinomial_nb"},
            {"alpha", m.alpha},
            {"class_order", {"positive", "negative"}},
            {"vocab", std::move(vocab)},
            {"log_priors", m.log_priors},
            {"log_likelihoods", m.log_likelihoods}};
}

inline NBModel nb_from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("model format_version " + std::to_string(version) +
                            " is not supported (expected " + std::to_string(kModelFormatVersion) + ")");
        }
        if (j.at("kind").get<std::string>() != "multinomial_nb") throw DataError("model kind is not multinomial_nb");
        if (j.at("class_order") != nlohmann::json({"positive", "negative"})) {
            throw DataError("model class_order must be [positive, negative]");
        }
        NBModel m;
        m.alpha = j.at("alpha").get<double>();
        const auto& vocab = j.at("vocab");
        std::vector<std::string> terms(vocab.size());
        for (const auto& [term, idx] : vocab.items()) {
            const auto i = idx.get<std::size_t>();
            if (i >= terms.size() || !terms[i].empty()) throw DataError("model vocab indices are not 0..V-1");
            terms[i] = term;
        }
        m.vocab = Vocabulary::from_terms(terms);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (m.vocab.term(i) != terms[i]) throw DataError("model vocab is not in canonical order");
        }
        m.log_priors = j.at("log_priors").get<std::array<double, 2>>();
        m.log_likelihoods = j.at("log_likelihoods").get<std::array<std::vector<double>, 2>>();
        for (const auto& row : m.log_likelihoods) {
            if (row.size() != terms.size()) throw DataError("model likelihood rows do not match vocab size");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

} // namespace judge
