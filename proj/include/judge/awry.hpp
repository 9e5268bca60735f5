#pragma once

// Conversation-derailment forecasting with a judgement classifier.
//
// Offline: classify only the second utterance; Negative means derail.
// Online: classify utterances 2, 3, ... in order and stop at the first
// Negative (derail, trigger recorded); with no Negative the conversation is
// predicted not to derail after the full pass. Utterance 1 is the context
// post in both modes. Indices are 1-based.

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "judge/classifier.hpp"
#include "judge/error.hpp"
#include "judge/evaluation.hpp"

namespace judge {

struct Utterance {
    std::string author;
    std::string text;
};

struct ConversationRecord {
    std::string id;
    std::vector<Utterance> utterances;
    bool derails = false;

    bool offline_eligible() const { return utterances.size() >= 2; }
};

enum class AwryMode { Offline, Online };

inline std::string_view mode_name(AwryMode m) { return m == AwryMode::Offline ? "offline" : "online"; }

struct AwryPrediction {
    std::string conversation_id;
    bool predicted_derail = false;
    std::optional<std::size_t> trigger_index;
};

// Newline-delimited {"id", "utterances": [{"author", "text"}...], "derails"}.
inline std::vector<ConversationRecord> load_conversations(std::istream& in) {
    std::vector<ConversationRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank(line)) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw SchemaError("not a JSON object", lineno);
        ConversationRecord rec;
        auto id = detail::json_string(j, "id");
        if (!id || id->empty()) throw SchemaError("missing id", lineno);
        rec.id = *id;
        auto d = j.find("derails");
        if (d == j.end() || !d->is_boolean()) throw SchemaError("missing boolean derails field", lineno);
        rec.derails = d->get<bool>();
        auto u = j.find("utterances");
        if (u == j.end() || !u->is_array()) throw SchemaError("missing utterances array", lineno);
        for (const auto& item : *u) {
            if (!item.is_object()) throw SchemaError("utterance is not an object", lineno);
            auto text = detail::json_string(item, "text");
            if (!text) throw SchemaError("utterance without text", lineno);
            rec.utterances.push_back({detail::json_string(item, "author").value_or(""), *text});
        }
        out.push_back(std::move(rec));
    }
    return out;
}

namespace detail {

inline std::string utterance_id(const ConversationRecord& conv, std::size_t index_1based) {
    return conv.id + ":" + std::to_string(index_1based);
}

} // namespace detail

template <Judge C>
std::optional<AwryPrediction> predict_offline(const ConversationRecord& conv, const C& judge) {
    if (!conv.offline_eligible()) return std::nullopt;
    const auto id = detail::utterance_id(conv, 2);
    const bool neg = judge(JudgeInput{id, conv.utterances[1].text}) == Valence::Negative;
    return AwryPrediction{conv.id, neg, std::nullopt};
}

template <Judge C>
AwryPrediction predict_online(const ConversationRecord& conv, const C& judge) {
    AwryPrediction p{conv.id, false, std::nullopt};
    for (std::size_t i = 1; i < conv.utterances.size(); ++i) {
        const auto id = detail::utterance_id(conv, i + 1);
        if (judge(JudgeInput{id, conv.utterances[i].text}) == Valence::Negative) {
            p.predicted_derail = true;
            p.trigger_index = i + 1;
            break;
        }
    }
    return p;
}

// Detection target is derailment.
inline EvalMetrics evaluate_awry(std::span<const AwryPrediction> predictions,
                                 const std::map<std::string, bool, std::less<>>& truths) {
    std::vector<bool> pred, actual;
    pred.reserve(predictions.size());
    actual.reserve(predictions.size());
    for (const auto& p : predictions) {
        auto it = truths.find(p.conversation_id);
        if (it == truths.end()) throw DataError("evaluate_awry: no ground truth for conversation " + p.conversation_id);
        pred.push_back(p.predicted_derail);
        actual.push_back(it->second);
    }
    Confusion c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i]) {
            ++(actual[i] ? c.tp : c.fp);
        } else {
            ++(actual[i] ? c.fn : c.tn);
        }
    }
    return metrics_from_confusion(c);
}

struct AwryRun {
    std::vector<AwryPrediction> predictions;
    std::size_t skipped = 0;  // too short for the protocol
    EvalMetrics metrics;
};

template <Judge C>
AwryRun run_awry(std::span<const ConversationRecord> convs, const C& judge, AwryMode mode) {
    AwryRun run;
    std::map<std::string, bool, std::less<>> truths;
    for (const auto& conv : convs) {
        if (mode == AwryMode::Offline) {
            auto p = predict_offline(conv, judge);
            if (!p) {
                ++run.skipped;
                continue;
            }
            run.predictions.push_back(std::move(*p));
        } else {
            if (conv.utterances.empty()) {
                ++run.skipped;
                continue;
            }
            run.predictions.push_back(predict_online(conv, judge));
        }
        truths[conv.id] = conv.derails;
    }
    run.metrics = evaluate_awry(run.predictions, truths);
    return run;
}

} // namespace judge
