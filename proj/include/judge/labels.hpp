#pragma once

// Prefix-label extraction ("NTA ...", "**YTA.**") from top-level comments and
// the two-class valence mapping used for training.

#include <array>
#include <cctype>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "judge/corpus.hpp"

namespace judge {

enum class JudgementLabel { NTA, YTA, NAH, ESH, INFO };

// Class order is fixed: Positive first.
enum class Valence { Positive = 0, Negative = 1 };

inline constexpr std::array<JudgementLabel, 5> kAllLabels = {
    JudgementLabel::NTA, JudgementLabel::YTA, JudgementLabel::NAH, JudgementLabel::ESH,
    JudgementLabel::INFO};

inline constexpr std::string_view label_name(JudgementLabel l) {
    switch (l) {
    case JudgementLabel::NTA: return "NTA";
    case JudgementLabel::YTA: return "YTA";
    case JudgementLabel::NAH: return "NAH";
    case JudgementLabel::ESH: return "ESH";
    case JudgementLabel::INFO: return "INFO";
    }
    return "?";
}

inline constexpr std::string_view valence_name(Valence v) {
    return v == Valence::Positive ? "positive" : "negative";
}

inline std::optional<Valence> parse_valence(std::string_view s) {
    if (s == "positive") return Valence::Positive;
    if (s == "negative") return Valence::Negative;
    return std::nullopt;
}

inline std::optional<JudgementLabel> parse_label_name(std::string_view s) {
    for (auto l : kAllLabels) {
        if (label_name(l) == s) return l;
    }
    return std::nullopt;
}

inline constexpr Valence flip(Valence v) {
    return v == Valence::Positive ? Valence::Negative : Valence::Positive;
}

inline std::optional<JudgementLabel> extract_label(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c) || c == '>' || c == '*' || c == '[' || c == '(') {
            ++i;
        } else {
            break;
        }
    }
    std::size_t end = i;
    while (end < text.size() && std::isalnum(static_cast<unsigned char>(text[end]))) ++end;
    if (end == i || !std::isalpha(static_cast<unsigned char>(text[i]))) return std::nullopt;

    std::string token(text.substr(i, end - i));
    for (auto& ch : token) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return parse_label_name(token);
}

inline Valence label_valence(JudgementLabel label) {
    switch (label) {
    case JudgementLabel::NTA:
    case JudgementLabel::NAH: return Valence::Positive;
    case JudgementLabel::YTA:
    case JudgementLabel::ESH: return Valence::Negative;
    case JudgementLabel::INFO: break;
    }
    throw std::invalid_argument("label_valence: INFO carries no valence");
}

struct LabeledComment {
    RawComment comment;
    JudgementLabel label = JudgementLabel::NTA;
    Valence valence = Valence::Positive;
    std::string post_id;
};

struct LabelHistogram {
    std::size_t nta = 0, yta = 0, nah = 0, esh = 0;
    std::size_t info_dropped = 0;
    std::size_t unlabeled_dropped = 0;

    std::size_t total() const { return nta + yta + nah + esh; }
    std::size_t positive() const { return nta + nah; }
    std::size_t negative() const { return yta + esh; }

    void add(JudgementLabel l) {
        switch (l) {
        case JudgementLabel::NTA: ++nta; break;
        case JudgementLabel::YTA: ++yta; break;
        case JudgementLabel::NAH: ++nah; break;
        case JudgementLabel::ESH: ++esh; break;
        case JudgementLabel::INFO: ++info_dropped; break;
        }
    }
};

struct LabeledCorpus {
    std::vector<LabeledComment> comments;
    LabelHistogram histogram;
};

inline LabeledCorpus build_labeled_corpus(std::span<const Thread> threads) {
    LabeledCorpus out;
    for (const auto& t : threads) {
        for (auto idx : t.top_level()) {
            const auto& c = t.nodes[idx].comment;
            auto label = extract_label(c.body);
            if (!label) {
                ++out.histogram.unlabeled_dropped;
                continue;
            }
            out.histogram.add(*label);
            if (*label == JudgementLabel::INFO) continue;
            out.comments.push_back({c, *label, label_valence(*label), t.post.id});
        }
    }
    return out;
}

// Labeled-corpus NDJSON: post_id, comment_id, label, valence, body.
inline nlohmann::ordered_json to_json(const LabeledComment& lc) {
    return {{"post_id", lc.post_id},
            {"comment_id", lc.comment.id},
            {"label", label_name(lc.label)},
            {"valence", valence_name(lc.valence)},
            {"body", lc.comment.body}};
}

inline std::vector<LabeledComment> read_labeled_corpus(std::istream& in) {
    std::vector<LabeledComment> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank(line)) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw SchemaError("not a JSON object", lineno);
        auto field = [&](const char* key) {
            auto v = detail::json_string(j, key);
            if (!v) throw SchemaError(std::string("missing field ") + key, lineno);
            return *v;
        };
        LabeledComment lc;
        lc.post_id = field("post_id");
        lc.comment.id = field("comment_id");
        lc.comment.body = field("body");
        lc.comment.link_id = lc.post_id;
        lc.comment.parent_id = lc.post_id;
        auto label = parse_label_name(field("label"));
        auto valence = parse_valence(field("valence"));
        if (!label || *label == JudgementLabel::INFO) throw SchemaError("bad label", lineno);
        if (!valence || *valence != label_valence(*label)) {
            throw SchemaError("valence inconsistent with label", lineno);
        }
        lc.label = *label;
        lc.valence = *valence;
        out.push_back(std::move(lc));
    }
    return out;
}

} // namespace judge
