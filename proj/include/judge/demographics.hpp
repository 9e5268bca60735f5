#pragma once

// Self-reported gender/age tags in post titles ("[M27]", "(27M)", "F 25")
// and the gender x valence association analyses built on them.

#include <array>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "judge/classifier.hpp"
#include "judge/corpus.hpp"
#include "judge/logreg.hpp"
#include "judge/stats.hpp"
#include "judge/valence_analytics.hpp"

namespace judge {

enum class Gender { Male, Female };

struct DemoTag {
    Gender gender = Gender::Male;
    int age = 0;
    std::size_t position = 0;  // byte offset of the tag in the title
    std::size_t end = 0;

    bool operator==(const DemoTag& o) const { return gender == o.gender && age == o.age; }
};

inline constexpr int kMinParseAge = 13;
inline constexpr int kMaxParseAge = 120;
inline constexpr int kMinDatasetAge = 18;

namespace detail {

inline bool is_alnum_at(std::string_view s, std::size_t i) {
    return i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]));
}

inline std::optional<Gender> gender_letter(char c) {
    if (c == 'M' || c == 'm') return Gender::Male;
    if (c == 'F' || c == 'f') return Gender::Female;
    return std::nullopt;
}

// Reads a run of 1..3 digits at i that is not followed by another digit.
inline std::optional<std::pair<int, std::size_t>> age_digits(std::string_view s, std::size_t i) {
    std::size_t j = i;
    int v = 0;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        if (j - i == 3) return std::nullopt;
        v = v * 10 + (s[j] - '0');
        ++j;
    }
    if (j == i) return std::nullopt;
    return std::pair{v, j};
}

// Tries to match a tag whose first significant character is at i.
inline std::optional<DemoTag> match_tag_at(std::string_view s, std::size_t i) {
    const std::size_t start = i;
    if (i > 0 && is_alnum_at(s, i - 1)) return std::nullopt;
    if (i < s.size() && (s[i] == '[' || s[i] == '(')) ++i;
    if (i >= s.size()) return std::nullopt;

    DemoTag tag;
    std::size_t j;
    if (auto g = gender_letter(s[i])) {
        // gender first: "M27", "M 27"
        j = i + 1;
        if (j < s.size() && s[j] == ' ') ++j;
        auto age = age_digits(s, j);
        if (!age) return std::nullopt;
        tag.gender = *g;
        tag.age = age->first;
        j = age->second;
        if (is_alnum_at(s, j)) return std::nullopt;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
        // age first: "27M", "27 M"
        auto age = age_digits(s, i);
        if (!age) return std::nullopt;
        j = age->second;
        if (j < s.size() && s[j] == ' ') ++j;
        if (j >= s.size()) return std::nullopt;
        auto g = gender_letter(s[j]);
        if (!g) return std::nullopt;
        ++j;
        if (is_alnum_at(s, j)) return std::nullopt;
        tag.gender = *g;
        tag.age = age->first;
    } else {
        return std::nullopt;
    }
    if (tag.age < kMinParseAge || tag.age > kMaxParseAge) return std::nullopt;
    if (j < s.size() && (s[j] == ']' || s[j] == ')')) ++j;
    tag.position = start;
    tag.end = j;
    return tag;
}

} // namespace detail

// Every tag in the title, left to right, non-overlapping.
inline std::vector<DemoTag> parse_demo_tags(std::string_view title) {
    std::vector<DemoTag> out;
    std::size_t i = 0;
    while (i < title.size()) {
        if (auto tag = detail::match_tag_at(title, i)) {
            out.push_back(*tag);
            i = std::max(tag->end, i + 1);
        } else {
            ++i;
        }
    }
    return out;
}

inline std::optional<DemoTag> parse_demo_tag(std::string_view title) {
    auto tags = parse_demo_tags(title);
    if (tags.empty()) return std::nullopt;
    return tags.front();
}

enum class Attribution { FirstTag, FirstPersonTag };

inline std::string_view attribution_name(Attribution a) {
    return a == Attribution::FirstTag ? "first-tag" : "first-person-tag";
}

// Byte offsets of first-person words (I, me, myself, I'm, im).
inline std::vector<std::size_t> first_person_positions(std::string_view s) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!std::isalpha(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::string word;
        while (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '\'')) {
            word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[j]))));
            ++j;
        }
        if (word == "i" || word == "me" || word == "myself" || word == "i'm" || word == "im") {
            out.push_back(i);
        }
        i = j;
    }
    return out;
}

inline std::optional<DemoTag> attribute_tag(std::string_view title, Attribution policy) {
    auto tags = parse_demo_tags(title);
    if (tags.empty()) return std::nullopt;
    if (policy == Attribution::FirstTag) return tags.front();
    const auto fp = first_person_positions(title);
    if (fp.empty()) return tags.front();
    auto distance = [&](const DemoTag& t) {
        std::size_t best = std::string_view::npos;
        for (auto p : fp) {
            const std::size_t d = p < t.position ? t.position - p : p - t.position;
            best = std::min(best, d);
        }
        return best;
    };
    const DemoTag* chosen = &tags.front();
    for (const auto& t : tags) {
        if (distance(t) < distance(*chosen)) chosen = &t;
    }
    return *chosen;
}

struct DemographicRecord {
    std::string post_id;
    std::string subreddit;
    int gender_code = 0;  // 0 female, 1 male
    int age = 0;
    Valence valence = Valence::Positive;
};

struct DemoDataset {
    std::vector<DemographicRecord> records;
    std::size_t no_tag = 0;
    std::size_t underage = 0;
    std::size_t no_judgement = 0;
};

template <Judge C>
DemoDataset build_demo_dataset(std::span<const Thread> threads, const C& judge,
                               Attribution policy = Attribution::FirstPersonTag) {
    DemoDataset ds;
    for (const auto& t : threads) {
        auto tag = attribute_tag(t.post.title, policy);
        if (!tag) {
            ++ds.no_tag;
            continue;
        }
        if (tag->age < kMinDatasetAge) {
            ++ds.underage;
            continue;
        }
        auto pj = assign_post_valence(t, judge);
        if (!pj) {
            ++ds.no_judgement;
            continue;
        }
        ds.records.push_back({t.post.id, t.post.subreddit, tag->gender == Gender::Male ? 1 : 0, tag->age,
                              pj->valence});
    }
    return ds;
}

// Rows [male, female], columns [positive, negative].
using ContingencyTable = std::array<std::array<std::uint64_t, 2>, 2>;

inline ContingencyTable demo_table(std::span<const DemographicRecord> records) {
    ContingencyTable t{};
    for (const auto& r : records) {
        ++t[r.gender_code == 1 ? 0 : 1][r.valence == Valence::Positive ? 0 : 1];
    }
    return t;
}

struct ContingencyResult {
    ContingencyTable table{};
    stats::Chi2Result chi2;
};

inline ContingencyResult demo_contingency(std::span<const DemographicRecord> records) {
    if (records.empty()) throw std::invalid_argument("demo_contingency: no records");
    ContingencyResult r;
    r.table = demo_table(records);
    r.chi2 = stats::chi_square_phi(r.table);
    return r;
}

struct CoefficientRow {
    std::string name;
    double estimate = 0;
    double standard_error = 0;
    double p_value = 1;
    double ci_low = 0, ci_high = 0;
    double odds_percent = 0;
};

struct DemoRegression {
    LogRegFit fit;
    std::array<CoefficientRow, 3> rows;  // constant, gender, age
};

inline DemoRegression demo_regression(std::span<const DemographicRecord> records, const LogRegConfig& cfg = {}) {
    if (records.size() < 3) throw TrainingError("demo_regression: need at least 3 records");
    bool male = false, female = false;
    DesignMatrix X;
    std::vector<int> y;
    X.reserve(records.size());
    y.reserve(records.size());
    for (const auto& r : records) {
        (r.gender_code == 1 ? male : female) = true;
        X.push_back({static_cast<double>(r.gender_code), static_cast<double>(r.age)});
        y.push_back(r.valence == Valence::Negative ? 1 : 0);
    }
    if (!male || !female) throw TrainingError("demo_regression: both genders must be present");

    DemoRegression out;
    out.fit = logreg_fit(X, y, cfg);
    const std::array<const char*, 3> names = {"(constant)", "gender", "age"};
    const std::array<double, 3> est = {out.fit.intercept, out.fit.weights[0], out.fit.weights[1]};
    for (std::size_t i = 0; i < 3; ++i) {
        auto& row = out.rows[i];
        row.name = names[i];
        row.estimate = est[i];
        row.standard_error = out.fit.standard_errors[i];
        row.p_value = wald_p_value(row.estimate, row.standard_error);
        row.ci_low = row.estimate - 1.96 * row.standard_error;
        row.ci_high = row.estimate + 1.96 * row.standard_error;
        row.odds_percent = stats::odds_ratio_percent(row.estimate);
    }
    return out;
}

} // namespace judge
