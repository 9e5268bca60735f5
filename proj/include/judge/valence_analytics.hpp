#pragma once

// Judgement assignment and the popularity / inequality analyses.
//
// A post takes the valence of its highest-scoring top-level comment; a
// comment's author takes the valence of that comment's highest-scoring
// reply. "Highest" ties break to the earliest created_utc, then to the
// lexicographically smallest id. The post text itself is never classified.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "judge/classifier.hpp"
#include "judge/corpus.hpp"
#include "judge/stats.hpp"

namespace judge {

// True when a should be preferred over b as the judging comment.
inline bool outranks(const RawComment& a, const RawComment& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.created_utc != b.created_utc) return a.created_utc < b.created_utc;
    return a.id < b.id;
}

inline std::optional<std::size_t> top_scoring(const Thread& t, std::span<const std::size_t> candidates) {
    std::optional<std::size_t> best;
    for (auto i : candidates) {
        if (!best || outranks(t.nodes[i].comment, t.nodes[*best].comment)) best = i;
    }
    return best;
}

struct PostJudgement {
    std::string post_id;
    std::string subreddit;
    std::int64_t post_score = 0;
    Valence valence = Valence::Positive;
    std::string judging_comment_id;
};

template <Judge C>
std::optional<PostJudgement> assign_post_valence(const Thread& t, const C& judge) {
    const auto top = t.top_level();
    const auto best = top_scoring(t, top);
    if (!best) return std::nullopt;
    const auto& c = t.nodes[*best].comment;
    return PostJudgement{t.post.id, t.post.subreddit, t.post.score, judge(JudgeInput{c.id, c.body}), c.id};
}

struct UserJudgement {
    std::string author;
    Valence valence = Valence::Positive;
};

template <Judge C>
std::vector<UserJudgement> assign_user_judgements(const Thread& t, const C& judge) {
    std::vector<UserJudgement> out;
    if (auto pj = assign_post_valence(t, judge); pj && !is_deleted_author(t.post.author)) {
        out.push_back({t.post.author, pj->valence});
    }
    for (const auto& node : t.nodes) {
        if (node.children.empty() || is_deleted_author(node.comment.author)) continue;
        const auto& reply = t.nodes[*top_scoring(t, node.children)].comment;
        out.push_back({node.comment.author, judge(JudgeInput{reply.id, reply.body})});
    }
    return out;
}

// user -> subreddit -> number of comments authored.
using AuthoredCounts = std::map<std::string, std::map<std::string, std::uint64_t>, std::less<>>;

inline AuthoredCounts count_authored_comments(std::span<const Thread> threads) {
    AuthoredCounts counts;
    for (const auto& t : threads) {
        for (const auto& n : t.nodes) {
            if (!is_deleted_author(n.comment.author)) ++counts[n.comment.author][t.post.subreddit];
        }
    }
    return counts;
}

struct UserTally {
    std::string user;
    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;
    std::uint64_t n_comments_authored = 0;
    std::map<std::string, std::uint64_t> comments_by_subreddit;
    double negativity_p = 1.0;

    std::uint64_t judged() const { return n_pos + n_neg; }
};

inline constexpr std::uint64_t kDefaultMinJudged = 50;
inline constexpr double kNegativityCutoff = 0.05;

struct TallyOptions {
    std::uint64_t min_n = kDefaultMinJudged;
    std::optional<double> p0;  // default: negative share of retained judgements
};

struct TallyResult {
    std::vector<UserTally> users;  // sorted by user
    double p0 = 0;
    std::size_t users_dropped = 0;
};

inline TallyResult tally_users(std::span<const UserJudgement> judgements, const AuthoredCounts& authored,
                               const TallyOptions& opt = {}) {
    std::map<std::string, UserTally, std::less<>> by_user;
    for (const auto& j : judgements) {
        if (is_deleted_author(j.author)) continue;
        auto& u = by_user[j.author];
        ++(j.valence == Valence::Negative ? u.n_neg : u.n_pos);
    }
    TallyResult res;
    std::uint64_t neg = 0, total = 0;
    for (auto& [name, u] : by_user) {
        if (u.judged() < opt.min_n) {
            ++res.users_dropped;
            continue;
        }
        u.user = name;
        if (auto it = authored.find(name); it != authored.end()) {
            u.comments_by_subreddit = it->second;
            for (const auto& [_, c] : it->second) u.n_comments_authored += c;
        }
        neg += u.n_neg;
        total += u.judged();
        res.users.push_back(std::move(u));
    }
    res.p0 = opt.p0 ? *opt.p0 : (total ? static_cast<double>(neg) / static_cast<double>(total) : 0.0);
    for (auto& u : res.users) {
        u.negativity_p = stats::binomial_test_one_sided(static_cast<std::int64_t>(u.n_neg),
                                                        static_cast<std::int64_t>(u.judged()), res.p0);
    }
    return res;
}

inline TallyResult tally_users(std::span<const UserJudgement> judgements, const TallyOptions& opt = {}) {
    return tally_users(judgements, AuthoredCounts{}, opt);
}

struct CurvePoint {
    double threshold = 0;
    double ratio = 0;
};

using CumulativeCurve = std::vector<CurvePoint>;

// Per subreddit: share of comments written by users whose negativity p-value
// is at most t, for each threshold t.
inline std::map<std::string, CumulativeCurve> negativity_comment_fraction(std::span<const UserTally> tallies,
                                                                          std::span<const double> thresholds) {
    std::vector<double> grid(thresholds.begin(), thresholds.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::map<std::string, std::vector<std::pair<double, std::uint64_t>>> per_sub;
    for (const auto& u : tallies) {
        for (const auto& [sub, c] : u.comments_by_subreddit) per_sub[sub].emplace_back(u.negativity_p, c);
    }
    std::map<std::string, CumulativeCurve> out;
    for (const auto& [sub, users] : per_sub) {
        std::uint64_t denom = 0;
        for (const auto& [_, c] : users) denom += c;
        if (denom == 0) continue;
        CumulativeCurve curve;
        for (double t : grid) {
            std::uint64_t num = 0;
            for (const auto& [p, c] : users) {
                if (p <= t) num += c;
            }
            curve.push_back({t, static_cast<double>(num) / static_cast<double>(denom)});
        }
        out.emplace(sub, std::move(curve));
    }
    return out;
}

// Share of Positive judgements among posts with score >= s, for each distinct
// post score s ascending.
inline CumulativeCurve cumulative_positive_ratio(std::span<const PostJudgement> judgements) {
    std::vector<std::pair<std::int64_t, bool>> items;
    items.reserve(judgements.size());
    for (const auto& j : judgements) items.emplace_back(j.post_score, j.valence == Valence::Positive);
    std::sort(items.begin(), items.end());
    CumulativeCurve rev;
    std::uint64_t pos = 0, total = 0;
    std::size_t i = items.size();
    while (i > 0) {
        const auto score = items[i - 1].first;
        while (i > 0 && items[i - 1].first == score) {
            pos += items[i - 1].second;
            ++total;
            --i;
        }
        rev.push_back({static_cast<double>(score), static_cast<double>(pos) / static_cast<double>(total)});
    }
    return {rev.rbegin(), rev.rend()};
}

struct PopularityTest {
    std::string subreddit;
    std::size_t n_positive = 0, n_negative = 0;
    bool tested = false;  // false when one valence group is empty
    stats::MWResult mw;
    double p_adjusted = 1.0;
};

// Mann-Whitney of Positive-judged vs Negative-judged post scores in each
// subreddit, Bonferroni-adjusted across the subreddits actually tested.
inline std::vector<PopularityTest> popularity_significance(
    const std::map<std::string, std::vector<PostJudgement>>& by_subreddit) {
    std::vector<PopularityTest> out;
    std::vector<double> pvals;
    for (const auto& [sub, js] : by_subreddit) {
        PopularityTest t;
        t.subreddit = sub;
        std::vector<double> pos, neg;
        for (const auto& j : js) {
            (j.valence == Valence::Positive ? pos : neg).push_back(static_cast<double>(j.post_score));
        }
        t.n_positive = pos.size();
        t.n_negative = neg.size();
        if (!pos.empty() && !neg.empty()) {
            t.tested = true;
            t.mw = stats::mann_whitney(pos, neg);
            pvals.push_back(t.mw.p_two_tailed);
        }
        out.push_back(std::move(t));
    }
    const auto adjusted = stats::bonferroni(pvals);
    std::size_t k = 0;
    for (auto& t : out) {
        if (t.tested) t.p_adjusted = adjusted[k++];
    }
    return out;
}

inline std::map<std::string, std::vector<PostJudgement>> group_by_subreddit(std::span<const PostJudgement> js) {
    std::map<std::string, std::vector<PostJudgement>> out;
    for (const auto& j : js) out[j.subreddit].push_back(j);
    return out;
}

} // namespace judge
