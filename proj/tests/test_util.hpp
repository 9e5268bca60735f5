#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "judge/judge.hpp"

namespace judge::testing {

inline RawPost make_post(std::string id, std::string sub = "AmItheAsshole", std::int64_t score = 10,
                         std::string title = "AITA?", std::string author = "op") {
    RawPost p;
    p.id = std::move(id);
    p.subreddit = std::move(sub);
    p.title = std::move(title);
    p.score = score;
    p.created_utc = 1514764800;
    p.author = std::move(author);
    return p;
}

inline RawComment make_comment(std::string id, std::string post, std::string parent, std::string body,
                               std::int64_t score = 1, std::int64_t created = 1514764900,
                               std::string author = "someone") {
    RawComment c;
    c.id = std::move(id);
    c.link_id = std::move(post);
    c.parent_id = std::move(parent);
    c.body = std::move(body);
    c.score = score;
    c.created_utc = created;
    c.author = std::move(author);
    return c;
}

inline Thread single_thread(const RawPost& post, const std::vector<RawComment>& comments) {
    std::vector<RawPost> posts{post};
    auto built = build_threads(posts, comments);
    return std::move(built.threads.front());
}

// Judges by a leading word: text starting with "neg" is Negative.
struct PrefixJudge {
    Valence operator()(JudgeInput in) const {
        return in.text.rfind("neg", 0) == 0 ? Valence::Negative : Valence::Positive;
    }
};

struct ConstantJudge {
    Valence value;
    Valence operator()(JudgeInput) const { return value; }
};

// Replays a fixed sequence of verdicts and counts invocations.
struct ScriptedJudge {
    std::vector<Valence> script;
    mutable std::size_t calls = 0;
    Valence operator()(JudgeInput) const { return script.at(calls++); }
};

} // namespace judge::testing
