#pragma once

// Pushshift-style dump ingestion: typed post/comment records, comment-forest
// reconstruction and the corpus filters (date window, comment threshold,
// subreddit allow-list).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "judge/error.hpp"

namespace judge {

struct RawPost {
    std::string id;
    std::string subreddit;
    std::string title;
    std::string selftext;
    std::int64_t score = 0;
    std::int64_t created_utc = 0;
    std::string author;

    bool operator==(const RawPost&) const = default;
};

struct RawComment {
    std::string id;
    std::string link_id;
    std::string parent_id;
    std::string body;
    std::int64_t score = 0;
    std::int64_t created_utc = 0;
    std::string author;

    // Ids are stored without their "t1_"/"t3_" kind prefix, so a comment
    // answers the post directly iff its parent is the linked post.
    bool is_top_level() const { return parent_id == link_id; }

    bool operator==(const RawComment&) const = default;
};

inline bool is_deleted_author(std::string_view author) {
    return author.empty() || author == "[deleted]" || author == "[removed]";
}

// Strip a Reddit fullname kind prefix ("t1_", "t3_", ...).
inline std::string normalize_id(std::string_view id) {
    if (id.size() > 3 && id[0] == 't' && std::isdigit(static_cast<unsigned char>(id[1])) &&
        id[2] == '_') {
        id.remove_prefix(3);
    }
    return std::string(id);
}

struct ParseStats {
    std::size_t lines = 0;      // nonempty lines seen
    std::size_t parsed = 0;
    std::size_t malformed = 0;
    std::size_t warnings = 0;   // e.g. missing score defaulted to 0

    bool operator==(const ParseStats&) const = default;
};

template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    ParseStats stats;
};

namespace detail {

inline std::optional<std::string> json_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    return std::nullopt;
}

// Integers in older dumps are sometimes strings or floats.
inline std::optional<std::int64_t> json_int(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_number_float()) return static_cast<std::int64_t>(it->get<double>());
    if (it->is_string()) {
        const auto& s = it->get_ref<const std::string&>();
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used == s.size()) return static_cast<std::int64_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

inline bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

// Calls on_record(json, stats) for every nonempty line that parses as a JSON
// object; counts the rest as malformed.
template <typename OnRecord>
void for_each_json_line(std::istream& in, ParseStats& stats, OnRecord&& on_record) {
    std::string line;
    std::uint64_t offset = 0;
    while (true) {
        if (!std::getline(in, line)) {
            if (in.bad()) throw IngestError("stream read failure", offset);
            break;
        }
        offset += line.size() + 1;
        if (is_blank(line)) continue;
        ++stats.lines;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++stats.malformed;
            continue;
        }
        if (on_record(j, stats)) {
            ++stats.parsed;
        } else {
            ++stats.malformed;
        }
    }
}

} // namespace detail

inline ParseResult<RawPost> parse_posts(std::istream& in) {
    ParseResult<RawPost> out;
    detail::for_each_json_line(in, out.stats, [&](const nlohmann::json& j, ParseStats& stats) {
        auto id = detail::json_string(j, "id");
        auto subreddit = detail::json_string(j, "subreddit");
        auto created = detail::json_int(j, "created_utc");
        if (!id || id->empty() || !subreddit || subreddit->empty() || !created || *created <= 0) {
            return false;
        }
        RawPost p;
        p.id = normalize_id(*id);
        p.subreddit = std::move(*subreddit);
        p.title = detail::json_string(j, "title").value_or("");
        p.selftext = detail::json_string(j, "selftext").value_or("");
        p.author = detail::json_string(j, "author").value_or("[deleted]");
        p.created_utc = *created;
        if (auto score = detail::json_int(j, "score")) {
            p.score = *score;
        } else {
            ++stats.warnings;
        }
        out.records.push_back(std::move(p));
        return true;
    });
    return out;
}

inline ParseResult<RawComment> parse_comments(std::istream& in) {
    ParseResult<RawComment> out;
    detail::for_each_json_line(in, out.stats, [&](const nlohmann::json& j, ParseStats& stats) {
        auto id = detail::json_string(j, "id");
        auto link = detail::json_string(j, "link_id");
        auto parent = detail::json_string(j, "parent_id");
        auto body = detail::json_string(j, "body");
        auto created = detail::json_int(j, "created_utc");
        if (!id || id->empty() || !link || link->empty() || !parent || parent->empty() || !body ||
            !created) {
            return false;
        }
        RawComment c;
        c.id = normalize_id(*id);
        c.link_id = normalize_id(*link);
        c.parent_id = normalize_id(*parent);
        c.body = std::move(*body);
        c.created_utc = *created;
        c.author = detail::json_string(j, "author").value_or("[deleted]");
        if (auto score = detail::json_int(j, "score")) {
            c.score = *score;
        } else {
            ++stats.warnings;
        }
        out.records.push_back(std::move(c));
        return true;
    });
    return out;
}

inline nlohmann::ordered_json to_json(const RawPost& p) {
    return {{"id", p.id},         {"subreddit", p.subreddit},
            {"title", p.title},   {"selftext", p.selftext},
            {"score", p.score},   {"created_utc", p.created_utc},
            {"author", p.author}};
}

inline nlohmann::ordered_json to_json(const RawComment& c) {
    return {{"id", c.id},       {"link_id", c.link_id}, {"parent_id", c.parent_id},
            {"body", c.body},   {"score", c.score},     {"created_utc", c.created_utc},
            {"author", c.author}};
}

// ---------------------------------------------------------------------------
// Threads

struct CommentNode {
    RawComment comment;
    std::vector<std::size_t> children;  // indices into Thread::nodes
    bool orphan = false;                // parent missing or part of a cycle
};

struct Thread {
    RawPost post;
    std::vector<CommentNode> nodes;   // ordered by (created_utc, id)
    std::vector<std::size_t> roots;   // genuine top-level comments, then orphans

    std::size_t comment_count() const { return nodes.size(); }

    // Comments that answer the post directly (orphans excluded).
    std::vector<std::size_t> top_level() const {
        std::vector<std::size_t> out;
        for (auto r : roots) {
            if (!nodes[r].orphan) out.push_back(r);
        }
        return out;
    }
};

struct ThreadBuildStats {
    std::size_t threads = 0;
    std::size_t comments_attached = 0;
    std::size_t unmatched_link = 0;      // link_id names no post
    std::size_t duplicate_comments = 0;
    std::size_t duplicate_posts = 0;
    std::size_t orphans = 0;             // includes cycle members
    std::size_t cycles = 0;

    bool operator==(const ThreadBuildStats&) const = default;
};

struct ThreadBuildResult {
    std::vector<Thread> threads;
    ThreadBuildStats stats;
};

namespace detail {

inline bool comment_order(const RawComment& a, const RawComment& b) {
    if (a.created_utc != b.created_utc) return a.created_utc < b.created_utc;
    return a.id < b.id;
}

inline void link_forest(Thread& t, ThreadBuildStats& stats) {
    auto& nodes = t.nodes;
    std::sort(nodes.begin(), nodes.end(), [](const CommentNode& a, const CommentNode& b) {
        return comment_order(a.comment, b.comment);
    });
    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i].comment.id, i);

    constexpr std::size_t kPost = static_cast<std::size_t>(-1);
    constexpr std::size_t kMissing = static_cast<std::size_t>(-2);
    std::vector<std::size_t> parent(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& c = nodes[i].comment;
        if (c.is_top_level()) {
            parent[i] = kPost;
        } else if (auto it = index.find(c.parent_id); it != index.end()) {
            parent[i] = it->second;
        } else {
            parent[i] = kMissing;
        }
    }

    // Walk every parent chain once; cycle members become orphan roots.
    enum class Mark : std::uint8_t { Unvisited, InProgress, Done };
    std::vector<Mark> mark(nodes.size(), Mark::Unvisited);
    std::vector<std::size_t> path;
    for (std::size_t start = 0; start < nodes.size(); ++start) {
        if (mark[start] != Mark::Unvisited) continue;
        path.clear();
        std::size_t cur = start;
        while (cur != kPost && cur != kMissing && mark[cur] == Mark::Unvisited) {
            mark[cur] = Mark::InProgress;
            path.push_back(cur);
            cur = parent[cur];
        }
        if (cur != kPost && cur != kMissing && mark[cur] == Mark::InProgress) {
            ++stats.cycles;
            std::size_t member = cur;
            do {
                std::size_t next = parent[member];
                parent[member] = kMissing;
                member = next;
            } while (member != cur);
        }
        for (auto p : path) mark[p] = Mark::Done;
    }

    std::vector<std::size_t> orphan_roots;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (parent[i] == kPost) {
            t.roots.push_back(i);
        } else if (parent[i] == kMissing) {
            nodes[i].orphan = true;
            orphan_roots.push_back(i);
            ++stats.orphans;
        } else {
            nodes[parent[i]].children.push_back(i);
        }
    }
    t.roots.insert(t.roots.end(), orphan_roots.begin(), orphan_roots.end());
}

} // namespace detail

inline ThreadBuildResult build_threads(std::span<const RawPost> posts,
                                       std::span<const RawComment> comments) {
    ThreadBuildResult out;
    std::unordered_map<std::string_view, std::size_t> post_index;
    for (const auto& p : posts) {
        if (post_index.contains(p.id)) {
            ++out.stats.duplicate_posts;
            continue;
        }
        post_index.emplace(p.id, out.threads.size());
        Thread t;
        t.post = p;
        out.threads.push_back(std::move(t));
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& c : comments) {
        if (!seen.insert(c.id).second) {
            ++out.stats.duplicate_comments;
            continue;
        }
        auto it = post_index.find(c.link_id);
        if (it == post_index.end()) {
            ++out.stats.unmatched_link;
            continue;
        }
        out.threads[it->second].nodes.push_back(CommentNode{c, {}, false});
        ++out.stats.comments_attached;
    }
    for (auto& t : out.threads) detail::link_forest(t, out.stats);
    out.stats.threads = out.threads.size();
    return out;
}

// ---------------------------------------------------------------------------
// Filtering

struct CorpusFilter {
    std::optional<std::int64_t> date_from;  // inclusive, epoch seconds
    std::optional<std::int64_t> date_to;    // inclusive
    std::size_t min_comments = 0;
    std::vector<std::string> subreddits;    // empty = allow all
};

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

} // namespace detail

inline bool passes(const Thread& t, const CorpusFilter& f) {
    const auto ts = t.post.created_utc;
    if (f.date_from && ts < *f.date_from) return false;
    if (f.date_to && ts > *f.date_to) return false;
    if (t.comment_count() < f.min_comments) return false;
    if (!f.subreddits.empty() &&
        std::none_of(f.subreddits.begin(), f.subreddits.end(),
                     [&](const std::string& s) { return detail::iequals(s, t.post.subreddit); })) {
        return false;
    }
    return true;
}

inline std::vector<Thread> filter_corpus(std::vector<Thread> threads, const CorpusFilter& f) {
    if (f.date_from && f.date_to && *f.date_from > *f.date_to) {
        throw std::invalid_argument("filter_corpus: date_from after date_to");
    }
    std::erase_if(threads, [&](const Thread& t) { return !passes(t, f); });
    return threads;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// Parses "YYYY-MM-DD" to the epoch second at 00:00:00 UTC.
inline std::optional<std::int64_t> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<unsigned> {
        unsigned v = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
            v = v * 10 + static_cast<unsigned>(s[i] - '0');
        }
        return v;
    };
    auto y = digits(0, 4);
    auto m = digits(5, 2);
    auto d = digits(8, 2);
    if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
    return days_from_civil(*y, *m, *d) * 86400;
}

// ---------------------------------------------------------------------------
// Thread persistence: one thread per line, {"post": {...}, "comments": [...]}.

inline nlohmann::ordered_json thread_to_json(const Thread& t) {
    nlohmann::ordered_json comments = nlohmann::ordered_json::array();
    for (const auto& n : t.nodes) comments.push_back(to_json(n.comment));
    return {{"post", to_json(t.post)}, {"comments", std::move(comments)}};
}

inline std::vector<Thread> read_threads(std::istream& in) {
    std::vector<Thread> threads;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank(line)) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("post") || !j.contains("comments")) {
            throw SchemaError("malformed thread record", lineno);
        }
        std::string post_line = j["post"].dump();
        std::string comment_lines;
        for (const auto& c : j["comments"]) comment_lines += c.dump() + "\n";
        std::istringstream ps(post_line), cs(comment_lines);
        auto posts = parse_posts(ps);
        auto comments = parse_comments(cs);
        if (posts.records.size() != 1 || comments.stats.malformed != 0) {
            throw SchemaError("thread record failed validation", lineno);
        }
        auto built = build_threads(posts.records, comments.records);
        threads.push_back(std::move(built.threads.front()));
    }
    if (in.bad()) throw DataError("stream read failure while loading threads");
    return threads;
}

} // namespace judge
