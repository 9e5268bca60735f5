// Writes a small synthetic Pushshift-style corpus plus a conversation file.
// Usage: make_fixture OUT_DIR [SEED]

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "judge/rng.hpp"

namespace {

using judge::Rng;
using nlohmann::ordered_json;

const std::vector<std::string> kSubreddits = {"AmItheAsshole", "relationship_advice", "relationships"};

const std::vector<std::string> kNeutral = {"the", "a", "and", "to", "of", "it", "that", "was", "is", "in",
                                           "for", "with", "about", "this", "they", "just", "really", "time"};
const std::vector<std::string> kPositiveWords = {"understandable", "fine", "fair", "reasonable", "boundaries",
                                                 "support", "valid", "kind", "right", "deserve"};
const std::vector<std::string> kNegativeWords = {"rude", "selfish", "apologize", "petty", "entitled",
                                                 "wrong", "immature", "cruel", "jerk", "overreacted"};

const std::vector<std::string> kTitles = {
    "AITA for skipping my sister's wedding",
    "I {tag} told my roommate {tag2} to move out",
    "WIBTA if I {tag} refused to lend money",
    "My partner {tag2} and I {tag} argued about chores",
    "AITA for not inviting my friend {tag2} to dinner",
    "Me {tag} and my dad {tag2} stopped talking",
    "AITA for eating the last slice",
};

std::string demo_tag(Rng& rng) {
    const char g = rng.bernoulli(0.5) ? 'M' : 'F';
    const int age = 14 + static_cast<int>(rng.below(30));
    const std::string digits = std::to_string(age);
    switch (rng.below(4)) {
        case 0: return "[" + std::string(1, g) + digits + "]";
        case 1: return "(" + digits + std::string(1, g) + ")";
        case 2: return digits + std::string(1, g);
        default: return "(" + std::string(1, g) + digits + ")";
    }
}

std::string fill(std::string s, const std::string& key, const std::string& value) {
    const auto at = s.find(key);
    if (at != std::string::npos) s.replace(at, key.size(), value);
    return s;
}

std::string sentence(Rng& rng, const std::vector<std::string>& cue, int cues, int length) {
    std::string out;
    for (int i = 0; i < length; ++i) {
        const auto& pool = (i < cues) ? cue : kNeutral;
        if (!out.empty()) out += ' ';
        out += pool[rng.below(pool.size())];
    }
    return out;
}

std::string user(Rng& rng) { return "user" + std::to_string(rng.below(40)); }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fixture OUT_DIR [SEED]\n";
        return 1;
    }
    const std::filesystem::path out = argv[1];
    const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 7;
    std::filesystem::create_directories(out);
    Rng rng(seed);

    std::ofstream posts(out / "posts.ndjson", std::ios::binary);
    std::ofstream comments(out / "comments.ndjson", std::ios::binary);
    const std::int64_t base = 1546300800;  // 2019-01-01

    for (int p = 0; p < 90; ++p) {
        const std::string pid = "p" + std::to_string(p);
        const auto& sub = kSubreddits[rng.below(kSubreddits.size())];
        std::string title = kTitles[rng.below(kTitles.size())];
        title = fill(title, "{tag}", demo_tag(rng));
        title = fill(title, "{tag2}", demo_tag(rng));
        const std::int64_t created = base + static_cast<std::int64_t>(rng.below(700)) * 86400;
        const bool guilty = rng.bernoulli(0.3);
        ordered_json post = {{"id", pid},
                             {"subreddit", sub},
                             {"title", title},
                             {"selftext", "Throwaway. " + sentence(rng, kNeutral, 0, 20)},
                             {"score", static_cast<std::int64_t>(rng.below(guilty ? 400 : 2000))},
                             {"created_utc", created},
                             {"author", p % 17 == 0 ? "[deleted]" : user(rng)}};
        posts << post.dump() << "\n";

        // Posts with index divisible by 9 are short and fall under the default filter.
        const int n_comments = (p % 9 == 0) ? 10 + static_cast<int>(rng.below(20))
                                            : 52 + static_cast<int>(rng.below(20));
        std::vector<std::string> ids;
        for (int c = 0; c < n_comments; ++c) {
            const std::string cid = pid + "c" + std::to_string(c);
            const bool top = ids.empty() || rng.bernoulli(0.35);
            const std::string parent = top ? "t3_" + pid : "t1_" + ids[rng.below(ids.size())];
            std::string body;
            if (top) {
                const bool negative = rng.bernoulli(guilty ? 0.75 : 0.2);
                const double r = rng.uniform();
                std::string prefix;
                if (r < 0.05) {
                    prefix = "INFO";
                } else if (r < 0.1) {
                    prefix = "";
                } else if (negative) {
                    prefix = rng.bernoulli(0.85) ? "YTA" : "ESH";
                } else {
                    prefix = rng.bernoulli(0.85) ? "NTA" : "NAH";
                }
                if (rng.bernoulli(0.2)) {
                    for (auto& ch : prefix) ch = static_cast<char>(ch - 'A' + 'a');
                }
                const auto& cue = negative ? kNegativeWords : kPositiveWords;
                body = (prefix.empty() ? "" : prefix + ". ") + sentence(rng, cue, 3, 12);
            } else if (rng.bernoulli(0.4)) {
                body = sentence(rng, rng.bernoulli(0.4) ? kNegativeWords : kPositiveWords, 2, 8);
            } else {
                body = sentence(rng, kNeutral, 0, 8);
            }
            ordered_json cm = {{"id", cid},
                               {"link_id", "t3_" + pid},
                               {"parent_id", parent},
                               {"body", body},
                               {"score", static_cast<std::int64_t>(rng.below(200)) - 20},
                               {"created_utc", created + 60 * (c + 1)},
                               {"author", c % 23 == 5 ? "[deleted]" : user(rng)}};
            comments << cm.dump() << "\n";
            ids.push_back(cid);
        }
        if (p == 3) comments << "{\"id\": \"broken\", \"link_id\": \n";
        if (p == 5) {
            ordered_json orphan = {{"id", "orph1"}, {"link_id", "t3_" + pid}, {"parent_id", "t1_missing"},
                                   {"body", "NTA obviously"}, {"score", 1}, {"created_utc", created + 5},
                                   {"author", "user1"}};
            comments << orphan.dump() << "\n";
        }
    }

    std::ofstream convs(out / "conversations.ndjson", std::ios::binary);
    for (int c = 0; c < 60; ++c) {
        const bool derails = rng.bernoulli(0.5);
        const int n = 1 + static_cast<int>(rng.below(6));
        ordered_json utt = ordered_json::array();
        for (int u = 0; u < n; ++u) {
            const bool hostile = derails && u >= 1 && rng.bernoulli(0.5);
            const auto& cue = hostile ? kNegativeWords : kPositiveWords;
            utt.push_back({{"author", user(rng)}, {"text", sentence(rng, cue, u == 0 ? 0 : 2, 10)}});
        }
        convs << ordered_json{{"id", "conv" + std::to_string(c)}, {"utterances", utt}, {"derails", derails}}.dump()
              << "\n";
    }
    return 0;
}
