#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.hpp"

using namespace judge;
using namespace judge::testing;

TEST(PostValence, HighestScoreJudges) {
    auto t = single_thread(make_post("p1"), {make_comment("a", "p1", "p1", "pos", 5, 1),
                                             make_comment("b", "p1", "p1", "neg", 9, 2),
                                             make_comment("c", "p1", "p1", "pos", 2, 3)});
    const auto pj = assign_post_valence(t, PrefixJudge{});
    ASSERT_TRUE(pj);
    EXPECT_EQ(pj->valence, Valence::Negative);
    EXPECT_EQ(pj->judging_comment_id, "b");
}

TEST(PostValence, TieGoesToEarlierComment) {
    auto t = single_thread(make_post("p1"), {make_comment("late", "p1", "p1", "neg", 7, 20),
                                             make_comment("early", "p1", "p1", "pos", 7, 10)});
    const auto pj = assign_post_valence(t, PrefixJudge{});
    EXPECT_EQ(pj->valence, Valence::Positive);
    EXPECT_EQ(pj->judging_comment_id, "early");
}

TEST(PostValence, SingleCommentJudgesRegardlessOfScore) {
    auto t = single_thread(make_post("p1"), {make_comment("a", "p1", "p1", "neg", -40, 1)});
    EXPECT_EQ(assign_post_valence(t, PrefixJudge{})->valence, Valence::Negative);
    auto empty = single_thread(make_post("p2"), {make_comment("r", "p2", "missing", "neg", 3, 1)});
    EXPECT_FALSE(assign_post_valence(empty, PrefixJudge{}));
}

TEST(PostValence, InvariantToCommentOrder) {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RawComment> cs;
        for (int i = 0; i < 12; ++i) {
            cs.push_back(make_comment("c" + std::to_string(i), "p1", rng.bernoulli(0.8) ? "p1" : "c0",
                                      rng.bernoulli(0.5) ? "neg" : "pos", static_cast<std::int64_t>(rng.below(4)),
                                      static_cast<std::int64_t>(rng.below(3))));
        }
        const auto a = assign_post_valence(single_thread(make_post("p1"), cs), PrefixJudge{});
        rng.shuffle(std::span<RawComment>(cs));
        const auto b = assign_post_valence(single_thread(make_post("p1"), cs), PrefixJudge{});
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_EQ(a->judging_comment_id, b->judging_comment_id);
    }
}

TEST(UserJudgements, PostAndCommentAuthors) {
    auto post = make_post("p1", "AmItheAsshole", 10, "AITA", "u1");
    auto t = single_thread(post, {make_comment("c1", "p1", "p1", "neg top", 10, 1, "u2"),
                                  make_comment("c2", "p1", "c1", "pos reply", 5, 2, "u3"),
                                  make_comment("c3", "p1", "c1", "neg reply", 1, 3, "u4")});
    const auto js = assign_user_judgements(t, PrefixJudge{});
    ASSERT_EQ(js.size(), 2u);
    EXPECT_EQ(js[0].author, "u1");
    EXPECT_EQ(js[0].valence, Valence::Negative);
    EXPECT_EQ(js[1].author, "u2");
    EXPECT_EQ(js[1].valence, Valence::Positive);
}

TEST(UserJudgements, PerCommentTallyAndDeletedAuthors) {
    auto post = make_post("p1", "a", 1, "t", "[deleted]");
    auto t = single_thread(post, {make_comment("c1", "p1", "p1", "x", 1, 1, "u2"),
                                  make_comment("r1", "p1", "c1", "neg", 1, 2, "u9"),
                                  make_comment("c2", "p1", "p1", "x", 1, 3, "u2"),
                                  make_comment("r2", "p1", "c2", "neg", 1, 4, "u9"),
                                  make_comment("c3", "p1", "p1", "x", 1, 5, "[deleted]"),
                                  make_comment("r3", "p1", "c3", "neg", 1, 6, "u9")});
    const auto js = assign_user_judgements(t, PrefixJudge{});
    ASSERT_EQ(js.size(), 2u);
    for (const auto& j : js) {
        EXPECT_EQ(j.author, "u2");
        EXPECT_EQ(j.valence, Valence::Negative);
    }
}

TEST(TallyUsers, BinomialAgainstNull) {
    std::vector<UserJudgement> js;
    for (int i = 0; i < 60; ++i) js.push_back({"u1", i < 30 ? Valence::Negative : Valence::Positive});
    TallyOptions opt;
    opt.p0 = 0.5;
    const auto r = tally_users(js, opt);
    ASSERT_EQ(r.users.size(), 1u);
    EXPECT_NEAR(r.users[0].negativity_p, 0.5512890865042848, 1e-12);
}

TEST(TallyUsers, MinimumJudgementsAndDefaultNull) {
    std::vector<UserJudgement> js;
    for (int i = 0; i < 49; ++i) js.push_back({"few", Valence::Negative});
    for (int i = 0; i < 50; ++i) js.push_back({"many", i % 4 == 0 ? Valence::Negative : Valence::Positive});
    const auto r = tally_users(js);
    ASSERT_EQ(r.users.size(), 1u);
    EXPECT_EQ(r.users[0].user, "many");
    EXPECT_EQ(r.users_dropped, 1u);
    EXPECT_NEAR(r.p0, 13.0 / 50.0, 1e-15);
}

TEST(TallyUsers, AllNegativeUserIsExtreme) {
    std::vector<UserJudgement> js(50, {"u", Valence::Negative});
    TallyOptions opt;
    opt.p0 = 0.36;
    EXPECT_LT(tally_users(js, opt).users[0].negativity_p, 1e-9);
}

TEST(TallyUsers, SumOfJudgementsMatches) {
    Rng rng(43);
    std::vector<UserJudgement> js;
    std::size_t deleted = 0;
    for (int i = 0; i < 2000; ++i) {
        const bool del = rng.bernoulli(0.05);
        deleted += del;
        js.push_back({del ? "[deleted]" : "u" + std::to_string(rng.below(25)),
                      rng.bernoulli(0.3) ? Valence::Negative : Valence::Positive});
    }
    TallyOptions opt;
    opt.min_n = 0;
    const auto r = tally_users(js, opt);
    std::uint64_t total = 0;
    for (const auto& u : r.users) total += u.judged();
    EXPECT_EQ(total, js.size() - deleted);
}

TEST(NegativityCurve, DirectCounting) {
    std::vector<UserTally> ts(3);
    ts[0].negativity_p = 0.01;
    ts[0].comments_by_subreddit["s"] = 100;
    ts[1].negativity_p = 0.04;
    ts[1].comments_by_subreddit["s"] = 50;
    ts[2].negativity_p = 0.2;
    ts[2].comments_by_subreddit["s"] = 200;
    const std::vector<double> grid{0.001, 0.05, 1.0};
    const auto curves = negativity_comment_fraction(ts, grid);
    const auto& c = curves.at("s");
    ASSERT_EQ(c.size(), 3u);
    EXPECT_DOUBLE_EQ(c[0].ratio, 0.0);
    EXPECT_NEAR(c[1].ratio, 150.0 / 350.0, 1e-15);
    EXPECT_DOUBLE_EQ(c[2].ratio, 1.0);
    EXPECT_TRUE(negativity_comment_fraction({}, grid).empty());
}

namespace {

PostJudgement pj(std::int64_t score, Valence v, std::string sub = "s") {
    return PostJudgement{"p" + std::to_string(score), std::move(sub), score, v, "c"};
}

} // namespace

TEST(PositiveRatio, CumulativeAboveScore) {
    std::vector<PostJudgement> js{pj(1, Valence::Positive), pj(2, Valence::Negative), pj(3, Valence::Positive),
                                  pj(10, Valence::Positive)};
    const auto c = cumulative_positive_ratio(js);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_DOUBLE_EQ(c[0].threshold, 1);
    EXPECT_DOUBLE_EQ(c[0].ratio, 0.75);
    EXPECT_DOUBLE_EQ(c[1].ratio, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(c[2].ratio, 1.0);
    EXPECT_DOUBLE_EQ(c[3].ratio, 1.0);

    std::vector<PostJudgement> single{pj(5, Valence::Negative)};
    const auto s = cumulative_positive_ratio(single);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s[0].ratio, 0.0);
}

TEST(PositiveRatio, BoundedAndAllPositiveConstant) {
    std::vector<PostJudgement> js;
    for (int i = 0; i < 10; ++i) js.push_back(pj(i, Valence::Positive));
    for (const auto& p : cumulative_positive_ratio(js)) EXPECT_DOUBLE_EQ(p.ratio, 1.0);
    Rng rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PostJudgement> r;
        for (int i = 0; i < 30; ++i) {
            r.push_back(pj(static_cast<std::int64_t>(rng.below(20)), rng.bernoulli(0.5) ? Valence::Positive : Valence::Negative));
        }
        const auto c = cumulative_positive_ratio(r);
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_GE(c[i].ratio, 0.0);
            EXPECT_LE(c[i].ratio, 1.0);
            if (i) EXPECT_GT(c[i].threshold, c[i - 1].threshold);
        }
    }
}

TEST(NegativityCurve, MonotoneInThreshold) {
    Rng rng(45);
    std::vector<UserTally> ts(40);
    for (auto& t : ts) {
        t.negativity_p = rng.uniform();
        t.comments_by_subreddit[rng.bernoulli(0.5) ? "a" : "b"] = 1 + rng.below(100);
    }
    const std::vector<double> grid{0.001, 0.01, 0.05, 0.1, 0.5, 1};
    for (const auto& [sub, c] : negativity_comment_fraction(ts, grid)) {
        for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i].ratio, c[i - 1].ratio);
        EXPECT_DOUBLE_EQ(c.back().ratio, 1.0);
    }
}

TEST(Popularity, SeparatedScoresExactP) {
    std::map<std::string, std::vector<PostJudgement>> by;
    for (int s : {50, 60, 70}) by["a"].push_back(pj(s, Valence::Positive, "a"));
    for (int s : {10, 20, 30}) by["a"].push_back(pj(s, Valence::Negative, "a"));
    for (int s : {1, 2}) by["b"].push_back(pj(s, Valence::Positive, "b"));
    for (int s : {5, 9}) by["c"].push_back(pj(s, Valence::Positive, "c"));
    for (int s : {5, 9}) by["c"].push_back(pj(s, Valence::Negative, "c"));
    const auto tests = popularity_significance(by);
    ASSERT_EQ(tests.size(), 3u);
    EXPECT_TRUE(tests[0].tested);
    EXPECT_DOUBLE_EQ(tests[0].mw.effect_cles, 1.0);
    EXPECT_NEAR(tests[0].mw.p_two_tailed, 0.1, 1e-12);
    EXPECT_NEAR(tests[0].p_adjusted, 0.2, 1e-12);  // m = 2 tested subreddits
    EXPECT_FALSE(tests[1].tested);
    EXPECT_DOUBLE_EQ(tests[2].mw.effect_cles, 0.5);
    EXPECT_NEAR(tests[2].mw.p_two_tailed, 1.0, 1e-12);
}

TEST(Popularity, BonferroniAcrossTen) {
    std::vector<double> ps(10, 0.004);
    for (double p : stats::bonferroni(ps)) EXPECT_NEAR(p, 0.04, 1e-15);
}

TEST(UserLorenz, EqualCountsGiveZeroGini) {
    std::vector<double> counts(20, 7);
    EXPECT_NEAR(stats::lorenz_gini(counts).gini, 0.0, 1e-15);
}
