#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace judge;
using namespace judge::testing;

TEST(ExtractLabel, SpecExamples) {
    EXPECT_EQ(extract_label("NTA \xe2\x80\x94 you did nothing wrong"), JudgementLabel::NTA);
    EXPECT_EQ(extract_label("you are definitely NTA"), std::nullopt);
    EXPECT_EQ(extract_label("**ESH.** Both of you behaved badly"), JudgementLabel::ESH);
}

TEST(ExtractLabel, GoldenFixture) {
    std::ifstream in(std::string(JUDGE_TEST_DATA) + "/labels_golden.tsv");
    ASSERT_TRUE(in);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos) << line;
        const std::string expected = line.substr(0, tab);
        std::string text = line.substr(tab + 1);
        for (std::size_t p; (p = text.find("\\n")) != std::string::npos;) text.replace(p, 2, "\n");
        const auto got = extract_label(text);
        if (expected == "-") {
            EXPECT_EQ(got, std::nullopt) << text;
        } else {
            ASSERT_TRUE(got) << text;
            EXPECT_EQ(label_name(*got), expected) << text;
        }
        ++rows;
    }
    EXPECT_EQ(rows, 20);
}

TEST(ExtractLabel, IdempotentUnderLeadingWhitespace) {
    const std::vector<std::string> samples = {"NTA ok", "  YTA", "\t> ESH", "none here", "", "*NAH*"};
    for (const auto& s : samples) {
        const auto base = extract_label(s);
        std::string padded = s;
        for (int i = 0; i < 4; ++i) {
            padded = " \n\t" + padded;
            EXPECT_EQ(extract_label(padded), base) << s;
        }
    }
}

TEST(LabelValence, Mapping) {
    EXPECT_EQ(label_valence(JudgementLabel::NTA), Valence::Positive);
    EXPECT_EQ(label_valence(JudgementLabel::NAH), Valence::Positive);
    EXPECT_EQ(label_valence(JudgementLabel::YTA), Valence::Negative);
    EXPECT_EQ(label_valence(JudgementLabel::ESH), Valence::Negative);
    EXPECT_THROW(label_valence(JudgementLabel::INFO), std::invalid_argument);
}

TEST(BuildLabeledCorpus, DropsInfoAndUnlabeled) {
    auto t = single_thread(make_post("p1"), {make_comment("c1", "p1", "p1", "NTA ok", 1, 1),
                                             make_comment("c2", "p1", "p1", "no prefix here", 1, 2),
                                             make_comment("c3", "p1", "p1", "INFO what did she say?", 1, 3)});
    std::vector<Thread> ts{t};
    auto lc = build_labeled_corpus(ts);
    ASSERT_EQ(lc.comments.size(), 1u);
    EXPECT_EQ(lc.comments[0].label, JudgementLabel::NTA);
    EXPECT_EQ(lc.comments[0].valence, Valence::Positive);
    EXPECT_EQ(lc.comments[0].post_id, "p1");
    EXPECT_EQ(lc.histogram.unlabeled_dropped, 1u);
    EXPECT_EQ(lc.histogram.info_dropped, 1u);
}

TEST(BuildLabeledCorpus, RepliesIgnored) {
    auto t = single_thread(make_post("p1"), {make_comment("c1", "p1", "p1", "NTA", 1, 1),
                                             make_comment("c2", "p1", "c1", "YTA", 1, 2)});
    std::vector<Thread> ts{t};
    auto lc = build_labeled_corpus(ts);
    ASSERT_EQ(lc.comments.size(), 1u);
    EXPECT_EQ(lc.comments[0].comment.id, "c1");
}

TEST(BuildLabeledCorpus, EmptyThread) {
    std::vector<Thread> ts{single_thread(make_post("p1"), {})};
    auto lc = build_labeled_corpus(ts);
    EXPECT_TRUE(lc.comments.empty());
    EXPECT_EQ(lc.histogram.total(), 0u);
}

TEST(BuildLabeledCorpus, HistogramAndRelabelInvariants) {
    Rng rng(21);
    const std::vector<std::string> heads = {"NTA", "YTA", "NAH", "ESH", "INFO", "nta", "**YTA**", "maybe", "> ESH"};
    std::vector<Thread> ts;
    for (int p = 0; p < 20; ++p) {
        const std::string pid = "p" + std::to_string(p);
        std::vector<RawComment> cs;
        for (int c = 0; c < 15; ++c) {
            const std::string parent = rng.bernoulli(0.7) ? pid : pid + "c0";
            cs.push_back(make_comment(pid + "c" + std::to_string(c), pid, parent,
                                      heads[rng.below(heads.size())] + " words", 1, c));
        }
        ts.push_back(single_thread(make_post(pid), cs));
    }
    auto lc = build_labeled_corpus(ts);
    const auto& h = lc.histogram;
    EXPECT_EQ(h.total(), lc.comments.size());
    std::size_t pos = 0, neg = 0, nta = 0, nah = 0, yta = 0, esh = 0;
    for (const auto& c : lc.comments) {
        EXPECT_EQ(extract_label(c.comment.body), c.label);
        (c.valence == Valence::Positive ? pos : neg)++;
        nta += c.label == JudgementLabel::NTA;
        nah += c.label == JudgementLabel::NAH;
        yta += c.label == JudgementLabel::YTA;
        esh += c.label == JudgementLabel::ESH;
    }
    EXPECT_EQ(h.positive(), pos);
    EXPECT_EQ(h.negative(), neg);
    EXPECT_EQ(h.positive(), nta + nah);
    EXPECT_EQ(h.negative(), yta + esh);
    EXPECT_EQ(h.nta, nta);
    EXPECT_EQ(h.esh, esh);
}

TEST(LabeledCorpusFile, RoundTripAndValidation) {
    auto t = single_thread(make_post("p1"), {make_comment("c1", "p1", "p1", "YTA \"really\"", 1, 1),
                                             make_comment("c2", "p1", "p1", "NAH", 1, 2)});
    std::vector<Thread> ts{t};
    auto lc = build_labeled_corpus(ts);
    std::string text;
    for (const auto& c : lc.comments) text += to_json(c).dump() + "\n";
    std::istringstream in(text);
    auto back = read_labeled_corpus(in);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].comment.body, "YTA \"really\"");
    EXPECT_EQ(back[0].valence, Valence::Negative);
    EXPECT_EQ(back[1].label, JudgementLabel::NAH);

    std::istringstream bad(R"({"post_id":"p","comment_id":"c","label":"NTA","valence":"negative","body":"x"})");
    EXPECT_THROW(read_labeled_corpus(bad), SchemaError);
}
