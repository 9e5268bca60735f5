#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "judge/judge.hpp"

namespace judge::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::vector<std::string> posts, comments;
    std::string corpus, labeled, model_path, predictions_path, features_path, conversations_path;
    std::string out;
    std::size_t min_comments = 50;
    std::string date_from, date_to;
    std::vector<std::string> subreddits;
    std::string model_kind = "nb";
    double alpha = kDefaultAlpha;
    std::size_t folds = 5;
    std::uint64_t seed = 42;
    std::uint64_t min_judged = kDefaultMinJudged;
    std::optional<double> null_rate;
    double rtd_alpha = kDefaultRtdAlpha;
    std::size_t top_k = 25;
    std::vector<double> thresholds = {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    std::string attribution = "first-person-tag";
    std::string mode = "offline";
};

ojson config_json(const RunConfig& c) {
    ojson j;
    j["command"] = c.command;
    j["posts"] = c.posts;
    j["comments"] = c.comments;
    j["corpus"] = c.corpus;
    j["labeled"] = c.labeled;
    j["model"] = c.model_path;
    j["predictions"] = c.predictions_path;
    j["features"] = c.features_path;
    j["conversations"] = c.conversations_path;
    j["out"] = c.out;
    j["min_comments"] = c.min_comments;
    j["from"] = c.date_from;
    j["to"] = c.date_to;
    j["subreddits"] = c.subreddits;
    j["model_kind"] = c.model_kind;
    j["alpha"] = c.alpha;
    j["folds"] = c.folds;
    j["min_judged"] = c.min_judged;
    j["null_rate"] = c.null_rate ? ojson(*c.null_rate) : ojson(nullptr);
    j["rtd_alpha"] = c.rtd_alpha;
    j["top_k"] = c.top_k;
    j["thresholds"] = c.thresholds;
    j["attribution"] = c.attribution;
    j["mode"] = c.mode;
    return j;
}

ojson decisions_json(const RunConfig& c) {
    return {
        {"rtd_alpha", c.rtd_alpha},
        {"rtd_missing_type_rank", "N_types + (N_missing + 1) / 2"},
        {"binomial_null", c.null_rate ? "override" : "negative share of retained judgements"},
        {"negativity_cutoff", kNegativityCutoff},
        {"attribution_policy", c.attribution},
        {"popularity_cumulation", "positive share among posts with score >= s"},
        {"negativity_curve_denominator", "per-subreddit comments of tallied users"},
        {"fold_stddev", "population"},
        {"nb_tie_break", "positive"},
        {"awry_online_first_utterance", 2},
        {"odds_percent", "100 * (exp(b) - 1), unrounded"},
    };
}

class Manifest {
public:
    Manifest(const RunConfig& cfg) : cfg_(cfg) {
        j_["format_version"] = report::kReportFormatVersion;
        j_["tool"] = "judge";
        j_["command"] = cfg.command;
        j_["seed"] = cfg.seed;
        j_["config"] = config_json(cfg);
        j_["decisions"] = decisions_json(cfg);
        j_["results"] = ojson::object();
        j_["outputs"] = ojson::array();
    }

    ojson& results() { return j_["results"]; }

    void write_file(const std::string& name, std::string_view content) {
        report::atomic_write(fs::path(cfg_.out) / name, content);
        j_["outputs"].push_back(name);
    }

    void line(const std::string& s) { summary_ += s + "\n"; }

    void finish(const std::string& stem) {
        j_["outputs"].push_back(stem + "_summary.txt");
        report::atomic_write(fs::path(cfg_.out) / (stem + "_summary.txt"), summary_);
        report::write_json(fs::path(cfg_.out) / (stem + "_report.json"), j_);
        std::cout << summary_;
    }

private:
    const RunConfig& cfg_;
    ojson j_;
    std::string summary_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

std::vector<Thread> load_corpus(const RunConfig& c) {
    auto in = open_input((fs::path(c.corpus) / "threads.ndjson").string());
    return read_threads(in);
}

std::vector<LabeledComment> load_labeled(const RunConfig& c) {
    auto in = open_input(c.labeled);
    return read_labeled_corpus(in);
}

NBModel load_model(const std::string& path) {
    auto in = open_input(path);
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("model file is not valid JSON: " + path);
    return nb_from_json(j);
}

struct JudgeSource {
    std::optional<NBModel> model;
    std::optional<ExternalPredictions> predictions;
};

JudgeSource load_judge(const RunConfig& c) {
    if (c.model_path.empty() == c.predictions_path.empty()) {
        throw UsageError("exactly one of --model or --predictions is required");
    }
    JudgeSource s;
    if (!c.model_path.empty()) {
        s.model = load_model(c.model_path);
    } else {
        auto in = open_input(c.predictions_path);
        s.predictions = load_external_predictions(in);
    }
    return s;
}

template <typename F>
auto with_judge(const JudgeSource& s, F&& f) {
    if (s.model) return f(NBJudge(*s.model));
    return f(ExternalJudge(*s.predictions));
}

std::string pct(double v) { return csv::fixed(v, 2); }

// ---------------------------------------------------------------------------

int run_ingest(const RunConfig& c) {
    Manifest m(c);
    std::vector<RawPost> posts;
    std::vector<RawComment> comments;
    ParseStats post_stats, comment_stats;
    auto accumulate = [](ParseStats& into, const ParseStats& s) {
        into.lines += s.lines;
        into.parsed += s.parsed;
        into.malformed += s.malformed;
        into.warnings += s.warnings;
    };
    for (const auto& p : c.posts) {
        auto in = open_input(p);
        auto r = parse_posts(in);
        accumulate(post_stats, r.stats);
        std::move(r.records.begin(), r.records.end(), std::back_inserter(posts));
    }
    for (const auto& p : c.comments) {
        auto in = open_input(p);
        auto r = parse_comments(in);
        accumulate(comment_stats, r.stats);
        std::move(r.records.begin(), r.records.end(), std::back_inserter(comments));
    }
    auto built = build_threads(posts, comments);

    CorpusFilter filter;
    filter.min_comments = c.min_comments;
    filter.subreddits = c.subreddits;
    if (!c.date_from.empty()) {
        auto d = parse_date(c.date_from);
        if (!d) throw UsageError("--from expects YYYY-MM-DD, got " + c.date_from);
        filter.date_from = *d;
    }
    if (!c.date_to.empty()) {
        auto d = parse_date(c.date_to);
        if (!d) throw UsageError("--to expects YYYY-MM-DD, got " + c.date_to);
        filter.date_to = *d + 86399;
    }
    if (filter.date_from && filter.date_to && *filter.date_from > *filter.date_to) {
        throw UsageError("--from is after --to");
    }
    const std::size_t before = built.threads.size();
    auto threads = filter_corpus(std::move(built.threads), filter);

    std::string body;
    std::map<std::string, std::size_t> by_sub;
    std::size_t kept_comments = 0;
    for (const auto& t : threads) {
        body += thread_to_json(t).dump() + "\n";
        ++by_sub[t.post.subreddit];
        kept_comments += t.comment_count();
    }
    m.write_file("threads.ndjson", body);
    ojson index = {{"format_version", report::kReportFormatVersion},
                   {"threads_file", "threads.ndjson"},
                   {"threads", threads.size()},
                   {"comments", kept_comments},
                   {"by_subreddit", by_sub}};
    m.write_file("index.json", index.dump(2) + "\n");

    auto stats_json = [](const ParseStats& s) {
        return ojson{{"lines", s.lines}, {"parsed", s.parsed}, {"malformed", s.malformed}, {"warnings", s.warnings}};
    };
    const auto& bs = built.stats;
    m.results() = {{"posts", stats_json(post_stats)},
                   {"comments", stats_json(comment_stats)},
                   {"threads_built", bs.threads},
                   {"comments_attached", bs.comments_attached},
                   {"comments_unmatched_link", bs.unmatched_link},
                   {"duplicate_comments", bs.duplicate_comments},
                   {"duplicate_posts", bs.duplicate_posts},
                   {"orphans", bs.orphans},
                   {"cycles", bs.cycles},
                   {"threads_before_filter", before},
                   {"threads_after_filter", threads.size()},
                   {"comments_after_filter", kept_comments},
                   {"by_subreddit", by_sub}};
    m.line("ingest: " + std::to_string(post_stats.parsed) + " posts (" + std::to_string(post_stats.malformed) +
           " malformed), " + std::to_string(comment_stats.parsed) + " comments (" +
           std::to_string(comment_stats.malformed) + " malformed)");
    m.line("threads: " + std::to_string(before) + " built, " + std::to_string(threads.size()) +
           " kept after filtering (min comments " + std::to_string(c.min_comments) + ")");
    m.line("orphans " + std::to_string(bs.orphans) + ", cycles " + std::to_string(bs.cycles) + ", duplicates " +
           std::to_string(bs.duplicate_comments) + ", unmatched " + std::to_string(bs.unmatched_link));
    m.finish("ingest");
    return kExitOk;
}

int run_label(const RunConfig& c) {
    Manifest m(c);
    const auto threads = load_corpus(c);
    const auto corpus = build_labeled_corpus(threads);
    std::string body;
    for (const auto& lc : corpus.comments) body += to_json(lc).dump() + "\n";
    m.write_file("labeled.ndjson", body);

    const auto& h = corpus.histogram;
    csv::Writer w;
    w.row({"label", "meaning", "comments"});
    w.row({"NTA", "Not the Asshole", std::to_string(h.nta)});
    w.row({"YTA", "You're the Asshole", std::to_string(h.yta)});
    w.row({"NAH", "No assholes here", std::to_string(h.nah)});
    w.row({"ESH", "Everyone sucks here", std::to_string(h.esh)});
    m.write_file("label_histogram.csv", w.str());

    m.results() = {{"posts", threads.size()},
                   {"labeled_comments", h.total()},
                   {"histogram", {{"NTA", h.nta}, {"YTA", h.yta}, {"NAH", h.nah}, {"ESH", h.esh}}},
                   {"positive", h.positive()},
                   {"negative", h.negative()},
                   {"dropped_info", h.info_dropped},
                   {"dropped_unlabeled", h.unlabeled_dropped}};
    m.line("labeled " + std::to_string(h.total()) + " top-level comments from " + std::to_string(threads.size()) +
           " posts");
    m.line("NTA " + std::to_string(h.nta) + "  YTA " + std::to_string(h.yta) + "  NAH " + std::to_string(h.nah) +
           "  ESH " + std::to_string(h.esh));
    m.line("dropped: INFO " + std::to_string(h.info_dropped) + ", no prefix " + std::to_string(h.unlabeled_dropped));
    m.finish("label");
    return kExitOk;
}

std::string fold_table(const FoldReport& r, const std::string& model) {
    csv::Writer w;
    w.row({"model", "fold", "accuracy", "precision", "recall", "f1", "fpr", "tp", "fp", "fn", "tn"});
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
        const auto& e = r.folds[f];
        w.row({model, std::to_string(f + 1), pct(e.accuracy), pct(e.precision), pct(e.recall), pct(e.f1),
               pct(e.fpr), std::to_string(e.confusion.tp), std::to_string(e.confusion.fp),
               std::to_string(e.confusion.fn), std::to_string(e.confusion.tn)});
    }
    std::vector<std::string> mean{model, "mean"}, sd{model, "std"};
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        mean.push_back(pct(r.mean[i]));
        sd.push_back(pct(r.stddev[i]));
    }
    for (int i = 0; i < 4; ++i) {
        mean.emplace_back();
        sd.emplace_back();
    }
    w.row(mean);
    w.row(sd);
    return w.str();
}

ojson fold_json(const FoldReport& r) {
    ojson mean, sd;
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        mean[std::string(kMetricNames[i])] = r.mean[i];
        sd[std::string(kMetricNames[i])] = r.stddev[i];
    }
    return {{"folds", r.folds.size()}, {"mean", mean}, {"std", sd}};
}

void summarize_folds_text(Manifest& m, const FoldReport& r, const std::string& model) {
    std::string line = model + ":";
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        line += " " + std::string(kMetricNames[i]) + " " + pct(r.mean[i]) + " +/- " + pct(r.stddev[i]);
    }
    m.line(line);
}

FoldReport nb_cross_validate(const std::vector<LabeledComment>& corpus, const RunConfig& c) {
    return cross_validate(std::span<const LabeledComment>(corpus), c.folds,
                          [&](std::span<const LabeledComment> train) {
                              return [model = nb_train(train, c.alpha)](const LabeledComment& lc) {
                                  return nb_predict(model, lc.comment.body).valence;
                              };
                          },
                          c.seed);
}

int run_train(const RunConfig& c) {
    if (c.model_kind != "nb") throw UsageError("train supports --model nb only; use eval for logreg");
    Manifest m(c);
    const auto corpus = load_labeled(c);
    const auto model = nb_train(corpus, c.alpha);
    m.write_file("model.json", nb_to_json(model).dump() + "\n");
    m.results()["training_documents"] = corpus.size();
    m.results()["vocabulary_size"] = model.vocab.size();
    m.line("trained multinomial naive Bayes on " + std::to_string(corpus.size()) + " comments, V=" +
           std::to_string(model.vocab.size()) + ", alpha=" + csv::number(c.alpha));
    if (c.folds >= 2) {
        const auto r = nb_cross_validate(corpus, c);
        m.write_file("cv_folds.csv", fold_table(r, "multinomial_nb"));
        m.results()["cross_validation"] = fold_json(r);
        summarize_folds_text(m, r, "multinomial_nb (" + std::to_string(c.folds) + "-fold)");
    }
    m.finish("train");
    return kExitOk;
}

struct LabeledFeatures {
    std::string id;
    std::vector<double> x;
    Valence valence = Valence::Positive;
};

int run_eval(const RunConfig& c) {
    Manifest m(c);
    const auto corpus = load_labeled(c);
    if (c.model_kind == "nb") {
        const auto r = nb_cross_validate(corpus, c);
        m.write_file("eval_folds.csv", fold_table(r, "multinomial_nb"));
        m.results()["cross_validation"] = fold_json(r);
        summarize_folds_text(m, r, "multinomial_nb");
    } else if (c.model_kind == "logreg") {
        if (c.features_path.empty()) throw UsageError("--model logreg requires --features");
        auto in = open_input(c.features_path);
        const auto table = load_feature_vectors(in);
        std::map<std::string, std::size_t, std::less<>> row_of;
        for (std::size_t i = 0; i < table.ids.size(); ++i) row_of.emplace(table.ids[i], i);
        std::vector<LabeledFeatures> items;
        std::size_t missing = 0;
        for (const auto& lc : corpus) {
            auto it = row_of.find(lc.comment.id);
            if (it == row_of.end()) {
                ++missing;
                continue;
            }
            items.push_back({lc.comment.id, table.rows[it->second], lc.valence});
        }
        const auto r = cross_validate(std::span<const LabeledFeatures>(items), c.folds,
                                      [](std::span<const LabeledFeatures> train) {
                                          DesignMatrix X;
                                          std::vector<int> y;
                                          for (const auto& t : train) {
                                              X.push_back(t.x);
                                              y.push_back(t.valence == Valence::Negative ? 1 : 0);
                                          }
                                          return [fit = logreg_fit(X, y)](const LabeledFeatures& f) {
                                              return logreg_predict(fit, f.x) > 0.5 ? Valence::Negative
                                                                                     : Valence::Positive;
                                          };
                                      },
                                      c.seed);
        m.write_file("eval_folds.csv", fold_table(r, "logreg_features"));
        m.results()["cross_validation"] = fold_json(r);
        m.results()["feature_dimension"] = table.dimension;
        m.results()["comments_without_features"] = missing;
        summarize_folds_text(m, r, "logreg_features");
    } else if (c.model_kind == "external") {
        if (c.predictions_path.empty()) throw UsageError("--model external requires --predictions");
        auto in = open_input(c.predictions_path);
        const auto preds = load_external_predictions(in);
        std::vector<Valence> predicted, truth;
        std::size_t missing = 0;
        for (const auto& lc : corpus) {
            auto it = preds.find(lc.comment.id);
            if (it == preds.end()) {
                ++missing;
                continue;
            }
            predicted.push_back(it->second.valence);
            truth.push_back(lc.valence);
        }
        if (predicted.empty()) throw DataError("no labeled comment has an external prediction");
        const auto e = evaluate(predicted, truth);
        csv::Writer w;
        w.row({"model", "accuracy", "precision", "recall", "f1", "fpr"});
        w.row({"external", pct(e.accuracy), pct(e.precision), pct(e.recall), pct(e.f1), pct(e.fpr)});
        m.write_file("eval_external.csv", w.str());
        m.results() = {{"evaluated", predicted.size()},
                       {"missing_predictions", missing},
                       {"accuracy", e.accuracy},
                       {"precision", e.precision},
                       {"recall", e.recall},
                       {"f1", e.f1},
                       {"fpr", e.fpr}};
        m.line("external predictions on " + std::to_string(predicted.size()) + " labeled comments: accuracy " +
               pct(e.accuracy) + ", F1 " + pct(e.f1));
    } else {
        throw UsageError("unknown --model " + c.model_kind + " (nb, logreg, external)");
    }
    m.finish("eval");
    return kExitOk;
}

int run_classify(const RunConfig& c) {
    Manifest m(c);
    const auto threads = load_corpus(c);
    const auto judge = load_judge(c);
    csv::Writer w;
    w.row({"comment_id", "valence", "score"});
    std::size_t total = 0, covered = 0;
    for (const auto& t : threads) {
        for (const auto& n : t.nodes) {
            ++total;
            const auto& cm = n.comment;
            if (judge.model) {
                const auto p = nb_predict(*judge.model, cm.body);
                w.row({cm.id, std::string(valence_name(p.valence)), csv::fixed(p.p_negative(), 6)});
                ++covered;
            } else if (auto it = judge.predictions->find(cm.id); it != judge.predictions->end()) {
                w.row({cm.id, std::string(valence_name(it->second.valence)),
                       it->second.score ? csv::number(*it->second.score) : std::string()});
                ++covered;
            }
        }
    }
    m.write_file("predictions.csv", w.str());
    m.results() = {{"comments", total}, {"classified", covered}, {"source", judge.model ? "model" : "external"}};
    m.line("classified " + std::to_string(covered) + " of " + std::to_string(total) + " corpus comments");
    m.finish("classify");
    return kExitOk;
}

int run_allotax(const RunConfig& c) {
    Manifest m(c);
    const auto corpus = load_labeled(c);
    std::vector<TokenSequence> pos, neg;
    for (const auto& lc : corpus) {
        (lc.valence == Valence::Positive ? pos : neg).push_back(tokenize(lc.comment.body));
    }
    const auto d_pos = term_distribution(pos);
    const auto d_neg = term_distribution(neg);
    const auto res = rtd_contributions(d_pos, d_neg, c.rtd_alpha);

    std::vector<const RTDTerm*> order;
    for (const auto& t : res.terms) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const RTDTerm* a, const RTDTerm* b) {
        const double ma = std::abs(a->contribution), mb = std::abs(b->contribution);
        if (ma != mb) return ma > mb;
        return a->term < b->term;
    });
    auto side_of = [](const RTDTerm& t) {
        return t.contribution > 0 ? "positive" : (t.contribution < 0 ? "negative" : "none");
    };
    csv::Writer w;
    w.row({"term", "rank_pos", "rank_neg", "contribution", "side"});
    for (const auto* t : order) {
        w.row({t->term, csv::number(t->rank1), csv::number(t->rank2), csv::number(t->contribution), side_of(*t)});
    }
    m.write_file("allotax.csv", w.str());

    auto top_json = [&](Side side) {
        ojson arr = ojson::array();
        for (const auto& t : top_divergent_terms(res, c.top_k, side)) {
            arr.push_back({{"term", t.term}, {"contribution", t.contribution}});
        }
        return arr;
    };
    m.results() = {{"alpha", res.alpha},
                   {"types_positive", d_pos.size()},
                   {"types_negative", d_neg.size()},
                   {"tokens_positive", d_pos.total_count},
                   {"tokens_negative", d_neg.total_count},
                   {"normalization", res.normalization},
                   {"divergence", res.total},
                   {"top_positive", top_json(Side::Corpus1)},
                   {"top_negative", top_json(Side::Corpus2)}};
    m.line("rank-turbulence divergence (alpha=" + csv::number(res.alpha, 6) + "): " + csv::number(res.total, 6));
    std::string neg_line = "negative side:", pos_line = "positive side:";
    for (const auto& t : top_divergent_terms(res, std::min<std::size_t>(c.top_k, 10), Side::Corpus2)) neg_line += " " + t.term;
    for (const auto& t : top_divergent_terms(res, std::min<std::size_t>(c.top_k, 10), Side::Corpus1)) pos_line += " " + t.term;
    m.line(neg_line);
    m.line(pos_line);
    m.finish("allotax");
    return kExitOk;
}

int run_popularity(const RunConfig& c) {
    Manifest m(c);
    const auto threads = load_corpus(c);
    const auto source = load_judge(c);
    std::vector<PostJudgement> judgements;
    std::size_t skipped = 0;
    with_judge(source, [&](const auto& judge) {
        for (const auto& t : threads) {
            if (auto pj = assign_post_valence(t, judge)) {
                judgements.push_back(std::move(*pj));
            } else {
                ++skipped;
            }
        }
        return 0;
    });

    csv::Writer pj;
    pj.row({"post_id", "subreddit", "score", "valence", "judge_comment_id"});
    for (const auto& j : judgements) {
        pj.row({j.post_id, j.subreddit, std::to_string(j.post_score), std::string(valence_name(j.valence)),
                j.judging_comment_id});
    }
    m.write_file("post_judgements.csv", pj.str());

    const auto grouped = group_by_subreddit(judgements);
    csv::Writer curve;
    curve.row({"subreddit", "min_score", "positive_ratio"});
    for (const auto& [sub, js] : grouped) {
        for (const auto& p : cumulative_positive_ratio(js)) {
            curve.row({sub, csv::number(p.threshold), csv::number(p.ratio)});
        }
    }
    m.write_file("popularity_curve.csv", curve.str());

    const auto tests = popularity_significance(grouped);
    csv::Writer tw;
    tw.row({"subreddit", "n_positive", "n_negative", "tested", "u", "z", "p", "p_bonferroni", "cles",
            "rank_biserial", "exact"});
    ojson tj = ojson::array();
    for (const auto& t : tests) {
        tw.row({t.subreddit, std::to_string(t.n_positive), std::to_string(t.n_negative), t.tested ? "1" : "0",
                csv::number(t.mw.u), csv::number(t.mw.z), csv::number(t.mw.p_two_tailed), csv::number(t.p_adjusted),
                csv::number(t.mw.effect_cles), csv::number(t.mw.effect_rank_biserial), t.mw.exact ? "1" : "0"});
        tj.push_back({{"subreddit", t.subreddit},
                      {"n_positive", t.n_positive},
                      {"n_negative", t.n_negative},
                      {"tested", t.tested},
                      {"u", t.mw.u},
                      {"p", t.mw.p_two_tailed},
                      {"p_bonferroni", t.p_adjusted},
                      {"cles", t.mw.effect_cles},
                      {"rank_biserial", t.mw.effect_rank_biserial}});
    }
    m.write_file("popularity_tests.csv", tw.str());
    m.results() = {{"posts_judged", judgements.size()}, {"posts_without_top_level", skipped}, {"tests", tj}};
    m.line("judged " + std::to_string(judgements.size()) + " posts (" + std::to_string(skipped) +
           " without top-level comments)");
    for (const auto& t : tests) {
        if (t.tested) {
            m.line("  " + t.subreddit + ": CLES " + csv::fixed(t.mw.effect_cles, 3) + ", p(bonf) " +
                   csv::number(t.p_adjusted, 4));
        } else {
            m.line("  " + t.subreddit + ": single valence group, not tested");
        }
    }
    m.finish("popularity");
    return kExitOk;
}

int run_users(const RunConfig& c) {
    Manifest m(c);
    const auto threads = load_corpus(c);
    const auto source = load_judge(c);
    std::vector<UserJudgement> judgements;
    with_judge(source, [&](const auto& judge) {
        for (const auto& t : threads) {
            auto js = assign_user_judgements(t, judge);
            std::move(js.begin(), js.end(), std::back_inserter(judgements));
        }
        return 0;
    });
    const auto authored = count_authored_comments(threads);
    TallyOptions opt;
    opt.min_n = c.min_judged;
    opt.p0 = c.null_rate;
    const auto tally = tally_users(judgements, authored, opt);

    csv::Writer uw;
    uw.row({"user", "n_pos", "n_neg", "n_comments", "negativity_p"});
    std::size_t significant = 0;
    std::vector<double> neg_counts;
    for (const auto& u : tally.users) {
        uw.row({u.user, std::to_string(u.n_pos), std::to_string(u.n_neg), std::to_string(u.n_comments_authored),
                csv::number(u.negativity_p)});
        significant += u.negativity_p < kNegativityCutoff;
        neg_counts.push_back(static_cast<double>(u.n_neg));
    }
    m.write_file("user_tallies.csv", uw.str());

    ojson gini = nullptr;
    csv::Writer lw;
    lw.row({"population_share", "negative_share"});
    if (!neg_counts.empty() && std::any_of(neg_counts.begin(), neg_counts.end(), [](double v) { return v > 0; })) {
        const auto lorenz = stats::lorenz_gini(neg_counts);
        for (const auto& [x, y] : lorenz.points) lw.row({csv::number(x), csv::number(y)});
        gini = lorenz.gini;
    }
    m.write_file("lorenz.csv", lw.str());

    csv::Writer cw;
    cw.row({"subreddit", "threshold", "ratio"});
    for (const auto& [sub, curve] : negativity_comment_fraction(tally.users, c.thresholds)) {
        for (const auto& p : curve) cw.row({sub, csv::number(p.threshold), csv::number(p.ratio)});
    }
    m.write_file("negativity_curve.csv", cw.str());

    m.results() = {{"judgements", judgements.size()},
                   {"users_tallied", tally.users.size()},
                   {"users_dropped", tally.users_dropped},
                   {"p0", tally.p0},
                   {"significantly_negative_users", significant},
                   {"gini", gini}};
    m.line(std::to_string(judgements.size()) + " judgements; " + std::to_string(tally.users.size()) +
           " users judged at least " + std::to_string(c.min_judged) + " times");
    m.line("null negative rate p0 = " + csv::number(tally.p0, 6) + "; " + std::to_string(significant) +
           " users with negativity p < 0.05");
    m.line(gini.is_null() ? "gini: undefined (no negative judgements)" : "gini = " + csv::number(gini.get<double>(), 6));
    m.finish("users");
    return kExitOk;
}

int run_demographics(const RunConfig& c) {
    Attribution policy;
    if (c.attribution == "first-person-tag") {
        policy = Attribution::FirstPersonTag;
    } else if (c.attribution == "first-tag") {
        policy = Attribution::FirstTag;
    } else {
        throw UsageError("unknown --attribution " + c.attribution);
    }
    Manifest m(c);
    const auto threads = load_corpus(c);
    const auto source = load_judge(c);
    const auto ds = with_judge(source, [&](const auto& judge) { return build_demo_dataset(threads, judge, policy); });

    csv::Writer dw;
    dw.row({"post_id", "gender", "age", "valence"});
    std::map<std::string, std::vector<DemographicRecord>> by_sub;
    for (const auto& r : ds.records) {
        dw.row({r.post_id, r.gender_code == 1 ? "M" : "F", std::to_string(r.age),
                std::string(valence_name(r.valence))});
        by_sub[r.subreddit].push_back(r);
    }
    m.write_file("demographics.csv", dw.str());

    csv::Writer tables;
    tables.row({"subreddit", "gender", "positive", "negative"});
    csv::Writer coefs;
    coefs.row({"subreddit", "variable", "coefficient", "std_error", "p_value", "ci_low", "ci_high", "odds_percent"});
    ojson per_sub = ojson::object();
    for (const auto& [sub, recs] : by_sub) {
        ojson sj;
        sj["records"] = recs.size();
        const auto table = demo_table(recs);
        tables.row({sub, "male", std::to_string(table[0][0]), std::to_string(table[0][1])});
        tables.row({sub, "female", std::to_string(table[1][0]), std::to_string(table[1][1])});
        m.line(sub + " (" + std::to_string(recs.size()) + " posts)");
        try {
            const auto ct = demo_contingency(recs);
            sj["chi2"] = {{"chi2", ct.chi2.chi2}, {"dof", ct.chi2.dof}, {"n", ct.chi2.n}, {"p", ct.chi2.p},
                          {"phi", ct.chi2.phi}};
            m.line("  chi2(1, " + std::to_string(ct.chi2.n) + ") = " + csv::fixed(ct.chi2.chi2, 1) + ", p = " +
                   csv::number(ct.chi2.p, 4) + ", phi = " + csv::fixed(ct.chi2.phi, 3));
        } catch (const std::exception& e) {
            sj["chi2"] = {{"error", e.what()}};
            m.line(std::string("  chi2 not computed: ") + e.what());
        }
        try {
            const auto reg = demo_regression(recs);
            ojson rows = ojson::array();
            for (const auto& row : reg.rows) {
                coefs.row({sub, row.name, csv::number(row.estimate), csv::number(row.standard_error),
                           csv::number(row.p_value), csv::number(row.ci_low), csv::number(row.ci_high),
                           csv::number(row.odds_percent)});
                rows.push_back({{"variable", row.name},
                                {"coefficient", row.estimate},
                                {"std_error", row.standard_error},
                                {"p_value", row.p_value},
                                {"ci95", {row.ci_low, row.ci_high}},
                                {"odds_percent", row.odds_percent}});
                m.line("  " + row.name + ": " + csv::fixed(row.estimate, 4) + " (" + csv::fixed(row.ci_low, 4) +
                       ", " + csv::fixed(row.ci_high, 4) + "), odds " + csv::fixed(row.odds_percent, 2) + "%");
            }
            sj["regression"] = {{"converged", reg.fit.converged},
                                {"iterations", reg.fit.iterations},
                                {"deviance", reg.fit.deviance},
                                {"diagnostic", reg.fit.diagnostic},
                                {"coefficients", rows}};
        } catch (const std::exception& e) {
            sj["regression"] = {{"error", e.what()}};
            m.line(std::string("  regression not computed: ") + e.what());
        }
        per_sub[sub] = sj;
    }
    m.write_file("demographics_tables.csv", tables.str());
    m.write_file("demographics_regression.csv", coefs.str());
    m.results() = {{"records", ds.records.size()},
                   {"dropped_no_tag", ds.no_tag},
                   {"dropped_underage", ds.underage},
                   {"dropped_no_judgement", ds.no_judgement},
                   {"by_subreddit", per_sub}};
    m.finish("demographics");
    return kExitOk;
}

int run_awry(const RunConfig& c) {
    AwryMode mode;
    if (c.mode == "offline") {
        mode = AwryMode::Offline;
    } else if (c.mode == "online") {
        mode = AwryMode::Online;
    } else {
        throw UsageError("--mode must be offline or online");
    }
    Manifest m(c);
    auto in = open_input(c.conversations_path);
    const auto convs = load_conversations(in);
    const auto source = load_judge(c);
    const auto run = with_judge(source, [&](const auto& judge) { return run_awry(convs, judge, mode); });

    std::map<std::string, bool> truth;
    for (const auto& conv : convs) truth[conv.id] = conv.derails;
    csv::Writer pw;
    pw.row({"conversation_id", "predicted_derail", "trigger_index", "derails"});
    for (const auto& p : run.predictions) {
        pw.row({p.conversation_id, p.predicted_derail ? "1" : "0",
                p.trigger_index ? std::to_string(*p.trigger_index) : std::string(),
                truth[p.conversation_id] ? "1" : "0"});
    }
    m.write_file("awry_predictions.csv", pw.str());

    const auto& e = run.metrics;
    csv::Writer mw;
    mw.row({"method", "mode", "accuracy", "precision", "recall", "fpr", "f1", "n", "skipped"});
    mw.row({source.model ? "multinomial_nb" : "external", c.mode, csv::fixed(e.accuracy, 1),
            csv::fixed(e.precision, 1), csv::fixed(e.recall, 1), csv::fixed(e.fpr, 1), csv::fixed(e.f1, 1),
            std::to_string(run.predictions.size()), std::to_string(run.skipped)});
    m.write_file("awry_metrics.csv", mw.str());
    m.results() = {{"conversations", convs.size()},
                   {"evaluated", run.predictions.size()},
                   {"skipped", run.skipped},
                   {"accuracy", e.accuracy},
                   {"precision", e.precision},
                   {"recall", e.recall},
                   {"fpr", e.fpr},
                   {"f1", e.f1},
                   {"confusion",
                    {{"tp", e.confusion.tp}, {"fp", e.confusion.fp}, {"fn", e.confusion.fn}, {"tn", e.confusion.tn}}}};
    m.line(c.mode + " derailment forecast on " + std::to_string(run.predictions.size()) + " conversations (" +
           std::to_string(run.skipped) + " skipped)");
    m.line("A " + csv::fixed(e.accuracy, 1) + "  P " + csv::fixed(e.precision, 1) + "  R " + csv::fixed(e.recall, 1) +
           "  FPR " + csv::fixed(e.fpr, 1) + "  F1 " + csv::fixed(e.f1, 1));
    m.finish("awry");
    return kExitOk;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !(v >= 0 && v <= 1)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("--thresholds expects comma-separated values in [0,1], got '" + item + "'");
        }
    }
    return out;
}

} // namespace

int dispatch(const std::vector<std::string>& args) {
    RunConfig cfg;
    if (const char* env = std::getenv("JUDGE_OUT_DIR"); env && *env) {
        cfg.out = env;
    } else {
        cfg.out = "judge_out";
    }
    std::string thresholds, null_rate;

    CLI::App app{"judge: moral-judgement valence pipeline"};
    app.require_subcommand(1);
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output directory"); };
    auto add_judge = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model_path, "trained model file")->check(CLI::ExistingFile);
        sub->add_option("--predictions", cfg.predictions_path, "external predictions CSV")->check(CLI::ExistingFile);
    };
    auto add_corpus = [&](CLI::App* sub) {
        sub->add_option("--corpus", cfg.corpus, "directory written by ingest")->required()->check(CLI::ExistingDirectory);
    };
    auto add_labeled = [&](CLI::App* sub) {
        sub->add_option("--labeled", cfg.labeled, "labeled corpus NDJSON")->required()->check(CLI::ExistingFile);
    };

    auto* ingest = app.add_subcommand("ingest", "parse dumps, build threads, filter");
    ingest->add_option("--posts", cfg.posts, "posts NDJSON dump(s)")->required()->check(CLI::ExistingFile);
    ingest->add_option("--comments", cfg.comments, "comments NDJSON dump(s)")->required()->check(CLI::ExistingFile);
    ingest->add_option("--min-comments", cfg.min_comments, "drop threads with fewer comments");
    ingest->add_option("--from", cfg.date_from, "first post date, YYYY-MM-DD (inclusive)");
    ingest->add_option("--to", cfg.date_to, "last post date, YYYY-MM-DD (inclusive)");
    ingest->add_option("--subreddits", cfg.subreddits, "allow-list")->delimiter(',');
    add_out(ingest);

    auto* label = app.add_subcommand("label", "extract prefix labels from top-level comments");
    add_corpus(label);
    add_out(label);

    auto* train = app.add_subcommand("train", "train naive Bayes, optionally cross-validate");
    add_labeled(train);
    train->add_option("--model", cfg.model_kind, "model kind (nb)");
    train->add_option("--alpha", cfg.alpha, "smoothing pseudo-count")->check(CLI::PositiveNumber);
    train->add_option("--folds", cfg.folds, "cross-validation folds (0 to skip)");
    train->add_option("--seed", cfg.seed, "shuffle seed");
    add_out(train);

    auto* eval = app.add_subcommand("eval", "cross-validated evaluation");
    add_labeled(eval);
    eval->add_option("--model", cfg.model_kind, "nb | logreg | external");
    eval->add_option("--features", cfg.features_path, "feature-vector CSV for logreg")->check(CLI::ExistingFile);
    eval->add_option("--predictions", cfg.predictions_path, "external predictions CSV")->check(CLI::ExistingFile);
    eval->add_option("--alpha", cfg.alpha, "smoothing pseudo-count")->check(CLI::PositiveNumber);
    eval->add_option("--folds", cfg.folds, "cross-validation folds");
    eval->add_option("--seed", cfg.seed, "shuffle seed");
    add_out(eval);

    auto* classify = app.add_subcommand("classify", "apply a model or external predictions to a corpus");
    add_corpus(classify);
    add_judge(classify);
    add_out(classify);

    auto* allotax = app.add_subcommand("allotax", "rank-turbulence divergence between valence classes");
    add_labeled(allotax);
    allotax->add_option("--alpha", cfg.rtd_alpha, "divergence exponent")->check(CLI::PositiveNumber);
    allotax->add_option("--top", cfg.top_k, "terms listed per side")->check(CLI::PositiveNumber);
    add_out(allotax);

    auto* analyze = app.add_subcommand("analyze", "valence analyses");
    analyze->require_subcommand(1);
    auto* popularity = analyze->add_subcommand("popularity", "post valence vs score");
    add_corpus(popularity);
    add_judge(popularity);
    add_out(popularity);
    auto* users = analyze->add_subcommand("users", "user tallies, Lorenz/Gini, negativity curves");
    add_corpus(users);
    add_judge(users);
    users->add_option("--min-judged", cfg.min_judged, "minimum judgements per user");
    users->add_option("--null-rate", null_rate, "binomial null negative rate (default: observed)");
    users->add_option("--thresholds", thresholds, "comma-separated p-value grid");
    add_out(users);
    auto* demographics = analyze->add_subcommand("demographics", "gender/age association");
    add_corpus(demographics);
    add_judge(demographics);
    demographics->add_option("--attribution", cfg.attribution, "first-person-tag | first-tag");
    add_out(demographics);

    auto* awry = app.add_subcommand("awry", "conversation derailment forecasting");
    awry->add_option("--conversations", cfg.conversations_path, "conversation NDJSON")->required()->check(CLI::ExistingFile);
    add_judge(awry);
    awry->add_option("--mode", cfg.mode, "offline | online");
    add_out(awry);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!thresholds.empty()) cfg.thresholds = parse_grid(thresholds);
        if (!null_rate.empty()) {
            const auto v = parse_grid(null_rate);
            if (v.size() != 1 || v[0] <= 0 || v[0] >= 1) throw UsageError("--null-rate must be in (0,1)");
            cfg.null_rate = v[0];
        }
        if (*ingest) {
            cfg.command = "ingest";
            return run_ingest(cfg);
        }
        if (*label) {
            cfg.command = "label";
            return run_label(cfg);
        }
        if (*train) {
            cfg.command = "train";
            return run_train(cfg);
        }
        if (*eval) {
            cfg.command = "eval";
            return run_eval(cfg);
        }
        if (*classify) {
            cfg.command = "classify";
            return run_classify(cfg);
        }
        if (*allotax) {
            cfg.command = "allotax";
            return run_allotax(cfg);
        }
        if (*popularity) {
            cfg.command = "analyze popularity";
            return run_popularity(cfg);
        }
        if (*users) {
            cfg.command = "analyze users";
            return run_users(cfg);
        }
        if (*demographics) {
            cfg.command = "analyze demographics";
            return run_demographics(cfg);
        }
        if (*awry) {
            cfg.command = "awry";
            return run_awry(cfg);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

} // namespace judge::cli
