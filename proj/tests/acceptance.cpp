// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Runs against the bundled synthetic fixtures; tolerances
// are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sentopics/coherence.hpp"
#include "sentopics/corpus.hpp"
#include "sentopics/lda.hpp"
#include "sentopics/pipeline.hpp"
#include "sentopics/report.hpp"
#include "sentopics/rng.hpp"
#include "sentopics/sentiment.hpp"
#include "sentopics/stats.hpp"
#include "synthetic.hpp"
#include "welch_fixtures.hpp"

using namespace sentopics;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir = SENTOPICS_SOURCE_DIR;

struct Harness {
    int failures = 0;

    void run(int number, const std::string& name, const std::function<bool(std::string&)>& fn) {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::printf("[%s] criterion %2d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", number,
                    name.c_str(), static_cast<long long>(ms), detail.empty() ? "" : " -- ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

bool check(bool cond, std::string& detail, const std::string& msg) {
    if (!cond && detail.empty()) detail = msg;
    return cond;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion bodies ----------------------------------------------------

bool criterion_alpha(std::string& detail) {
    const double a = stats::alpha_threshold(185953);
    bool ok = check(a >= 0.001159 && a <= 0.001160, detail, "alpha outside [0.001159, 0.001160]");
    ok &= check(std::round(a * 1000.0) / 1000.0 == 0.001, detail, "alpha does not round to 0.001");
    ok &= check(std::fabs(a - 0.05 / std::sqrt(185953.0 / 100.0)) < 1e-9, detail,
                "alpha deviates from the exact formula");
    ok &= check(stats::alpha_threshold(100) == 0.05, detail, "alpha(100) != 0.05");
    return ok;
}

bool criterion_agreement(std::string& detail) {
    std::vector<sentiment::GoldRecord> gold;
    std::unordered_map<std::string, sentiment::SentimentLabel> pred;
    using sentiment::SentimentLabel;
    for (int i = 0; i < 1000; ++i) {
        const std::string id = "t" + std::to_string(i);
        if (i < 719) {
            gold.push_back({id, SentimentLabel::Negative, SentimentLabel::Negative});
            pred[id] = i < 543 ? SentimentLabel::Negative : SentimentLabel::NonNegative;
        } else {
            gold.push_back({id, SentimentLabel::Negative, SentimentLabel::NonNegative});
            pred[id] = SentimentLabel::Negative;
        }
    }
    const auto rep = sentiment::evaluate_agreement("engine", pred, gold);
    bool ok = check(rep.n_gold_used == 719, detail, "n_gold_used != 719");
    ok &= check(rep.n_matches == 543, detail, "n_matches != 543");
    ok &= check(rep.agreement == 75.52, detail,
                "agreement != 75.52 (got " + std::to_string(rep.agreement) + ")");
    return ok;
}

bool criterion_statistical_oracles(std::string& detail) {
    bool ok = true;
    for (const auto& fx : testsupport::welch_fixtures()) {
        const auto r = stats::welch_t_test(fx.x, fx.y);
        ok &= check(std::fabs(r.t - fx.t) <= 1e-9 * std::max(1.0, std::fabs(fx.t)), detail,
                    "welch t outside 1e-9");
        ok &= check(std::fabs(r.p - fx.p) <= 1e-6, detail, "welch p outside 1e-6");
    }
    using vec = std::vector<double>;
    const std::vector<std::pair<vec, vec>> fdr_cases = {
        {{0.01, 0.04, 0.03}, {0.03, 0.04, 0.04}},
        {{0.5}, {0.5}},
        {{0.2, 0.2, 0.2, 0.2}, {0.2, 0.2, 0.2, 0.2}},
        {{1.0, 0.5, 0.25}, {1.0, 0.75, 0.75}},
        {{0.02, 0.8}, {0.04, 0.8}},
    };
    for (const auto& [input, expected] : fdr_cases) {
        const auto got = stats::fdr_adjust(input);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            ok &= check(std::fabs(got[i] - expected[i]) < 1e-15, detail, "fdr fixture mismatch");
        }
    }
    const double d = stats::cohens_d({2, 4}, {1, 3});
    ok &= check(std::fabs(d - 0.7071) <= 1e-4, detail, "cohens_d([2,4],[1,3]) != 0.7071 +- 1e-4");
    return ok;
}

bool criterion_effect_classes(std::string& detail) {
    using stats::EffectClass;
    const std::vector<std::pair<double, EffectClass>> expected = {
        {0.01, EffectClass::VerySmall}, {0.2, EffectClass::Small},   {0.5, EffectClass::Medium},
        {0.8, EffectClass::Large},      {1.2, EffectClass::VeryLarge}, {2.0, EffectClass::Huge},
    };
    bool ok = true;
    for (const auto& [d, cls] : expected) {
        ok &= check(stats::classify_effect(d) == cls, detail,
                    "classify_effect(" + std::to_string(d) + ") wrong");
    }
    return ok;
}

bool criterion_lda_sanity(std::string& detail) {
    const auto docs = testsupport::planted_corpus(2, 100, 10, 20, 20260810);
    const auto vocab = corpus::build_vocabulary(docs);
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        topics::LdaConfig cfg;
        cfg.topic_count = 2;
        cfg.iterations = 500;
        cfg.seed = seed;
        const auto model = topics::fit_lda(docs, vocab, cfg);
        const auto mass = testsupport::topic_group_mass(model, vocab, 2);
        const std::size_t g0 = mass[0][0] >= mass[0][1] ? 0 : 1;
        const std::size_t g1 = 1 - g0;
        ok &= check(mass[0][g0] >= 0.9 && mass[1][g1] >= 0.9, detail,
                    "phi mass below 0.9 at seed " + std::to_string(seed));
        const auto theta = model.theta();
        std::size_t dominant = 0;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const std::size_t planted = testsupport::group_of_doc(model.doc_ids[d]);
            const std::size_t fitted = theta[d][0] >= theta[d][1] ? g0 : g1;
            if (fitted == planted) ++dominant;
        }
        ok &= check(dominant * 100 >= docs.size() * 95, detail,
                    "dominant-theta share below 95% at seed " + std::to_string(seed));
    }
    return ok;
}

bool criterion_lda_bookkeeping(std::string& detail) {
    const auto docs = testsupport::planted_corpus(2, 60, 10, 15, 7);
    const auto vocab = corpus::build_vocabulary(docs);
    topics::LdaConfig cfg;
    cfg.topic_count = 3;
    cfg.iterations = 50;
    cfg.seed = 99;
    const auto model = topics::fit_lda(docs, vocab, cfg);

    std::vector<std::vector<std::uint32_t>> ndk(model.docs.size(),
                                                std::vector<std::uint32_t>(model.topic_count, 0));
    std::vector<std::uint32_t> nkw(model.topic_count * model.vocab_size, 0);
    std::vector<std::uint64_t> nk(model.topic_count, 0);
    for (std::size_t d = 0; d < model.docs.size(); ++d) {
        for (std::size_t i = 0; i < model.docs[d].size(); ++i) {
            const auto k = model.assignments[d][i];
            ++ndk[d][k];
            ++nkw[k * model.vocab_size + model.docs[d][i]];
            ++nk[k];
        }
    }
    bool ok = check(ndk == model.doc_topic && nkw == model.topic_word && nk == model.topic_total,
                    detail, "recounted counts differ from stored counts");
    for (const auto& row : model.phi()) {
        double sum = 0.0;
        for (double v : row) sum += v;
        ok &= check(std::fabs(sum - 1.0) <= 1e-9, detail, "phi row sum outside 1e-9");
    }
    for (const auto& row : model.theta()) {
        double sum = 0.0;
        for (double v : row) sum += v;
        ok &= check(std::fabs(sum - 1.0) <= 1e-9, detail, "theta row sum outside 1e-9");
    }
    const auto again = topics::fit_lda(docs, vocab, cfg);
    ok &= check(again.assignments == model.assignments, detail,
                "fixed seed did not reproduce assignments");
    return ok;
}

bool criterion_coherence_selection(std::string& detail) {
    // hand-evaluated two-word fixture first
    auto doc_of = [](std::string id, std::vector<std::string> tokens) {
        corpus::CleanDoc d;
        d.id = std::move(id);
        d.author_id = "a" + d.id;
        d.tokens = std::move(tokens);
        return d;
    };
    const std::vector<corpus::CleanDoc> reference{doc_of("w1", {"a", "b", "c", "d", "e"}),
                                                  doc_of("w2", {"a", "c", "d", "e", "f"}),
                                                  doc_of("w3", {"b", "c", "d", "e", "f"})};
    const auto fixture = topics::coherence_cv({{"a", "b"}}, reference);
    bool ok = check(std::fabs(fixture.per_topic[0] - 0.5049198708284883) < 1e-10, detail,
                    "hand-evaluated C_V fixture outside 1e-10");

    // selection on a 4-group planted corpus, 10 seeded repetitions
    int in_range = 0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const auto docs = testsupport::planted_corpus(4, 50, 12, 16, 1000 + rep);
        const auto vocab = corpus::build_vocabulary(docs);
        topics::LdaConfig tmpl;
        tmpl.seed = 5000 + rep;
        topics::SweepOptions opts;
        opts.t_min = 2;
        opts.t_max = 10;
        opts.top_n = 10;
        opts.sweep_iterations = 200;
        opts.threads = 4;
        const auto sweep = topics::select_topic_count(docs, vocab, tmpl, opts);
        if (sweep.selected >= 3 && sweep.selected <= 5) ++in_range;
    }
    ok &= check(in_range >= 8, detail,
                "selected T in {3,4,5} only " + std::to_string(in_range) + "/10 times");
    return ok;
}

bool criterion_robustness(std::string& detail) {
    const auto docs = testsupport::planted_corpus(2, 100, 10, 20, 20260810);
    const auto vocab = corpus::build_vocabulary(docs);
    topics::LdaConfig cfg;
    cfg.topic_count = 2;
    cfg.iterations = 500;
    cfg.seed = 77;
    const auto rep = topics::robustness_check(docs, vocab, cfg, 5, 0.01, 4);
    return check(rep.pass && rep.cv <= 0.01, detail,
                 "coefficient of variation " + std::to_string(rep.cv) + " above 0.01");
}

bool criterion_sentiment_engines(std::string& detail) {
    using sentiment::SentimentLabel;
    sentiment::ValenceLexicon lex;
    Rng rng(123);
    for (int i = 0; i < 80; ++i) lex.valence["w" + std::to_string(i)] = -4.0 + 8.0 * rng.uniform01();
    lex.boosters = {{"very", 0.293}};
    lex.negators = {"not"};

    bool ok = true;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<std::string> tokens;
        const std::size_t len = 1 + rng.below(30);
        for (std::size_t j = 0; j < len; ++j) {
            const auto pick = rng.below(100);
            if (pick < 80) tokens.push_back("w" + std::to_string(pick));
            else if (pick < 90) tokens.push_back("very");
            else if (pick < 95) tokens.push_back("not");
            else tokens.push_back("neutral");
        }
        const auto r = sentiment::compound_score(tokens, lex);
        if (!(std::fabs(r.cs) < 1.0)) {
            ok = check(false, detail, "|cs| reached 1 on a random document");
            break;
        }
    }

    sentiment::ValenceLexicon two;
    two.valence = {{"word", 2.0}};
    const auto lone = sentiment::compound_score({"word"}, two);
    ok &= check(std::fabs(lone.cs - 2.0 / std::sqrt(19.0)) <= 1e-9, detail,
                "lone valence-2.0 token is not 2/sqrt(19)");

    ok &= check(sentiment::label_from_cs(-0.05) == SentimentLabel::Negative, detail,
                "cs == -0.05 must be Negative");
    ok &= check(sentiment::label_from_cs(std::nextafter(-0.05, 0.0)) == SentimentLabel::NonNegative,
                detail, "cs just above -0.05 must be NonNegative");

    sentiment::PolarityLexicon pol;
    pol.positive = {"up"};
    pol.negative = {"down"};
    const auto zero = sentiment::score_difference({"up", "down", "flat", "flat"}, pol);
    ok &= check(zero.diff == 0.0 && zero.label == SentimentLabel::NonNegative, detail,
                "difference engine must label diff == 0 as NonNegative");
    return ok;
}

bool criterion_end_to_end(std::string& detail) {
    auto cfg = pipeline::PipelineConfig::from_file(kSourceDir / "data/golden/config.cfg");
    const auto out_a = fs::temp_directory_path() / "sentopics_accept_a";
    const auto out_b = fs::temp_directory_path() / "sentopics_accept_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    cfg.out_dir = out_a;
    pipeline::run_pipeline(cfg);
    cfg.out_dir = out_b;
    pipeline::run_pipeline(cfg);

    bool ok = true;
    for (const char* f :
         {"corpus_clean.jsonl", "corpus_lda.jsonl", "vocabulary.csv", "sentiment.csv",
          "topwords.csv", "comparison.csv", "comparison_detail.csv", "comparison_strata.csv",
          "trend.csv", "topic_means.csv", "top_topics.csv"}) {
        ok &= check(slurp(out_a / f) == slurp(out_b / f), detail,
                    std::string("output differs between reruns: ") + f);
    }
    ok &= check(slurp(out_a / "model" / "theta.csv") == slurp(out_b / "model" / "theta.csv"),
                detail, "theta.csv differs between reruns");

    // locate the fitted topic that carries the planted shift: the golden
    // corpus boosts the "Access" vocabulary group in negative documents
    const std::vector<std::string> group0 = {"appointment", "clinic", "site",     "county",
                                             "schedule",    "slot",   "pharmacy", "register",
                                             "queue",       "booking"};
    const auto art = topics::read_model_dir(out_a / "model");
    std::size_t planted_topic = 0;
    double best_mass = -1.0;
    for (std::size_t k = 0; k < art.topic_count; ++k) {
        double mass = 0.0;
        for (std::size_t w = 0; w < art.vocab_terms.size(); ++w) {
            for (const auto& g : group0) {
                if (art.vocab_terms[w] == g) mass += art.phi[k][w];
            }
        }
        if (mass > best_mass) {
            best_mass = mass;
            planted_topic = k;
        }
    }
    ok &= check(best_mass > 0.5, detail, "no fitted topic concentrates on the planted vocabulary");

    std::ifstream in(out_a / "comparison.json");
    nlohmann::json rows;
    in >> rows;
    ok &= check(rows.size() == 6, detail, "comparison table does not cover 6 topics");
    for (const auto& row : rows) {
        const auto topic = row["topic"].get<std::size_t>();
        const bool significant = row["significant"].get<bool>();
        const std::string direction = row["direction"].get<std::string>();
        if (topic == planted_topic) {
            ok &= check(significant && direction == "Neg > NonNeg", detail,
                        "planted topic not detected as Neg > NonNeg");
        } else {
            ok &= check(!significant, detail,
                        "unshifted topic " + std::to_string(topic) + " flagged significant");
        }
    }
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    return ok;
}

bool criterion_aggregates(std::string& detail) {
    Rng rng(2026);
    const char* months[4] = {"2020-11", "2020-12", "2021-01", "2021-02"};
    bool ok = true;
    using sentiment::SentimentLabel;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<corpus::CleanDoc> docs;
        std::unordered_map<std::string, SentimentLabel> labels;
        std::map<std::string, std::pair<std::size_t, std::size_t>> expected;
        const std::size_t n = 50 + rng.below(400);
        for (std::size_t i = 0; i < n; ++i) {
            corpus::CleanDoc d;
            d.id = std::to_string(i);
            d.author_id = "a";
            const std::string month = months[rng.below(4)];
            d.timestamp = corpus::parse_iso8601(month + "-05T00:00:00Z");
            d.tokens = {"t1", "t2", "t3", "t4", "t5"};
            docs.push_back(d);
            const bool neg = rng.below(5) < 2;
            labels[d.id] = neg ? SentimentLabel::Negative : SentimentLabel::NonNegative;
            auto& e = expected[month];
            e.first += neg ? 1 : 0;
            e.second += 1;
        }
        const auto rep = report::monthly_sentiment_rates(docs, labels);
        for (const auto& row : rep.months) {
            const auto& [neg, cnt] = expected.at(row.month);
            const double exact = 100.0 * static_cast<double>(neg) / static_cast<double>(cnt);
            ok &= check(std::fabs(row.negative_rate() - exact) <= 0.005 + 1e-12, detail,
                        "monthly rate deviates from the brute-force recount");
            ok &= check(row.negative_centis + row.non_negative_centis == 10000, detail,
                        "monthly rates do not sum to 100.00");
        }

        std::vector<std::vector<double>> theta;
        for (std::size_t d = 0; d < 40; ++d) {
            std::vector<double> row(5);
            for (auto& v : row) v = rng.uniform01();
            theta.push_back(row);
        }
        const std::vector<std::size_t> retained{0, 2, 4};
        const auto means = report::average_topic_weight(theta, retained);
        for (std::size_t i = 0; i < retained.size(); ++i) {
            double sum = 0.0;
            for (const auto& row : theta) sum += row[retained[i]];
            ok &= check(std::fabs(means[i].mean - sum / 40.0) <= 1e-12, detail,
                        "average topic weight deviates from the recount");
        }
    }
    return ok;
}

}  // namespace

int main() {
    Harness h;
    h.run(1, "sample-size-scaled alpha threshold", criterion_alpha);
    h.run(2, "dual-coder agreement arithmetic", criterion_agreement);
    h.run(3, "Welch/FDR/Cohen statistical oracles", criterion_statistical_oracles);
    h.run(4, "effect-size class boundaries", criterion_effect_classes);
    h.run(5, "LDA recovers the planted two-topic corpus", criterion_lda_sanity);
    h.run(6, "LDA bookkeeping and determinism", criterion_lda_bookkeeping);
    h.run(7, "C_V coherence fixture and topic-count selection", criterion_coherence_selection);
    h.run(8, "five-seed log-likelihood robustness", criterion_robustness);
    h.run(9, "sentiment engine bounds and thresholds", criterion_sentiment_engines);
    h.run(10, "end-to-end determinism and planted-shift detection", criterion_end_to_end);
    h.run(11, "aggregate reports match brute-force recounts", criterion_aggregates);

    if (h.failures > 0) {
        std::printf("%d criterion(s) FAILED\n", h.failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
