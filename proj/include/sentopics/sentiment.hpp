#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sentopics/corpus.hpp"

namespace sentopics::sentiment {

enum class SentimentLabel { Negative, NonNegative };

const char* label_name(SentimentLabel label);       // "NEG" / "NONNEG"
SentimentLabel label_from_name(const std::string&);

// Word-count difference engine (positive/negative term sets).
struct PolarityLexicon {
    std::unordered_set<std::string> positive;
    std::unordered_set<std::string> negative;

    void validate() const;  // sets disjoint, union nonempty
};

// Rule engine over per-term valences with booster and negation context rules.
struct ValenceLexicon {
    std::unordered_map<std::string, double> valence;   // term -> [-4, 4]
    std::unordered_map<std::string, double> boosters;  // term -> increment
    std::unordered_set<std::string> negators;

    // Reference constants of the rule family; all overridable via config.
    double negation_damp = -0.74;
    double default_booster = 0.293;
    double normalizer = 15.0;
    int negation_window = 3;

    void validate() const;  // finite values, negators disjoint from valence terms
};

struct DifferenceScore {
    double diff = 0.0;  // 100 * (pos hits - neg hits) / token count
    SentimentLabel label = SentimentLabel::NonNegative;
};

struct CompoundScore {
    double cs = 0.0;  // s / sqrt(s^2 + normalizer), strictly inside (-1, 1)
    SentimentLabel label = SentimentLabel::NonNegative;
};

// diff < 0 -> Negative; diff == 0 falls in the non-negative branch.
DifferenceScore score_difference(const std::vector<std::string>& tokens,
                                 const PolarityLexicon& lex);

// Negative iff cs <= -0.05 (inclusive threshold).
CompoundScore compound_score(const std::vector<std::string>& tokens, const ValenceLexicon& lex);
SentimentLabel label_from_cs(double cs);

struct GoldRecord {
    std::string id;
    SentimentLabel coder_a;
    SentimentLabel coder_b;
};

struct AgreementReport {
    std::string engine;
    std::size_t n_gold_used = 0;  // unanimous records only
    std::size_t n_matches = 0;
    double agreement = 0.0;  // 100 * n_matches / n_gold_used, 2 decimals half-up
};

AgreementReport evaluate_agreement(
    const std::string& engine,
    const std::unordered_map<std::string, SentimentLabel>& predictions,
    const std::vector<GoldRecord>& gold);

// Argmax by agreement; exact ties go to the lexicographically smaller name.
std::string select_engine(const std::vector<AgreementReport>& reports);

// File formats ------------------------------------------------------------

PolarityLexicon read_polarity_lexicon(const std::filesystem::path& positive_terms,
                                      const std::filesystem::path& negative_terms);

// CSV with term,valence rows; optional [boosters] (term,increment) and
// [negators] (term) sections.
ValenceLexicon read_valence_lexicon(const std::filesystem::path& path);

// CSV with columns id,coder_a,coder_b and labels NEG / NONNEG.
std::vector<GoldRecord> read_gold_csv(const std::filesystem::path& path);

struct ScoredDoc {
    std::string id;
    double score = 0.0;
    SentimentLabel label = SentimentLabel::NonNegative;
};

void write_sentiment_csv(const std::filesystem::path& path, const std::string& engine,
                         const std::vector<ScoredDoc>& scored);
std::vector<ScoredDoc> read_sentiment_csv(const std::filesystem::path& path);

}  // namespace sentopics::sentiment
