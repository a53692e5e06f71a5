#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sentopics/sentiment.hpp"
#include "sentopics/student_t.hpp"

namespace sentopics::stats {

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    bool degenerate = false;  // both variances zero
};

// Unequal-variance two-sample t-test, two-sided p via the t distribution.
// Both-variances-zero inputs are defined rather than rejected: equal means
// give t=0, p=1; distinct means give infinite t, p=0, flagged.
WelchResult welch_t_test(const std::vector<double>& x, const std::vector<double>& y);

// Sample-size-scaled significance level 0.05 / sqrt(N / 100).
double alpha_threshold(std::uint64_t n);

// Benjamini-Hochberg step-up adjustment; output is in the input's order.
std::vector<double> fdr_adjust(const std::vector<double>& pvalues);

// Absolute standardized mean difference over the pooled standard deviation.
double cohens_d(const std::vector<double>& x, const std::vector<double>& y);

enum class EffectClass { VerySmall, Small, Medium, Large, VeryLarge, Huge };

// Lower-bound interval mapping over the extended threshold list
// 0.01 / 0.2 / 0.5 / 0.8 / 1.2 / 2.0; d below 0.01 is below-scale VerySmall.
EffectClass classify_effect(double d);
const char* effect_class_name(EffectClass c);   // "Very Small", ...
std::string effect_class_key(EffectClass c);    // "very_small", ...

struct EffectSize {
    std::size_t topic = 0;
    std::map<std::size_t, double> d_by_size;  // stratum size -> mean d over repeats
    double d_mean = 0.0;                      // mean over computed strata
    double d_full = 0.0;                      // full-sample d, reported alongside
    EffectClass effect = EffectClass::VerySmall;
    std::vector<std::string> warnings;        // skipped strata
};

inline const std::vector<std::size_t>& default_strata() {
    static const std::vector<std::size_t> sizes{8, 40, 60, 100, 200, 500, 1000};
    return sizes;
}

// For each size draws that many elements without replacement from each group
// (seeded, deterministic) and computes cohens_d; sizes exceeding a group are
// skipped with a warning. `repeats` averages several draws per size.
EffectSize stratified_effect_size(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                  int repeats = 1);

enum class Direction { NegGreater, NonNegGreater, NS };
const char* direction_name(Direction d);  // "Neg > NonNeg", "Neg < NonNeg", "NS"

struct TestResult {
    std::size_t topic = 0;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    double p_adj = 1.0;
    Direction direction = Direction::NS;
    double alpha_used = 0.0;
    bool degenerate = false;
    std::string warning;
};

struct TopicComparison {
    TestResult test;
    bool has_effect = false;  // NS rows carry no effect size
    EffectSize effect;
};

struct CompareOptions {
    std::vector<std::size_t> strata = default_strata();
    std::uint64_t seed = 0;
    int repeats = 1;
    bool round_alpha = false;  // round alpha_used to 3 decimals
};

// theta: row-per-document topic weights; labels: per-document sentiment
// aligned with theta rows; retained: topic indices kept after labeling.
// N for the alpha threshold is the number of labeled documents.
std::vector<TopicComparison> compare_all_topics(
    const std::vector<std::vector<double>>& theta,
    const std::vector<sentiment::SentimentLabel>& labels,
    const std::vector<std::size_t>& retained, const CompareOptions& opts);

}  // namespace sentopics::stats
