#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "sentopics/corpus.hpp"
#include "sentopics/sentiment.hpp"
#include "sentopics/stats.hpp"

namespace sentopics::report {

// Percentages are held in hundredths of a percent so that the
// largest-remainder reconciliation and the 2-decimal CSV rendering are exact.
struct MonthRow {
    std::string month;  // "YYYY-MM", or "overall" for the summary row
    std::size_t count = 0;
    int negative_centis = 0;      // 0..10000
    int non_negative_centis = 0;  // negative + non_negative == 10000

    double negative_rate() const { return negative_centis / 100.0; }
    double non_negative_rate() const { return non_negative_centis / 100.0; }
};

struct TrendReport {
    std::vector<MonthRow> months;  // ascending by month
    MonthRow overall;
};

// Buckets by UTC calendar month. Rates are 100*count/month_total rounded to
// 2 decimals with largest-remainder reconciliation so each row sums to 100.00.
TrendReport monthly_sentiment_rates(
    const std::vector<corpus::CleanDoc>& docs,
    const std::unordered_map<std::string, sentiment::SentimentLabel>& labels);

struct TopicMean {
    std::size_t topic = 0;
    double mean = 0.0;
};

// Column means of theta over all documents, restricted to retained topics.
std::vector<TopicMean> average_topic_weight(const std::vector<std::vector<double>>& theta,
                                            const std::vector<std::size_t>& retained);

struct TopKTopics {
    std::vector<TopicMean> negative;      // within-group means, descending
    std::vector<TopicMean> non_negative;
};

// Per group, retained topics ranked by within-group mean weight (ties by
// topic index); the top k of each ranking.
TopKTopics top_k_topics_by_group(const std::vector<std::vector<double>>& theta,
                                 const std::vector<sentiment::SentimentLabel>& labels,
                                 const std::vector<std::size_t>& retained, std::size_t k = 5);

void write_trend_csv(const std::filesystem::path& path, const TrendReport& report);
void write_topic_means_csv(const std::filesystem::path& path, const std::vector<TopicMean>& means,
                           const std::vector<std::string>& topic_labels);
void write_top_topics_csv(const std::filesystem::path& path, const TopKTopics& top,
                          const std::vector<std::string>& topic_labels);

// Self-contained SVG renderings of the trend and weight aggregates. The CSVs
// above stay the canonical record; charts are derived views.
void write_trend_svg(const std::filesystem::path& path, const TrendReport& report);
void write_topic_means_svg(const std::filesystem::path& path,
                           const std::vector<TopicMean>& means);

}  // namespace sentopics::report

namespace sentopics::stats {

// Comparison-table emission. The main CSV mirrors the published table shape
// (topic, label, result, d mean, effect size); the detail and strata CSVs
// carry the full statistics at 6 significant digits; the JSON sidecar keeps
// everything at full precision.
void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<TopicComparison>& rows,
                          const std::vector<std::string>& topic_labels);
void write_comparison_detail_csv(const std::filesystem::path& path,
                                 const std::vector<TopicComparison>& rows);
void write_comparison_strata_csv(const std::filesystem::path& path,
                                 const std::vector<TopicComparison>& rows);
void write_comparison_json(const std::filesystem::path& path,
                           const std::vector<TopicComparison>& rows,
                           const std::vector<std::string>& topic_labels);

}  // namespace sentopics::stats
