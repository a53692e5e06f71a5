#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sentopics/corpus.hpp"

namespace sentopics::topics {

struct LdaConfig {
    std::size_t topic_count = 26;
    double alpha = 0.0;  // <= 0 selects the 5/T default
    double beta = 0.01;
    std::size_t iterations = 4000;
    std::uint64_t seed = 1;

    double effective_alpha() const {
        return alpha > 0.0 ? alpha : 5.0 / static_cast<double>(topic_count);
    }
    void validate() const;
};

// Collapsed Gibbs state plus the finalized phi/theta estimates.
struct TopicModel {
    std::size_t topic_count = 0;
    std::size_t vocab_size = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;

    std::vector<std::string> doc_ids;
    std::vector<std::vector<std::uint32_t>> docs;         // word ids per token
    std::vector<std::vector<std::uint32_t>> assignments;  // topic per token
    std::vector<std::vector<std::uint32_t>> doc_topic;    // n_dk, D x T
    std::vector<std::uint32_t> topic_word;                // n_kw, T x V flat
    std::vector<std::uint64_t> topic_total;               // n_k
    std::vector<double> log_likelihood_trace;             // one entry per sweep

    std::uint32_t& n_kw(std::size_t k, std::size_t w) { return topic_word[k * vocab_size + w]; }
    std::uint32_t n_kw(std::size_t k, std::size_t w) const {
        return topic_word[k * vocab_size + w];
    }

    // phi_kw = (n_kw + beta) / (n_k + V*beta), row-stochastic T x V.
    std::vector<std::vector<double>> phi() const;
    // theta_dk = (n_dk + alpha) / (n_d + T*alpha), row-stochastic D x T.
    std::vector<std::vector<double>> theta() const;
};

// Collapsed Gibbs sampling; deterministic for a fixed seed. Every document
// must be nonempty and covered by the vocabulary.
TopicModel fit_lda(const std::vector<corpus::CleanDoc>& docs, const corpus::Vocabulary& vocab,
                   const LdaConfig& cfg);

// Joint log p(w, z | alpha, beta) with theta and phi integrated out.
double log_likelihood(const TopicModel& model);

struct RobustnessReport {
    std::vector<std::uint64_t> seeds;
    std::vector<double> final_log_likelihoods;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    double cv = 0.0;      // stddev / |mean|
    double threshold = 0.01;
    bool pass = false;
};

// Refits with seeds seed+0 .. seed+n_runs-1 (or an explicit seed list) and
// summarizes the spread of final log-likelihoods.
RobustnessReport robustness_check(const std::vector<corpus::CleanDoc>& docs,
                                  const corpus::Vocabulary& vocab, const LdaConfig& cfg,
                                  int n_runs = 5, double cv_threshold = 0.01, int threads = 1,
                                  const std::vector<std::uint64_t>* seed_override = nullptr);

// Highest-phi terms per topic, descending, ties by vocabulary index.
std::vector<std::vector<std::string>> top_words(const TopicModel& model,
                                                const corpus::Vocabulary& vocab,
                                                std::size_t n = 10);

struct TopicLabelEntry {
    std::size_t topic = 0;
    std::string label;
    bool q1_meaningful = true;
    bool q2_relevant = true;
};

struct TopicLabelFile {
    std::vector<TopicLabelEntry> entries;  // one per topic index
};

// Topics failing either question are excluded; returns the retained indices
// in ascending order. Labels must cover every topic exactly once.
std::vector<std::size_t> apply_topic_labels(std::size_t topic_count, const TopicLabelFile& labels,
                                            std::vector<std::string>* warnings = nullptr);

TopicLabelFile read_topic_labels_csv(const std::filesystem::path& path);
void write_topic_labels_csv(const std::filesystem::path& path, const TopicLabelFile& labels);
TopicLabelFile default_topic_labels(std::size_t topic_count);

// Model directory: phi.csv, theta.csv, assignments.csv, metadata.json.
void write_model_dir(const std::filesystem::path& dir, const TopicModel& model,
                     const corpus::Vocabulary& vocab);

struct ModelArtifacts {
    std::size_t topic_count = 0;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<double>> theta;  // D x T
    std::vector<std::vector<double>> phi;    // T x V
    std::vector<std::string> vocab_terms;
    double final_log_likelihood = 0.0;
    std::uint64_t seed = 0;
};

ModelArtifacts read_model_dir(const std::filesystem::path& dir);

void write_top_words_csv(const std::filesystem::path& path, const TopicModel& model,
                         const corpus::Vocabulary& vocab, std::size_t n = 10);

}  // namespace sentopics::topics
