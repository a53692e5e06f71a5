#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sentopics/corpus.hpp"
#include "sentopics/lda.hpp"

namespace sentopics::topics {

struct CoherenceOptions {
    std::size_t window = 110;   // boolean sliding window length, step 1
    double epsilon = 1e-12;     // NPMI smoothing
};

struct CoherenceResult {
    std::vector<double> per_topic;  // one C_V score per topic, in [-1, 1]
    double mean = 0.0;
};

// C_V coherence: boolean sliding-window co-occurrence, NPMI context vectors,
// one-set segmentation, cosine similarity against the vector sum, arithmetic
// mean. Documents shorter than the window count as a single window.
CoherenceResult coherence_cv(const std::vector<std::vector<std::string>>& top_words_per_topic,
                             const std::vector<corpus::CleanDoc>& reference,
                             const CoherenceOptions& opts = {});

struct CoherenceSweep {
    std::map<std::size_t, double> mean_by_t;
    std::map<std::size_t, std::vector<double>> per_topic_by_t;
    std::size_t selected = 0;  // argmax of mean score, ties to the smaller T
};

struct SweepOptions {
    std::size_t t_min = 2;
    std::size_t t_max = 100;
    std::size_t top_n = 10;
    std::size_t sweep_iterations = 500;  // reduced budget per candidate fit
    CoherenceOptions coherence;
    int threads = 1;
};

// Fits one model per candidate T (seed = cfg.seed + T) and scores each on
// its own training corpus.
CoherenceSweep select_topic_count(const std::vector<corpus::CleanDoc>& docs,
                                  const corpus::Vocabulary& vocab, const LdaConfig& cfg_template,
                                  const SweepOptions& opts);

void write_sweep_csv(const std::filesystem::path& path, const CoherenceSweep& sweep);

}  // namespace sentopics::topics
