#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentopics/stats.hpp"

namespace sentopics::pipeline {

struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path stopwords;
    std::string engine = "compound";  // compound | difference | auto
    std::filesystem::path valence_lexicon;
    std::filesystem::path positive_lexicon;
    std::filesystem::path negative_lexicon;
    std::filesystem::path gold_labels;
    std::filesystem::path topic_labels;

    std::size_t lda_topics = 26;
    double lda_alpha = 0.0;  // 0 -> 5/T
    double lda_beta = 0.01;
    std::size_t lda_iterations = 4000;

    bool sweep = false;
    std::size_t sweep_min = 2;
    std::size_t sweep_max = 100;
    std::size_t sweep_iterations = 500;
    std::size_t sweep_top_n = 10;
    std::size_t coherence_window = 110;

    int robustness_runs = 0;  // 0 disables the check
    double robustness_threshold = 0.01;

    std::vector<std::size_t> strat_sizes = stats::default_strata();
    int strat_repeats = 1;
    std::size_t top_k = 5;
    std::size_t top_words_n = 10;

    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    int threads = 0;  // 0 -> hardware concurrency
    bool round_alpha = false;
    bool keep_apostrophes = true;
    std::size_t min_tokens = 5;

    // Key = value file; '#' comments; relative paths resolve against the
    // config file's directory.
    static PipelineConfig from_file(const std::filesystem::path& path);
    void validate_for_ingest() const;
    void validate_for_sentiment() const;
    nlohmann::json snapshot() const;
};

// JSON run record: config snapshot, input hash, per-stage status, output
// digests, counts, seeds. Lives at <out_dir>/manifest.json.
class RunManifest {
public:
    static RunManifest load_or_create(const std::filesystem::path& out_dir,
                                      const PipelineConfig& cfg);
    void save();

    void stage_started(const std::string& stage);
    void stage_completed(const std::string& stage);
    void record_output(const std::filesystem::path& file);
    void mark_partial(const std::string& stage, const std::string& error);
    void mark_complete();

    nlohmann::json& json() { return j_; }
    const nlohmann::json& json() const { return j_; }

private:
    std::filesystem::path path_;
    std::filesystem::path out_dir_;
    nlohmann::json j_;
};

// Stage entry points; each reads persisted upstream artifacts and writes its
// own outputs, so any stage can be re-run in isolation.
void stage_ingest(const PipelineConfig& cfg, RunManifest& manifest);
void stage_agree(const PipelineConfig& cfg, RunManifest& manifest);
void stage_sentiment(const PipelineConfig& cfg, RunManifest& manifest);
void stage_sweep(const PipelineConfig& cfg, RunManifest& manifest);
void stage_fit(const PipelineConfig& cfg, RunManifest& manifest);
void stage_compare(const PipelineConfig& cfg, RunManifest& manifest);
void stage_report(const PipelineConfig& cfg, RunManifest& manifest);
void write_label_template(const PipelineConfig& cfg, RunManifest& manifest);

// Full Figure-1 style run: ingest, sentiment, optional sweep, fit, labeling,
// statistics, reports. Each stage's outputs are flushed before the next
// begins; on failure the manifest is marked partial and earlier outputs stay.
RunManifest run_pipeline(const PipelineConfig& cfg);

}  // namespace sentopics::pipeline
