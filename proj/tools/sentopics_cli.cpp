// Command-line front end for the analysis pipeline. Subcommands map onto the
// pipeline stages so the human topic-labeling step can happen between `fit`
// and `compare`.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "sentopics/errors.hpp"
#include "sentopics/pipeline.hpp"

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    std::string seed;
    int threads = -1;
    bool round_alpha = false;
};

sentopics::pipeline::PipelineConfig resolve_config(const GlobalFlags& flags) {
    sentopics::pipeline::PipelineConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = sentopics::pipeline::PipelineConfig::from_file(flags.config_path);
    }
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.seed.empty()) cfg.seed = std::stoull(flags.seed);
    if (flags.threads >= 0) cfg.threads = flags.threads;
    if (flags.round_alpha) cfg.round_alpha = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch sentiment + topic analytics pipeline"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "key = value configuration file");
    app.add_option("--out-dir", flags.out_dir, "output directory (overrides config)");
    app.add_option("--seed", flags.seed, "random seed (overrides config)");
    app.add_option("--threads", flags.threads, "worker threads, 0 = auto (overrides config)");
    app.add_flag("--round-alpha", flags.round_alpha,
                 "round the significance threshold to 3 decimals");

    auto* ingest = app.add_subcommand("ingest", "clean, filter, and tokenize the input corpus");
    auto* sent = app.add_subcommand("sentiment", "classify documents with the configured engine");
    auto* agree = app.add_subcommand("agree", "score engines against dual-coder gold labels");
    auto* sweep = app.add_subcommand("sweep", "select the topic count by C_V coherence");
    auto* fit = app.add_subcommand("fit", "fit the topic model by collapsed Gibbs sampling");
    auto* label_template =
        app.add_subcommand("label-template", "write an editable topic label CSV");
    auto* compare = app.add_subcommand("compare", "per-topic negative vs non-negative statistics");
    auto* report = app.add_subcommand("report", "trend, topic-weight, and top-k reports");
    auto* run = app.add_subcommand("run", "full pipeline end to end");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = resolve_config(flags);
        using namespace sentopics::pipeline;
        if (run->parsed()) {
            run_pipeline(cfg);
        } else {
            auto manifest = RunManifest::load_or_create(cfg.out_dir, cfg);
            if (ingest->parsed()) stage_ingest(cfg, manifest);
            if (sent->parsed()) stage_sentiment(cfg, manifest);
            if (agree->parsed()) stage_agree(cfg, manifest);
            if (sweep->parsed()) stage_sweep(cfg, manifest);
            if (fit->parsed()) stage_fit(cfg, manifest);
            if (label_template->parsed()) write_label_template(cfg, manifest);
            if (compare->parsed()) stage_compare(cfg, manifest);
            if (report->parsed()) stage_report(cfg, manifest);
        }
    } catch (const sentopics::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const sentopics::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const sentopics::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
