#include "sentopics/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "sentopics/coherence.hpp"
#include "sentopics/corpus.hpp"
#include "sentopics/errors.hpp"
#include "sentopics/hash.hpp"
#include "sentopics/lda.hpp"
#include "sentopics/report.hpp"

namespace sentopics::pipeline {

namespace {

constexpr const char* kArtifactVersion = "sentopics 0.1.0";

std::string now_iso() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return corpus::format_utc(static_cast<std::int64_t>(t));
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool_value(const std::string& key, const std::string& value) {
    std::string t;
    for (char c : value) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw ConfigError("config: boolean expected for " + key + ", got '" + value + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& value) {
    std::vector<std::size_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = strip(item);
        if (!t.empty()) out.push_back(static_cast<std::size_t>(std::stoull(t)));
    }
    return out;
}

void require_file(const std::filesystem::path& p, const std::string& what) {
    if (p.empty()) throw ConfigError("config: " + what + " is required but not set");
    if (!std::filesystem::exists(p)) {
        throw ConfigError("config: " + what + " does not exist: " + p.string());
    }
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    const std::filesystem::path base = path.parent_path();
    auto resolve = [&](const std::string& v) {
        std::filesystem::path p(v);
        return p.is_absolute() || base.empty() ? p : base / p;
    };

    PipelineConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = strip(t.substr(0, eq));
        const std::string value = strip(t.substr(eq + 1));
        try {
            if (key == "input") cfg.input = resolve(value);
            else if (key == "stopwords") cfg.stopwords = resolve(value);
            else if (key == "engine") cfg.engine = value;
            else if (key == "valence_lexicon") cfg.valence_lexicon = resolve(value);
            else if (key == "positive_lexicon") cfg.positive_lexicon = resolve(value);
            else if (key == "negative_lexicon") cfg.negative_lexicon = resolve(value);
            else if (key == "gold_labels") cfg.gold_labels = resolve(value);
            else if (key == "topic_labels") cfg.topic_labels = resolve(value);
            else if (key == "lda_topics") cfg.lda_topics = std::stoul(value);
            else if (key == "lda_alpha") cfg.lda_alpha = std::stod(value);
            else if (key == "lda_beta") cfg.lda_beta = std::stod(value);
            else if (key == "lda_iterations") cfg.lda_iterations = std::stoul(value);
            else if (key == "sweep") cfg.sweep = parse_bool_value(key, value);
            else if (key == "sweep_min") cfg.sweep_min = std::stoul(value);
            else if (key == "sweep_max") cfg.sweep_max = std::stoul(value);
            else if (key == "sweep_iterations") cfg.sweep_iterations = std::stoul(value);
            else if (key == "sweep_top_n") cfg.sweep_top_n = std::stoul(value);
            else if (key == "coherence_window") cfg.coherence_window = std::stoul(value);
            else if (key == "robustness_runs") cfg.robustness_runs = std::stoi(value);
            else if (key == "robustness_threshold") cfg.robustness_threshold = std::stod(value);
            else if (key == "strat_sizes") cfg.strat_sizes = parse_size_list(value);
            else if (key == "strat_repeats") cfg.strat_repeats = std::stoi(value);
            else if (key == "top_k") cfg.top_k = std::stoul(value);
            else if (key == "top_words_n") cfg.top_words_n = std::stoul(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "out_dir") cfg.out_dir = resolve(value);
            else if (key == "threads") cfg.threads = std::stoi(value);
            else if (key == "round_alpha") cfg.round_alpha = parse_bool_value(key, value);
            else if (key == "keep_apostrophes") cfg.keep_apostrophes = parse_bool_value(key, value);
            else if (key == "min_tokens") cfg.min_tokens = std::stoul(value);
            else throw ConfigError("config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": unparseable value for " + key);
        }
    }
    return cfg;
}

void PipelineConfig::validate_for_ingest() const {
    require_file(input, "input");
    require_file(stopwords, "stopwords (the bundled list lives at data/stopwords_en.txt)");
    if (min_tokens < 1) throw ConfigError("config: min_tokens must be >= 1");
}

void PipelineConfig::validate_for_sentiment() const {
    const bool needs_compound = engine == "compound" || engine == "auto";
    const bool needs_difference = engine == "difference" || engine == "auto";
    if (!needs_compound && !needs_difference) {
        throw ConfigError("config: engine must be compound, difference, or auto");
    }
    if (needs_compound) require_file(valence_lexicon, "valence_lexicon");
    if (needs_difference) {
        require_file(positive_lexicon, "positive_lexicon");
        require_file(negative_lexicon, "negative_lexicon");
    }
    if (engine == "auto" && !gold_labels.empty()) require_file(gold_labels, "gold_labels");
}

nlohmann::json PipelineConfig::snapshot() const {
    nlohmann::json j;
    j["input"] = input.string();
    j["stopwords"] = stopwords.string();
    j["engine"] = engine;
    j["valence_lexicon"] = valence_lexicon.string();
    j["positive_lexicon"] = positive_lexicon.string();
    j["negative_lexicon"] = negative_lexicon.string();
    j["gold_labels"] = gold_labels.string();
    j["topic_labels"] = topic_labels.string();
    j["lda_topics"] = lda_topics;
    j["lda_alpha"] = lda_alpha;
    j["lda_beta"] = lda_beta;
    j["lda_iterations"] = lda_iterations;
    j["sweep"] = sweep;
    j["sweep_min"] = sweep_min;
    j["sweep_max"] = sweep_max;
    j["sweep_iterations"] = sweep_iterations;
    j["sweep_top_n"] = sweep_top_n;
    j["coherence_window"] = coherence_window;
    j["robustness_runs"] = robustness_runs;
    j["robustness_threshold"] = robustness_threshold;
    j["strat_sizes"] = strat_sizes;
    j["strat_repeats"] = strat_repeats;
    j["top_k"] = top_k;
    j["top_words_n"] = top_words_n;
    j["seed"] = seed;
    j["out_dir"] = out_dir.string();
    j["threads"] = threads;
    j["round_alpha"] = round_alpha;
    j["keep_apostrophes"] = keep_apostrophes;
    j["min_tokens"] = min_tokens;
    return j;
}

RunManifest RunManifest::load_or_create(const std::filesystem::path& out_dir,
                                        const PipelineConfig& cfg) {
    std::filesystem::create_directories(out_dir);
    RunManifest m;
    m.out_dir_ = out_dir;
    m.path_ = out_dir / "manifest.json";
    if (std::filesystem::exists(m.path_)) {
        std::ifstream in(m.path_);
        in >> m.j_;
    } else {
        m.j_["created_at"] = now_iso();
        m.j_["stages"] = nlohmann::json::object();
        m.j_["outputs"] = nlohmann::json::object();
        m.j_["counts"] = nlohmann::json::object();
    }
    m.j_["artifact"] = kArtifactVersion;
    m.j_["config"] = cfg.snapshot();
    m.j_["seed"] = cfg.seed;
    if (!m.j_.contains("status")) m.j_["status"] = "partial";
    return m;
}

void RunManifest::save() {
    j_["updated_at"] = now_iso();
    std::ofstream out(path_);
    if (!out) throw ConfigError("cannot write manifest: " + path_.string());
    out << j_.dump(2) << '\n';
}

void RunManifest::stage_started(const std::string& stage) {
    j_["stages"][stage] = {{"status", "running"}, {"started_at", now_iso()}};
    save();
}

void RunManifest::stage_completed(const std::string& stage) {
    j_["stages"][stage]["status"] = "completed";
    j_["stages"][stage]["completed_at"] = now_iso();
    save();
}

void RunManifest::record_output(const std::filesystem::path& file) {
    j_["outputs"][std::filesystem::relative(file, out_dir_).generic_string()] =
        sha256_file_hex(file);
}

void RunManifest::mark_partial(const std::string& stage, const std::string& error) {
    j_["status"] = "partial";
    j_["failed_stage"] = stage;
    j_["error"] = error;
    if (j_["stages"].contains(stage)) j_["stages"][stage]["status"] = "failed";
    save();
}

void RunManifest::mark_complete() {
    j_["status"] = "complete";
    j_.erase("failed_stage");
    j_.erase("error");
    save();
}

namespace {

corpus::CleanOptions clean_options(const PipelineConfig& cfg) {
    corpus::CleanOptions opts;
    opts.keep_apostrophes = cfg.keep_apostrophes;
    opts.min_tokens = cfg.min_tokens;
    return opts;
}

std::vector<corpus::CleanDoc> load_clean(const PipelineConfig& cfg) {
    return corpus::read_clean_jsonl(cfg.out_dir / "corpus_clean.jsonl");
}

std::vector<corpus::CleanDoc> load_lda(const PipelineConfig& cfg) {
    return corpus::read_clean_jsonl(cfg.out_dir / "corpus_lda.jsonl");
}

std::unordered_map<std::string, sentiment::SentimentLabel> load_labels(
    const PipelineConfig& cfg) {
    std::unordered_map<std::string, sentiment::SentimentLabel> labels;
    for (const auto& s : sentiment::read_sentiment_csv(cfg.out_dir / "sentiment.csv")) {
        labels[s.id] = s.label;
    }
    return labels;
}

topics::TopicLabelFile load_topic_labels(const PipelineConfig& cfg, std::size_t topic_count) {
    if (cfg.topic_labels.empty()) return topics::default_topic_labels(topic_count);
    return topics::read_topic_labels_csv(cfg.topic_labels);
}

std::vector<std::string> label_names(const topics::TopicLabelFile& file, std::size_t topic_count) {
    std::vector<std::string> names(topic_count);
    for (std::size_t k = 0; k < topic_count; ++k) names[k] = "T" + std::to_string(k + 1);
    for (const auto& e : file.entries) {
        if (e.topic < topic_count && !e.label.empty()) names[e.topic] = e.label;
    }
    return names;
}

struct EnginePredictions {
    std::vector<sentiment::ScoredDoc> compound;
    std::vector<sentiment::ScoredDoc> difference;
};

EnginePredictions score_all_engines(const PipelineConfig& cfg,
                                    const std::vector<corpus::CleanDoc>& docs) {
    EnginePredictions out;
    const auto valence = sentiment::read_valence_lexicon(cfg.valence_lexicon);
    const auto polarity =
        sentiment::read_polarity_lexicon(cfg.positive_lexicon, cfg.negative_lexicon);
    out.compound.reserve(docs.size());
    out.difference.reserve(docs.size());
    for (const auto& d : docs) {
        const auto cs = sentiment::compound_score(d.tokens, valence);
        out.compound.push_back({d.id, cs.cs, cs.label});
        const auto diff = sentiment::score_difference(d.tokens, polarity);
        out.difference.push_back({d.id, diff.diff, diff.label});
    }
    return out;
}

std::vector<sentiment::ScoredDoc> score_one_engine(const PipelineConfig& cfg,
                                                   const std::string& engine,
                                                   const std::vector<corpus::CleanDoc>& docs) {
    std::vector<sentiment::ScoredDoc> out;
    out.reserve(docs.size());
    if (engine == "compound") {
        const auto valence = sentiment::read_valence_lexicon(cfg.valence_lexicon);
        for (const auto& d : docs) {
            const auto cs = sentiment::compound_score(d.tokens, valence);
            out.push_back({d.id, cs.cs, cs.label});
        }
    } else if (engine == "difference") {
        const auto polarity =
            sentiment::read_polarity_lexicon(cfg.positive_lexicon, cfg.negative_lexicon);
        for (const auto& d : docs) {
            const auto diff = sentiment::score_difference(d.tokens, polarity);
            out.push_back({d.id, diff.diff, diff.label});
        }
    } else {
        throw ConfigError("unknown engine: " + engine);
    }
    return out;
}

std::vector<sentiment::AgreementReport> run_agreement(const PipelineConfig& cfg,
                                                      const std::vector<corpus::CleanDoc>& docs) {
    const auto gold = sentiment::read_gold_csv(cfg.gold_labels);
    const EnginePredictions preds = score_all_engines(cfg, docs);
    auto to_map = [](const std::vector<sentiment::ScoredDoc>& scored) {
        std::unordered_map<std::string, sentiment::SentimentLabel> m;
        for (const auto& s : scored) m[s.id] = s.label;
        return m;
    };
    return {sentiment::evaluate_agreement("compound", to_map(preds.compound), gold),
            sentiment::evaluate_agreement("difference", to_map(preds.difference), gold)};
}

void write_agreement_csv(const std::filesystem::path& path,
                         const std::vector<sentiment::AgreementReport>& reports,
                         const std::string& selected) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "engine,n_gold_used,n_matches,agreement,selected\n";
    char buf[16];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%.2f", r.agreement);
        out << r.engine << ',' << r.n_gold_used << ',' << r.n_matches << ',' << buf << ','
            << (r.engine == selected ? 1 : 0) << '\n';
    }
}

std::size_t resolved_topic_count(const PipelineConfig& cfg, const RunManifest& manifest) {
    if (cfg.sweep && manifest.json().contains("selected_topic_count")) {
        return manifest.json()["selected_topic_count"].get<std::size_t>();
    }
    return cfg.lda_topics;
}

topics::LdaConfig lda_config(const PipelineConfig& cfg, std::size_t topic_count) {
    topics::LdaConfig lda;
    lda.topic_count = topic_count;
    lda.alpha = cfg.lda_alpha;
    lda.beta = cfg.lda_beta;
    lda.iterations = cfg.lda_iterations;
    lda.seed = cfg.seed;
    return lda;
}

// Labels aligned with the model's document order.
std::vector<sentiment::SentimentLabel> aligned_labels(
    const std::vector<std::string>& doc_ids,
    const std::unordered_map<std::string, sentiment::SentimentLabel>& by_id) {
    std::vector<sentiment::SentimentLabel> labels;
    labels.reserve(doc_ids.size());
    for (const auto& id : doc_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw DataError("document has no sentiment label: " + id);
        labels.push_back(it->second);
    }
    return labels;
}

}  // namespace

void stage_ingest(const PipelineConfig& cfg, RunManifest& manifest) {
    cfg.validate_for_ingest();
    manifest.stage_started("ingest");

    const auto posts = corpus::read_posts_jsonl(cfg.input);
    manifest.json()["input_sha256"] = sha256_file_hex(cfg.input);
    manifest.json()["counts"]["raw_posts"] = posts.size();

    const corpus::CleanOptions opts = clean_options(cfg);
    std::vector<corpus::CleanDoc> docs;
    docs.reserve(posts.size());
    for (const auto& p : posts) {
        corpus::CleanDoc d;
        d.id = p.id;
        d.timestamp = p.timestamp;
        d.author_id = p.author_id;
        d.tokens = corpus::tokenize(corpus::clean_text(p.text, opts), {});
        docs.push_back(std::move(d));
    }
    corpus::FilterStats fstats;
    const auto filtered = corpus::filter_corpus(docs, opts, &fstats);

    const auto stopwords = corpus::read_term_file(cfg.stopwords);
    std::vector<corpus::CleanDoc> clean_kept, lda_kept;
    std::size_t dropped_empty = 0;
    for (const auto& d : filtered) {
        corpus::CleanDoc lda_doc = d;
        lda_doc.tokens = corpus::remove_stopwords(d.tokens, stopwords);
        if (lda_doc.tokens.empty()) {
            ++dropped_empty;  // doc has no content words; unusable for topics
            continue;
        }
        clean_kept.push_back(d);
        lda_kept.push_back(std::move(lda_doc));
    }
    if (lda_kept.empty()) throw DataError("ingest: no documents survive cleaning and filtering");
    const auto vocab = corpus::build_vocabulary(lda_kept);

    corpus::write_clean_jsonl(cfg.out_dir / "corpus_clean.jsonl", clean_kept);
    corpus::write_clean_jsonl(cfg.out_dir / "corpus_lda.jsonl", lda_kept);
    corpus::write_vocabulary_csv(cfg.out_dir / "vocabulary.csv", vocab);

    auto& counts = manifest.json()["counts"];
    counts["dropped_duplicate"] = fstats.dropped_duplicate;
    counts["dropped_short"] = fstats.dropped_short;
    counts["dropped_empty_after_stopwords"] = dropped_empty;
    counts["documents"] = clean_kept.size();
    counts["vocabulary_terms"] = vocab.size();
    counts["lda_tokens"] = vocab.total_tokens();
    manifest.record_output(cfg.out_dir / "corpus_clean.jsonl");
    manifest.record_output(cfg.out_dir / "corpus_lda.jsonl");
    manifest.record_output(cfg.out_dir / "vocabulary.csv");
    manifest.stage_completed("ingest");
}

void stage_agree(const PipelineConfig& cfg, RunManifest& manifest) {
    cfg.validate_for_sentiment();
    if (cfg.gold_labels.empty()) throw ConfigError("agree: gold_labels file is required");
    manifest.stage_started("agree");
    const auto docs = load_clean(cfg);
    const auto reports = run_agreement(cfg, docs);
    const std::string selected = sentiment::select_engine(reports);
    write_agreement_csv(cfg.out_dir / "agreement.csv", reports, selected);
    auto& j = manifest.json();
    j["agreement"] = nlohmann::json::object();
    for (const auto& r : reports) {
        j["agreement"][r.engine] = {{"n_gold_used", r.n_gold_used},
                                    {"n_matches", r.n_matches},
                                    {"agreement", r.agreement}};
    }
    j["selected_engine"] = selected;
    manifest.record_output(cfg.out_dir / "agreement.csv");
    manifest.stage_completed("agree");
}

void stage_sentiment(const PipelineConfig& cfg, RunManifest& manifest) {
    cfg.validate_for_sentiment();
    manifest.stage_started("sentiment");
    const auto docs = load_clean(cfg);

    std::string engine = cfg.engine;
    if (engine == "auto") {
        if (cfg.gold_labels.empty()) {
            engine = "compound";  // no gold labels: fall back to the stronger default
            manifest.json()["notes"]["engine_auto"] =
                "auto requested without gold labels; defaulted to compound";
        } else {
            const auto reports = run_agreement(cfg, docs);
            engine = sentiment::select_engine(reports);
            write_agreement_csv(cfg.out_dir / "agreement.csv", reports, engine);
            auto& j = manifest.json();
            for (const auto& r : reports) {
                j["agreement"][r.engine] = {{"n_gold_used", r.n_gold_used},
                                            {"n_matches", r.n_matches},
                                            {"agreement", r.agreement}};
            }
            manifest.record_output(cfg.out_dir / "agreement.csv");
        }
    }
    const auto scored = score_one_engine(cfg, engine, docs);
    sentiment::write_sentiment_csv(cfg.out_dir / "sentiment.csv", engine, scored);
    manifest.json()["engine_used"] = engine;
    manifest.json()["notes"]["sentiment_input"] =
        "classification runs on cleaned tokens before stop-word removal";
    manifest.record_output(cfg.out_dir / "sentiment.csv");
    manifest.stage_completed("sentiment");
}

void stage_sweep(const PipelineConfig& cfg, RunManifest& manifest) {
    manifest.stage_started("sweep");
    const auto docs = load_lda(cfg);
    const auto vocab = corpus::build_vocabulary(docs);
    topics::SweepOptions opts;
    opts.t_min = cfg.sweep_min;
    opts.t_max = cfg.sweep_max;
    opts.top_n = cfg.sweep_top_n;
    opts.sweep_iterations = cfg.sweep_iterations;
    opts.coherence.window = cfg.coherence_window;
    opts.threads = cfg.threads;
    const auto sweep = topics::select_topic_count(docs, vocab, lda_config(cfg, cfg.lda_topics), opts);
    topics::write_sweep_csv(cfg.out_dir / "sweep.csv", sweep);
    manifest.json()["selected_topic_count"] = sweep.selected;
    manifest.record_output(cfg.out_dir / "sweep.csv");
    manifest.stage_completed("sweep");
}

void stage_fit(const PipelineConfig& cfg, RunManifest& manifest) {
    manifest.stage_started("fit");
    const auto docs = load_lda(cfg);
    const auto vocab = corpus::build_vocabulary(docs);
    const std::size_t topic_count = resolved_topic_count(cfg, manifest);
    const topics::LdaConfig lda = lda_config(cfg, topic_count);
    const auto model = topics::fit_lda(docs, vocab, lda);
    topics::write_model_dir(cfg.out_dir / "model", model, vocab);
    topics::write_top_words_csv(cfg.out_dir / "topwords.csv", model, vocab,
                                std::min(cfg.top_words_n, vocab.size()));
    auto& j = manifest.json();
    j["fit"] = {{"topic_count", topic_count},
                {"iterations", lda.iterations},
                {"seed", lda.seed},
                {"final_log_likelihood", model.log_likelihood_trace.back()}};

    if (cfg.robustness_runs >= 2) {
        const auto rep = topics::robustness_check(docs, vocab, lda, cfg.robustness_runs,
                                                  cfg.robustness_threshold, cfg.threads);
        std::ofstream out(cfg.out_dir / "robustness.csv");
        out << "seed,final_log_likelihood\n";
        char buf[40];
        for (std::size_t i = 0; i < rep.seeds.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.6f", rep.final_log_likelihoods[i]);
            out << rep.seeds[i] << ',' << buf << '\n';
        }
        out.close();
        j["robustness"] = {{"mean", rep.mean},
                           {"stddev", rep.stddev},
                           {"cv", rep.cv},
                           {"threshold", rep.threshold},
                           {"pass", rep.pass}};
        manifest.record_output(cfg.out_dir / "robustness.csv");
    }
    manifest.record_output(cfg.out_dir / "model" / "phi.csv");
    manifest.record_output(cfg.out_dir / "model" / "theta.csv");
    manifest.record_output(cfg.out_dir / "model" / "assignments.csv");
    manifest.record_output(cfg.out_dir / "topwords.csv");
    manifest.stage_completed("fit");
}

void write_label_template(const PipelineConfig& cfg, RunManifest& manifest) {
    const auto art = topics::read_model_dir(cfg.out_dir / "model");
    const auto labels = topics::default_topic_labels(art.topic_count);
    topics::write_topic_labels_csv(cfg.out_dir / "topic_labels_template.csv", labels);
    manifest.record_output(cfg.out_dir / "topic_labels_template.csv");
    manifest.save();
}

void stage_compare(const PipelineConfig& cfg, RunManifest& manifest) {
    manifest.stage_started("compare");
    const auto art = topics::read_model_dir(cfg.out_dir / "model");
    const auto labels_by_id = load_labels(cfg);
    const auto labels = aligned_labels(art.doc_ids, labels_by_id);

    const auto label_file = load_topic_labels(cfg, art.topic_count);
    std::vector<std::string> warnings;
    const auto retained = topics::apply_topic_labels(art.topic_count, label_file, &warnings);
    if (retained.empty()) {
        throw DataError("compare: all topics were excluded by the label file");
    }
    manifest.json()["retained_topics"] = retained;

    stats::CompareOptions opts;
    opts.strata = cfg.strat_sizes;
    opts.seed = cfg.seed;
    opts.repeats = cfg.strat_repeats;
    opts.round_alpha = cfg.round_alpha;
    const auto rows = stats::compare_all_topics(art.theta, labels, retained, opts);

    const auto names = label_names(label_file, art.topic_count);
    stats::write_comparison_csv(cfg.out_dir / "comparison.csv", rows, names);
    stats::write_comparison_detail_csv(cfg.out_dir / "comparison_detail.csv", rows);
    stats::write_comparison_strata_csv(cfg.out_dir / "comparison_strata.csv", rows);
    stats::write_comparison_json(cfg.out_dir / "comparison.json", rows, names);
    manifest.record_output(cfg.out_dir / "comparison.csv");
    manifest.record_output(cfg.out_dir / "comparison_detail.csv");
    manifest.record_output(cfg.out_dir / "comparison_strata.csv");
    manifest.record_output(cfg.out_dir / "comparison.json");
    manifest.stage_completed("compare");
}

void stage_report(const PipelineConfig& cfg, RunManifest& manifest) {
    manifest.stage_started("report");
    const auto docs = load_clean(cfg);
    const auto labels_by_id = load_labels(cfg);
    const auto trend = report::monthly_sentiment_rates(docs, labels_by_id);

    const auto art = topics::read_model_dir(cfg.out_dir / "model");
    const auto label_file = load_topic_labels(cfg, art.topic_count);
    const auto retained = topics::apply_topic_labels(art.topic_count, label_file, nullptr);
    if (retained.empty()) throw DataError("report: all topics were excluded by the label file");
    const auto names = label_names(label_file, art.topic_count);
    const auto labels = aligned_labels(art.doc_ids, labels_by_id);

    const auto means = report::average_topic_weight(art.theta, retained);
    const auto top = report::top_k_topics_by_group(art.theta, labels, retained, cfg.top_k);

    report::write_trend_csv(cfg.out_dir / "trend.csv", trend);
    report::write_topic_means_csv(cfg.out_dir / "topic_means.csv", means, names);
    report::write_top_topics_csv(cfg.out_dir / "top_topics.csv", top, names);
    report::write_trend_svg(cfg.out_dir / "trend.svg", trend);
    report::write_topic_means_svg(cfg.out_dir / "topic_weights.svg", means);

    // conservation check: stats documents == labeled documents == filtered docs
    const auto& counts = manifest.json()["counts"];
    if (counts.contains("documents") &&
        counts["documents"].get<std::size_t>() != art.theta.size()) {
        throw DataError("report: document conservation violated between stages");
    }
    manifest.record_output(cfg.out_dir / "trend.csv");
    manifest.record_output(cfg.out_dir / "topic_means.csv");
    manifest.record_output(cfg.out_dir / "top_topics.csv");
    manifest.record_output(cfg.out_dir / "trend.svg");
    manifest.record_output(cfg.out_dir / "topic_weights.svg");
    manifest.stage_completed("report");
}

RunManifest run_pipeline(const PipelineConfig& cfg) {
    // All config problems must surface before any stage writes output.
    cfg.validate_for_ingest();
    cfg.validate_for_sentiment();
    if (!cfg.topic_labels.empty()) require_file(cfg.topic_labels, "topic_labels");

    RunManifest manifest = RunManifest::load_or_create(cfg.out_dir, cfg);
    std::string current = "ingest";
    try {
        stage_ingest(cfg, manifest);
        current = "sentiment";
        stage_sentiment(cfg, manifest);
        if (cfg.sweep) {
            current = "sweep";
            stage_sweep(cfg, manifest);
        }
        current = "fit";
        stage_fit(cfg, manifest);
        current = "compare";
        stage_compare(cfg, manifest);
        current = "report";
        stage_report(cfg, manifest);
        manifest.mark_complete();
    } catch (const std::exception& e) {
        manifest.mark_partial(current, e.what());
        throw;
    }
    return manifest;
}

}  // namespace sentopics::pipeline
