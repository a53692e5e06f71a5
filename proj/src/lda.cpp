#include "sentopics/lda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "sentopics/errors.hpp"
#include "sentopics/parallel.hpp"
#include "sentopics/rng.hpp"

namespace sentopics::topics {

void LdaConfig::validate() const {
    if (topic_count < 1) throw ConfigError("lda: topic_count must be >= 1");
    if (iterations < 1) throw ConfigError("lda: iterations must be >= 1");
    if (effective_alpha() <= 0.0 || beta <= 0.0) {
        throw ConfigError("lda: alpha and beta must be positive");
    }
}

std::vector<std::vector<double>> TopicModel::phi() const {
    std::vector<std::vector<double>> out(topic_count, std::vector<double>(vocab_size));
    const double vbeta = static_cast<double>(vocab_size) * beta;
    for (std::size_t k = 0; k < topic_count; ++k) {
        const double denom = static_cast<double>(topic_total[k]) + vbeta;
        for (std::size_t w = 0; w < vocab_size; ++w) {
            out[k][w] = (static_cast<double>(n_kw(k, w)) + beta) / denom;
        }
    }
    return out;
}

std::vector<std::vector<double>> TopicModel::theta() const {
    std::vector<std::vector<double>> out(docs.size(), std::vector<double>(topic_count));
    const double talpha = static_cast<double>(topic_count) * alpha;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const double denom = static_cast<double>(docs[d].size()) + talpha;
        for (std::size_t k = 0; k < topic_count; ++k) {
            out[d][k] = (static_cast<double>(doc_topic[d][k]) + alpha) / denom;
        }
    }
    return out;
}

TopicModel fit_lda(const std::vector<corpus::CleanDoc>& docs, const corpus::Vocabulary& vocab,
                   const LdaConfig& cfg) {
    cfg.validate();
    if (docs.empty()) throw DataError("fit_lda: empty corpus");

    TopicModel m;
    m.topic_count = cfg.topic_count;
    m.vocab_size = vocab.size();
    m.alpha = cfg.effective_alpha();
    m.beta = cfg.beta;
    m.seed = cfg.seed;
    m.iterations = cfg.iterations;

    m.doc_ids.reserve(docs.size());
    m.docs.reserve(docs.size());
    for (const auto& doc : docs) {
        if (doc.tokens.empty()) throw DataError("fit_lda: document has no tokens: " + doc.id);
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.tokens.size());
        for (const auto& tok : doc.tokens) {
            auto idx = vocab.find(tok);
            if (!idx) throw DataError("fit_lda: token not in vocabulary: " + tok);
            ids.push_back(static_cast<std::uint32_t>(*idx));
        }
        m.doc_ids.push_back(doc.id);
        m.docs.push_back(std::move(ids));
    }

    const std::size_t T = m.topic_count;
    const std::size_t V = m.vocab_size;
    m.doc_topic.assign(m.docs.size(), std::vector<std::uint32_t>(T, 0));
    m.topic_word.assign(T * V, 0);
    m.topic_total.assign(T, 0);
    m.assignments.resize(m.docs.size());

    Rng rng(cfg.seed);
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        m.assignments[d].resize(m.docs[d].size());
        for (std::size_t i = 0; i < m.docs[d].size(); ++i) {
            const auto k = static_cast<std::uint32_t>(rng.below(T));
            m.assignments[d][i] = k;
            ++m.doc_topic[d][k];
            ++m.n_kw(k, m.docs[d][i]);
            ++m.topic_total[k];
        }
    }

    const double alpha = m.alpha;
    const double beta = m.beta;
    const double vbeta = static_cast<double>(V) * beta;
    std::vector<double> cumulative(T);
    m.log_likelihood_trace.reserve(cfg.iterations);

    for (std::size_t sweep = 0; sweep < cfg.iterations; ++sweep) {
        for (std::size_t d = 0; d < m.docs.size(); ++d) {
            auto& z = m.assignments[d];
            auto& ndk = m.doc_topic[d];
            const auto& words = m.docs[d];
            for (std::size_t i = 0; i < words.size(); ++i) {
                const std::uint32_t w = words[i];
                const std::uint32_t old_k = z[i];
                --ndk[old_k];
                --m.n_kw(old_k, w);
                --m.topic_total[old_k];

                // p(z=k) proportional to (n_dk + alpha)(n_kw + beta)/(n_k + V beta);
                // the document-length factor is constant and drops out.
                double total = 0.0;
                for (std::size_t k = 0; k < T; ++k) {
                    const double p = (static_cast<double>(ndk[k]) + alpha) *
                                     (static_cast<double>(m.topic_word[k * V + w]) + beta) /
                                     (static_cast<double>(m.topic_total[k]) + vbeta);
                    total += p;
                    cumulative[k] = total;
                }
                const double u = rng.uniform01() * total;
                std::size_t new_k = 0;
                while (new_k + 1 < T && cumulative[new_k] < u) ++new_k;

                z[i] = static_cast<std::uint32_t>(new_k);
                ++ndk[new_k];
                ++m.n_kw(static_cast<std::uint32_t>(new_k), w);
                ++m.topic_total[new_k];
            }
        }
        m.log_likelihood_trace.push_back(log_likelihood(m));
    }
    return m;
}

double log_likelihood(const TopicModel& m) {
    const double alpha = m.alpha;
    const double beta = m.beta;
    const auto T = static_cast<double>(m.topic_count);
    const auto V = static_cast<double>(m.vocab_size);

    // Dirichlet-multinomial closed form; zero counts contribute nothing.
    double ll = 0.0;
    const double lg_alpha = std::lgamma(alpha);
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        ll += std::lgamma(T * alpha) - std::lgamma(static_cast<double>(m.docs[d].size()) + T * alpha);
        for (std::size_t k = 0; k < m.topic_count; ++k) {
            const auto n = m.doc_topic[d][k];
            if (n > 0) ll += std::lgamma(static_cast<double>(n) + alpha) - lg_alpha;
        }
    }
    const double lg_beta = std::lgamma(beta);
    for (std::size_t k = 0; k < m.topic_count; ++k) {
        ll += std::lgamma(V * beta) -
              std::lgamma(static_cast<double>(m.topic_total[k]) + V * beta);
        const std::uint32_t* row = m.topic_word.data() + k * m.vocab_size;
        for (std::size_t w = 0; w < m.vocab_size; ++w) {
            if (row[w] > 0) ll += std::lgamma(static_cast<double>(row[w]) + beta) - lg_beta;
        }
    }
    return ll;
}

RobustnessReport robustness_check(const std::vector<corpus::CleanDoc>& docs,
                                  const corpus::Vocabulary& vocab, const LdaConfig& cfg,
                                  int n_runs, double cv_threshold, int threads,
                                  const std::vector<std::uint64_t>* seed_override) {
    if (n_runs < 2) throw ConfigError("robustness_check: n_runs must be >= 2");
    RobustnessReport report;
    report.threshold = cv_threshold;
    if (seed_override) {
        report.seeds = *seed_override;
    } else {
        for (int i = 0; i < n_runs; ++i) report.seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
    }
    report.final_log_likelihoods.resize(report.seeds.size());
    parallel_for(report.seeds.size(), threads, [&](std::size_t i) {
        LdaConfig run_cfg = cfg;
        run_cfg.seed = report.seeds[i];
        const TopicModel model = fit_lda(docs, vocab, run_cfg);
        report.final_log_likelihoods[i] = model.log_likelihood_trace.back();
    });

    const auto n = static_cast<double>(report.final_log_likelihoods.size());
    report.mean = std::accumulate(report.final_log_likelihoods.begin(),
                                  report.final_log_likelihoods.end(), 0.0) /
                  n;
    double ss = 0.0;
    for (double v : report.final_log_likelihoods) ss += (v - report.mean) * (v - report.mean);
    report.stddev = std::sqrt(ss / (n - 1.0));
    report.cv = report.mean == 0.0 ? 0.0 : report.stddev / std::fabs(report.mean);
    report.pass = report.cv <= cv_threshold;
    return report;
}

std::vector<std::vector<std::string>> top_words(const TopicModel& model,
                                                const corpus::Vocabulary& vocab, std::size_t n) {
    if (n > model.vocab_size) throw DataError("top_words: n exceeds vocabulary size");
    const auto phi = model.phi();
    std::vector<std::vector<std::string>> out(model.topic_count);
    std::vector<std::size_t> order(model.vocab_size);
    for (std::size_t k = 0; k < model.topic_count; ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
                          order.end(), [&](std::size_t a, std::size_t b) {
                              if (phi[k][a] != phi[k][b]) return phi[k][a] > phi[k][b];
                              return a < b;
                          });
        out[k].reserve(n);
        for (std::size_t i = 0; i < n; ++i) out[k].push_back(vocab.term(order[i]));
    }
    return out;
}

std::vector<std::size_t> apply_topic_labels(std::size_t topic_count, const TopicLabelFile& labels,
                                            std::vector<std::string>* warnings) {
    std::vector<int> seen(topic_count, 0);
    for (const auto& e : labels.entries) {
        if (e.topic >= topic_count) {
            throw DataError("topic label references unknown topic " + std::to_string(e.topic));
        }
        ++seen[e.topic];
    }
    for (std::size_t k = 0; k < topic_count; ++k) {
        if (seen[k] == 0) throw DataError("missing label for topic " + std::to_string(k));
        if (seen[k] > 1) throw DataError("duplicate label for topic " + std::to_string(k));
    }
    std::vector<std::size_t> retained;
    for (const auto& e : labels.entries) {
        if (e.q1_meaningful && e.q2_relevant) retained.push_back(e.topic);
    }
    std::sort(retained.begin(), retained.end());
    if (retained.empty() && warnings) {
        warnings->push_back("all topics excluded by the label file; downstream statistics cannot run");
    }
    return retained;
}

namespace {

bool parse_bool(const std::string& s) {
    std::string t;
    for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "1" || t == "true" || t == "yes" || t == "y") return true;
    if (t == "0" || t == "false" || t == "no" || t == "n") return false;
    throw DataError("unparseable boolean: " + s);
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

TopicLabelFile read_topic_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open topic label file: " + path.string());
    TopicLabelFile out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (first && t.rfind("topic,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::stringstream ss(t);
        std::string topic, label, q1, q2;
        if (!std::getline(ss, topic, ',') || !std::getline(ss, label, ',') ||
            !std::getline(ss, q1, ',') || !std::getline(ss, q2)) {
            throw DataError("topic label row needs topic,label,q1,q2: " + t);
        }
        TopicLabelEntry e;
        e.topic = static_cast<std::size_t>(std::stoul(strip(topic)));
        e.label = strip(label);
        e.q1_meaningful = parse_bool(strip(q1));
        e.q2_relevant = parse_bool(strip(q2));
        out.entries.push_back(std::move(e));
    }
    return out;
}

void write_topic_labels_csv(const std::filesystem::path& path, const TopicLabelFile& labels) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic,label,q1,q2\n";
    for (const auto& e : labels.entries) {
        out << e.topic << ',' << e.label << ',' << (e.q1_meaningful ? "yes" : "no") << ','
            << (e.q2_relevant ? "yes" : "no") << '\n';
    }
}

TopicLabelFile default_topic_labels(std::size_t topic_count) {
    TopicLabelFile out;
    for (std::size_t k = 0; k < topic_count; ++k) {
        out.entries.push_back({k, "T" + std::to_string(k + 1), true, true});
    }
    return out;
}

namespace {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_model_dir(const std::filesystem::path& dir, const TopicModel& model,
                     const corpus::Vocabulary& vocab) {
    std::filesystem::create_directories(dir);
    const auto phi = model.phi();
    const auto theta = model.theta();

    {
        std::ofstream out(dir / "phi.csv");
        if (!out) throw ConfigError("cannot write phi.csv in " + dir.string());
        out << "topic";
        for (std::size_t w = 0; w < model.vocab_size; ++w) out << ',' << vocab.term(w);
        out << '\n';
        for (std::size_t k = 0; k < model.topic_count; ++k) {
            out << k;
            for (std::size_t w = 0; w < model.vocab_size; ++w) out << ',' << fmt_full(phi[k][w]);
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "theta.csv");
        if (!out) throw ConfigError("cannot write theta.csv in " + dir.string());
        out << "id";
        for (std::size_t k = 0; k < model.topic_count; ++k) out << ",topic_" << k;
        out << '\n';
        for (std::size_t d = 0; d < model.docs.size(); ++d) {
            out << model.doc_ids[d];
            for (std::size_t k = 0; k < model.topic_count; ++k) out << ',' << fmt_full(theta[d][k]);
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "assignments.csv");
        if (!out) throw ConfigError("cannot write assignments.csv in " + dir.string());
        out << "doc,position,word,topic\n";
        for (std::size_t d = 0; d < model.docs.size(); ++d) {
            for (std::size_t i = 0; i < model.docs[d].size(); ++i) {
                out << model.doc_ids[d] << ',' << i << ',' << vocab.term(model.docs[d][i]) << ','
                    << model.assignments[d][i] << '\n';
            }
        }
    }
    {
        nlohmann::json j;
        j["topic_count"] = model.topic_count;
        j["vocab_size"] = model.vocab_size;
        j["doc_count"] = model.docs.size();
        j["alpha"] = model.alpha;
        j["beta"] = model.beta;
        j["iterations"] = model.iterations;
        j["seed"] = model.seed;
        j["final_log_likelihood"] =
            model.log_likelihood_trace.empty() ? 0.0 : model.log_likelihood_trace.back();
        j["log_likelihood_trace"] = model.log_likelihood_trace;
        std::ofstream out(dir / "metadata.json");
        if (!out) throw ConfigError("cannot write metadata.json in " + dir.string());
        out << j.dump(2) << '\n';
    }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

ModelArtifacts read_model_dir(const std::filesystem::path& dir) {
    ModelArtifacts art;
    {
        std::ifstream in(dir / "metadata.json");
        if (!in) throw ConfigError("cannot open model metadata in " + dir.string());
        nlohmann::json j;
        in >> j;
        art.topic_count = j.at("topic_count").get<std::size_t>();
        art.final_log_likelihood = j.at("final_log_likelihood").get<double>();
        art.seed = j.at("seed").get<std::uint64_t>();
    }
    {
        std::ifstream in(dir / "theta.csv");
        if (!in) throw ConfigError("cannot open theta.csv in " + dir.string());
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto fields = split_commas(line);
            if (fields.size() != art.topic_count + 1) {
                throw DataError("theta.csv row has wrong arity: " + line);
            }
            art.doc_ids.push_back(fields[0]);
            std::vector<double> row(art.topic_count);
            for (std::size_t k = 0; k < art.topic_count; ++k) row[k] = std::stod(fields[k + 1]);
            art.theta.push_back(std::move(row));
        }
    }
    {
        std::ifstream in(dir / "phi.csv");
        if (!in) throw ConfigError("cannot open phi.csv in " + dir.string());
        std::string line;
        std::getline(in, line);
        auto header = split_commas(line);
        art.vocab_terms.assign(header.begin() + 1, header.end());
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto fields = split_commas(line);
            std::vector<double> row(fields.size() - 1);
            for (std::size_t w = 1; w < fields.size(); ++w) row[w - 1] = std::stod(fields[w]);
            art.phi.push_back(std::move(row));
        }
        if (art.phi.size() != art.topic_count) throw DataError("phi.csv row count mismatch");
    }
    return art;
}

void write_top_words_csv(const std::filesystem::path& path, const TopicModel& model,
                         const corpus::Vocabulary& vocab, std::size_t n) {
    const auto words = top_words(model, vocab, n);
    const auto phi = model.phi();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic,rank,term,probability\n";
    char buf[40];
    for (std::size_t k = 0; k < words.size(); ++k) {
        for (std::size_t r = 0; r < words[k].size(); ++r) {
            const std::size_t w = vocab.index(words[k][r]);
            std::snprintf(buf, sizeof(buf), "%.6g", phi[k][w]);
            out << k << ',' << r + 1 << ',' << words[k][r] << ',' << buf << '\n';
        }
    }
}

}  // namespace sentopics::topics
