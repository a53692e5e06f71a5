#include "sentopics/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "sentopics/errors.hpp"
#include "sentopics/parallel.hpp"

namespace sentopics::topics {

namespace {

// Window counts for the tracked terms: singles[i] = windows containing term i,
// joints[i][j] (i <= j) = windows containing both.
struct WindowCounts {
    std::vector<std::uint64_t> singles;
    std::vector<std::vector<std::uint64_t>> joints;
    std::uint64_t total_windows = 0;
};

WindowCounts count_windows(const std::vector<corpus::CleanDoc>& reference,
                           const std::unordered_map<std::string, std::size_t>& tracked,
                           std::size_t window) {
    const std::size_t n = tracked.size();
    WindowCounts counts;
    counts.singles.assign(n, 0);
    counts.joints.assign(n, std::vector<std::uint64_t>(n, 0));

    std::vector<int> in_window(n, 0);
    std::vector<std::size_t> present;
    for (const auto& doc : reference) {
        std::vector<int> ids(doc.tokens.size(), -1);
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            auto it = tracked.find(doc.tokens[i]);
            if (it != tracked.end()) ids[i] = static_cast<int>(it->second);
        }
        const std::size_t len = doc.tokens.size();
        const std::size_t n_windows = len <= window ? 1 : len - window + 1;
        for (std::size_t start = 0; start < n_windows; ++start) {
            const std::size_t end = std::min(start + window, len);
            present.clear();
            for (std::size_t i = start; i < end; ++i) {
                if (ids[i] >= 0 && !in_window[static_cast<std::size_t>(ids[i])]) {
                    in_window[static_cast<std::size_t>(ids[i])] = 1;
                    present.push_back(static_cast<std::size_t>(ids[i]));
                }
            }
            for (std::size_t a = 0; a < present.size(); ++a) {
                counts.singles[present[a]] += 1;
                for (std::size_t b = a; b < present.size(); ++b) {
                    const auto lo = std::min(present[a], present[b]);
                    const auto hi = std::max(present[a], present[b]);
                    counts.joints[lo][hi] += 1;
                }
            }
            for (std::size_t id : present) in_window[id] = 0;
        }
        counts.total_windows += n_windows;
    }
    return counts;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

CoherenceResult coherence_cv(const std::vector<std::vector<std::string>>& top_words_per_topic,
                             const std::vector<corpus::CleanDoc>& reference,
                             const CoherenceOptions& opts) {
    if (reference.empty()) throw DataError("coherence_cv: empty reference corpus");
    for (const auto& words : top_words_per_topic) {
        if (words.size() < 2) throw DataError("coherence_cv: topics need at least 2 top words");
    }

    std::unordered_map<std::string, std::size_t> tracked;
    for (const auto& words : top_words_per_topic) {
        for (const auto& w : words) tracked.emplace(w, tracked.size());
    }
    const WindowCounts counts = count_windows(reference, tracked, opts.window);
    const auto total = static_cast<double>(counts.total_windows);
    for (const auto& [term, id] : tracked) {
        if (counts.singles[id] == 0) {
            throw DataError("coherence_cv: top word absent from reference corpus: " + term);
        }
    }

    const double eps = opts.epsilon;
    auto npmi = [&](std::size_t a, std::size_t b) {
        const auto lo = std::min(a, b);
        const auto hi = std::max(a, b);
        const double p_joint = static_cast<double>(counts.joints[lo][hi]) / total;
        const double p_a = static_cast<double>(counts.singles[a]) / total;
        const double p_b = static_cast<double>(counts.singles[b]) / total;
        return std::log((p_joint + eps) / (p_a * p_b)) / -std::log(p_joint + eps);
    };

    CoherenceResult result;
    result.per_topic.reserve(top_words_per_topic.size());
    for (const auto& words : top_words_per_topic) {
        const std::size_t n = words.size();
        std::vector<std::size_t> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = tracked.at(words[i]);

        // Context vector of each top word against all n of them.
        std::vector<std::vector<double>> vectors(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) vectors[i][j] = npmi(ids[i], ids[j]);
        }
        std::vector<double> sum(n, 0.0);
        for (const auto& v : vectors) {
            for (std::size_t j = 0; j < n; ++j) sum[j] += v[j];
        }
        double score = 0.0;
        for (const auto& v : vectors) score += cosine(v, sum);
        result.per_topic.push_back(score / static_cast<double>(n));
    }
    double mean = 0.0;
    for (double s : result.per_topic) mean += s;
    result.mean = top_words_per_topic.empty() ? 0.0 : mean / static_cast<double>(result.per_topic.size());
    return result;
}

CoherenceSweep select_topic_count(const std::vector<corpus::CleanDoc>& docs,
                                  const corpus::Vocabulary& vocab, const LdaConfig& cfg_template,
                                  const SweepOptions& opts) {
    if (opts.t_min < 1 || opts.t_min > opts.t_max) {
        throw ConfigError("select_topic_count: bad topic range");
    }
    if (opts.t_max > vocab.size()) {
        throw ConfigError("select_topic_count: range exceeds vocabulary size");
    }
    const std::size_t n_candidates = opts.t_max - opts.t_min + 1;
    std::vector<double> means(n_candidates);
    std::vector<std::vector<double>> per_topic(n_candidates);

    parallel_for(n_candidates, opts.threads, [&](std::size_t i) {
        const std::size_t t = opts.t_min + i;
        LdaConfig cfg = cfg_template;
        cfg.topic_count = t;
        cfg.iterations = opts.sweep_iterations;
        cfg.seed = cfg_template.seed + t;
        if (cfg_template.alpha <= 0.0) cfg.alpha = 0.0;  // keep the 5/T rule per candidate
        const TopicModel model = fit_lda(docs, vocab, cfg);
        const std::size_t top_n = std::min(opts.top_n, vocab.size());
        const CoherenceResult res = coherence_cv(top_words(model, vocab, top_n), docs, opts.coherence);
        means[i] = res.mean;
        per_topic[i] = res.per_topic;
    });

    CoherenceSweep sweep;
    for (std::size_t i = 0; i < n_candidates; ++i) {
        const std::size_t t = opts.t_min + i;
        sweep.mean_by_t[t] = means[i];
        sweep.per_topic_by_t[t] = per_topic[i];
    }
    sweep.selected = opts.t_min;
    for (const auto& [t, mean] : sweep.mean_by_t) {
        if (mean > sweep.mean_by_t.at(sweep.selected)) sweep.selected = t;
    }
    return sweep;
}

void write_sweep_csv(const std::filesystem::path& path, const CoherenceSweep& sweep) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic_count,mean_coherence,selected\n";
    char buf[40];
    for (const auto& [t, mean] : sweep.mean_by_t) {
        std::snprintf(buf, sizeof(buf), "%.6g", mean);
        out << t << ',' << buf << ',' << (t == sweep.selected ? 1 : 0) << '\n';
    }
}

}  // namespace sentopics::topics
