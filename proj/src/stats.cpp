#include "sentopics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sentopics/errors.hpp"
#include "sentopics/rng.hpp"

namespace sentopics::stats {

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // unbiased
    std::size_t n = 0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    m.n = v.size();
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m.n);
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.var = m.n > 1 ? ss / static_cast<double>(m.n - 1) : 0.0;
    return m;
}

}  // namespace

WelchResult welch_t_test(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || y.size() < 2) throw DataError("welch_t_test: need >= 2 values per group");
    const Moments mx = moments(x);
    const Moments my = moments(y);
    const double gx = mx.var / static_cast<double>(mx.n);
    const double gy = my.var / static_cast<double>(my.n);

    WelchResult r;
    if (gx + gy == 0.0) {
        r.degenerate = true;
        if (mx.mean == my.mean) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = mx.mean > my.mean ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        r.df = static_cast<double>(mx.n + my.n - 2);
        return r;
    }
    r.t = (mx.mean - my.mean) / std::sqrt(gx + gy);
    r.df = (gx + gy) * (gx + gy) /
           (gx * gx / static_cast<double>(mx.n - 1) + gy * gy / static_cast<double>(my.n - 1));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

double alpha_threshold(std::uint64_t n) {
    if (n == 0) throw DataError("alpha_threshold: N must be positive");
    return 0.05 / std::sqrt(static_cast<double>(n) / 100.0);
}

std::vector<double> fdr_adjust(const std::vector<double>& pvalues) {
    const std::size_t m = pvalues.size();
    for (double p : pvalues) {
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("fdr_adjust: p-value outside [0, 1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

    std::vector<double> adjusted(m);
    double running_min = 1.0;
    for (std::size_t rank = m; rank >= 1; --rank) {
        const std::size_t i = order[rank - 1];
        // factor first so the top rank multiplies by exactly 1.0
        const double q = pvalues[i] * (static_cast<double>(m) / static_cast<double>(rank));
        running_min = std::min(running_min, q);
        adjusted[i] = running_min;
    }
    return adjusted;
}

double cohens_d(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || y.size() < 2) throw DataError("cohens_d: need >= 2 values per group");
    const Moments mx = moments(x);
    const Moments my = moments(y);
    const double pooled_var =
        (static_cast<double>(mx.n - 1) * mx.var + static_cast<double>(my.n - 1) * my.var) /
        static_cast<double>(mx.n + my.n - 2);
    if (pooled_var <= 0.0) throw NumericalError("cohens_d: zero pooled variance");
    return std::fabs(mx.mean - my.mean) / std::sqrt(pooled_var);
}

EffectClass classify_effect(double d) {
    if (d >= 2.0) return EffectClass::Huge;
    if (d >= 1.2) return EffectClass::VeryLarge;
    if (d >= 0.8) return EffectClass::Large;
    if (d >= 0.5) return EffectClass::Medium;
    if (d >= 0.2) return EffectClass::Small;
    return EffectClass::VerySmall;
}

const char* effect_class_name(EffectClass c) {
    switch (c) {
        case EffectClass::VerySmall: return "Very Small";
        case EffectClass::Small: return "Small";
        case EffectClass::Medium: return "Medium";
        case EffectClass::Large: return "Large";
        case EffectClass::VeryLarge: return "Very Large";
        case EffectClass::Huge: return "Huge";
    }
    return "?";
}

std::string effect_class_key(EffectClass c) {
    std::string name = effect_class_name(c);
    for (char& ch : name) {
        if (ch == ' ') ch = '_';
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return name;
}

EffectSize stratified_effect_size(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                  int repeats) {
    if (repeats < 1) throw DataError("stratified_effect_size: repeats must be >= 1");
    EffectSize out;
    out.d_full = cohens_d(x, y);
    std::size_t size_index = 0;
    for (std::size_t s : sizes) {
        ++size_index;
        if (s < 2 || s > x.size() || s > y.size()) {
            out.warnings.push_back("stratum size " + std::to_string(s) +
                                   " exceeds group size, skipped");
            continue;
        }
        double sum_d = 0.0;
        int computed = 0;
        for (int r = 0; r < repeats; ++r) {
            Rng rng(mix_seed(seed, size_index * 1000003ULL + static_cast<std::uint64_t>(r)));
            std::vector<double> sx, sy;
            sx.reserve(s);
            sy.reserve(s);
            for (std::size_t i : rng.sample_without_replacement(x.size(), s)) sx.push_back(x[i]);
            for (std::size_t i : rng.sample_without_replacement(y.size(), s)) sy.push_back(y[i]);
            try {
                sum_d += cohens_d(sx, sy);
                ++computed;
            } catch (const NumericalError&) {
                out.warnings.push_back("stratum size " + std::to_string(s) +
                                       " draw had zero pooled variance, skipped");
            }
        }
        if (computed > 0) out.d_by_size[s] = sum_d / computed;
    }
    if (!out.d_by_size.empty()) {
        double sum = 0.0;
        for (const auto& [s, d] : out.d_by_size) sum += d;
        out.d_mean = sum / static_cast<double>(out.d_by_size.size());
    } else {
        out.d_mean = out.d_full;
        out.warnings.push_back("no stratum computable, d_mean falls back to full-sample d");
    }
    out.effect = classify_effect(out.d_mean);
    return out;
}

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::NegGreater: return "Neg > NonNeg";
        case Direction::NonNegGreater: return "Neg < NonNeg";
        case Direction::NS: return "NS";
    }
    return "?";
}

std::vector<TopicComparison> compare_all_topics(
    const std::vector<std::vector<double>>& theta,
    const std::vector<sentiment::SentimentLabel>& labels,
    const std::vector<std::size_t>& retained, const CompareOptions& opts) {
    if (theta.size() != labels.size()) {
        throw DataError("compare_all_topics: theta rows and labels differ in length");
    }
    if (retained.empty()) throw DataError("compare_all_topics: retained topic set is empty");
    const std::size_t n_docs = theta.size();
    double alpha = alpha_threshold(n_docs);
    if (opts.round_alpha) alpha = std::round(alpha * 1000.0) / 1000.0;

    std::vector<TopicComparison> rows(retained.size());
    std::vector<double> pvalues(retained.size(), 1.0);
    std::vector<bool> testable(retained.size(), true);
    auto split_groups = [&](std::size_t k, std::vector<double>& neg, std::vector<double>& nonneg) {
        for (std::size_t d = 0; d < n_docs; ++d) {
            if (k >= theta[d].size()) throw DataError("compare_all_topics: topic index out of range");
            (labels[d] == sentiment::SentimentLabel::Negative ? neg : nonneg)
                .push_back(theta[d][k]);
        }
    };
    for (std::size_t i = 0; i < retained.size(); ++i) {
        std::vector<double> neg, nonneg;
        split_groups(retained[i], neg, nonneg);
        TopicComparison& row = rows[i];
        row.test.topic = retained[i];
        row.test.alpha_used = alpha;
        if (neg.size() < 2 || nonneg.size() < 2) {
            row.test.warning = "one group has fewer than 2 documents; topic not testable";
            testable[i] = false;
            continue;
        }
        const WelchResult w = welch_t_test(neg, nonneg);
        row.test.t = w.t;
        row.test.df = w.df;
        row.test.p = w.p;
        row.test.degenerate = w.degenerate;
        if (w.degenerate) row.test.warning = "both group variances are zero";
        pvalues[i] = w.p;
    }

    const std::vector<double> adjusted = fdr_adjust(pvalues);
    for (std::size_t i = 0; i < retained.size(); ++i) {
        TopicComparison& row = rows[i];
        row.test.p_adj = adjusted[i];
        if (!testable[i] || row.test.p_adj > alpha) {
            row.test.direction = Direction::NS;
            continue;
        }
        std::vector<double> neg, nonneg;
        split_groups(retained[i], neg, nonneg);
        const double mean_neg =
            std::accumulate(neg.begin(), neg.end(), 0.0) / static_cast<double>(neg.size());
        const double mean_nonneg = std::accumulate(nonneg.begin(), nonneg.end(), 0.0) /
                                   static_cast<double>(nonneg.size());
        row.test.direction =
            mean_neg > mean_nonneg ? Direction::NegGreater : Direction::NonNegGreater;
        try {
            row.effect = stratified_effect_size(neg, nonneg, opts.strata,
                                                mix_seed(opts.seed, retained[i]), opts.repeats);
            row.effect.topic = retained[i];
            row.has_effect = true;
        } catch (const NumericalError& e) {
            row.test.warning = e.what();
        }
    }
    return rows;
}

}  // namespace sentopics::stats
