#include "sentopics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "sentopics/errors.hpp"

namespace sentopics::report {

namespace {

// Exact 2-decimal split of 100% between the two classes. Raw shares are
// rational (count/total); the leftover hundredth after flooring goes to the
// larger remainder, ties to the negative class.
void reconcile_rates(std::size_t negative, std::size_t total, MonthRow& row) {
    row.count = total;
    if (total == 0) {
        row.negative_centis = 0;
        row.non_negative_centis = 0;
        return;
    }
    const std::size_t non_negative = total - negative;
    const std::uint64_t neg_units = 10000ULL * negative;
    const std::uint64_t non_units = 10000ULL * non_negative;
    int neg_floor = static_cast<int>(neg_units / total);
    int non_floor = static_cast<int>(non_units / total);
    const std::uint64_t neg_rem = neg_units % total;
    const std::uint64_t non_rem = non_units % total;
    int leftover = 10000 - neg_floor - non_floor;
    while (leftover > 0) {
        if (neg_rem >= non_rem) {
            ++neg_floor;
        } else {
            ++non_floor;
        }
        --leftover;
    }
    row.negative_centis = neg_floor;
    row.non_negative_centis = non_floor;
}

std::string fmt_centis(int centis) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%d.%02d", centis / 100, centis % 100);
    return buf;
}

}  // namespace

TrendReport monthly_sentiment_rates(
    const std::vector<corpus::CleanDoc>& docs,
    const std::unordered_map<std::string, sentiment::SentimentLabel>& labels) {
    struct Bucket {
        std::size_t negative = 0;
        std::size_t total = 0;
    };
    std::map<std::string, Bucket> buckets;  // ordered -> ascending months
    std::size_t all_negative = 0;
    for (const auto& doc : docs) {
        auto it = labels.find(doc.id);
        if (it == labels.end()) throw DataError("unlabeled document: " + doc.id);
        Bucket& b = buckets[corpus::month_bucket(doc.timestamp)];
        ++b.total;
        if (it->second == sentiment::SentimentLabel::Negative) {
            ++b.negative;
            ++all_negative;
        }
    }
    TrendReport report;
    for (const auto& [month, bucket] : buckets) {
        MonthRow row;
        row.month = month;
        reconcile_rates(bucket.negative, bucket.total, row);
        report.months.push_back(row);
    }
    report.overall.month = "overall";
    reconcile_rates(all_negative, docs.size(), report.overall);
    return report;
}

std::vector<TopicMean> average_topic_weight(const std::vector<std::vector<double>>& theta,
                                            const std::vector<std::size_t>& retained) {
    std::vector<TopicMean> out;
    out.reserve(retained.size());
    for (std::size_t k : retained) {
        double sum = 0.0;
        for (const auto& row : theta) {
            if (k >= row.size()) throw DataError("average_topic_weight: topic index out of range");
            sum += row[k];
        }
        out.push_back({k, theta.empty() ? 0.0 : sum / static_cast<double>(theta.size())});
    }
    return out;
}

TopKTopics top_k_topics_by_group(const std::vector<std::vector<double>>& theta,
                                 const std::vector<sentiment::SentimentLabel>& labels,
                                 const std::vector<std::size_t>& retained, std::size_t k) {
    if (theta.size() != labels.size()) {
        throw DataError("top_k_topics_by_group: theta rows and labels differ in length");
    }
    std::vector<std::vector<double>> neg, nonneg;
    for (std::size_t d = 0; d < theta.size(); ++d) {
        (labels[d] == sentiment::SentimentLabel::Negative ? neg : nonneg).push_back(theta[d]);
    }
    if (neg.empty() || nonneg.empty()) {
        throw DataError("top_k_topics_by_group: a sentiment group is empty");
    }
    auto rank = [&](const std::vector<std::vector<double>>& group) {
        std::vector<TopicMean> means = average_topic_weight(group, retained);
        std::sort(means.begin(), means.end(), [](const TopicMean& a, const TopicMean& b) {
            if (a.mean != b.mean) return a.mean > b.mean;
            return a.topic < b.topic;
        });
        if (means.size() > k) means.resize(k);
        return means;
    };
    return {rank(neg), rank(nonneg)};
}

void write_trend_csv(const std::filesystem::path& path, const TrendReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "month,doc_count,negative_rate,non_negative_rate\n";
    for (const auto& row : report.months) {
        out << row.month << ',' << row.count << ',' << fmt_centis(row.negative_centis) << ','
            << fmt_centis(row.non_negative_centis) << '\n';
    }
    out << report.overall.month << ',' << report.overall.count << ','
        << fmt_centis(report.overall.negative_centis) << ','
        << fmt_centis(report.overall.non_negative_centis) << '\n';
}

void write_topic_means_csv(const std::filesystem::path& path, const std::vector<TopicMean>& means,
                           const std::vector<std::string>& topic_labels) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic,label,mean_weight\n";
    char buf[40];
    for (const auto& m : means) {
        std::snprintf(buf, sizeof(buf), "%.6g", m.mean);
        const std::string label =
            m.topic < topic_labels.size() ? topic_labels[m.topic] : "T" + std::to_string(m.topic + 1);
        out << m.topic << ',' << label << ',' << buf << '\n';
    }
}

void write_top_topics_csv(const std::filesystem::path& path, const TopKTopics& top,
                          const std::vector<std::string>& topic_labels) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    auto label_of = [&](std::size_t topic) {
        return topic < topic_labels.size() ? topic_labels[topic] : "T" + std::to_string(topic + 1);
    };
    out << "rank,negative_topic,negative_label,non_negative_topic,non_negative_label\n";
    const std::size_t rows = std::max(top.negative.size(), top.non_negative.size());
    for (std::size_t r = 0; r < rows; ++r) {
        out << r + 1 << ',';
        if (r < top.negative.size()) {
            out << top.negative[r].topic << ',' << label_of(top.negative[r].topic);
        } else {
            out << ',';
        }
        out << ',';
        if (r < top.non_negative.size()) {
            out << top.non_negative[r].topic << ',' << label_of(top.non_negative[r].topic);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

namespace {

struct SvgCanvas {
    double width = 800, height = 420;
    double left = 60, right = 20, top = 30, bottom = 60;
    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

void svg_header(std::ofstream& out, const SvgCanvas& c, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\""
        << c.height << "\" viewBox=\"0 0 " << c.width << ' ' << c.height << "\">\n";
    out << "  <title>" << title << "</title>\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_trend_svg(const std::filesystem::path& path, const TrendReport& report) {
    if (report.months.empty()) throw DataError("write_trend_svg: no months to plot");
    SvgCanvas c;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    svg_header(out, c, "Monthly rate of negative and non-negative documents");

    const std::size_t n = report.months.size();
    auto x_of = [&](std::size_t i) {
        return n == 1 ? c.left + c.plot_w() / 2
                      : c.left + c.plot_w() * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    auto y_of = [&](double rate) { return c.top + c.plot_h() * (1.0 - rate / 100.0); };

    // axes and y gridlines at 0/25/50/75/100
    out << "  <line class=\"axis\" x1=\"" << c.left << "\" y1=\"" << c.top + c.plot_h()
        << "\" x2=\"" << c.left + c.plot_w() << "\" y2=\"" << c.top + c.plot_h()
        << "\" stroke=\"black\"/>\n";
    out << "  <line class=\"axis\" x1=\"" << c.left << "\" y1=\"" << c.top << "\" x2=\"" << c.left
        << "\" y2=\"" << c.top + c.plot_h() << "\" stroke=\"black\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double y = y_of(g * 25.0);
        out << "  <text class=\"ytick\" x=\"" << c.left - 8 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-size=\"12\">" << g * 25 << "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        out << "  <text class=\"xtick\" x=\"" << num(x_of(i)) << "\" y=\""
            << num(c.top + c.plot_h() + 20) << "\" text-anchor=\"middle\" font-size=\"12\">"
            << report.months[i].month << "</text>\n";
    }
    auto polyline = [&](const char* color, bool negative) {
        out << "  <polyline class=\"series\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < n; ++i) {
            const double rate = negative ? report.months[i].negative_rate()
                                         : report.months[i].non_negative_rate();
            out << num(x_of(i)) << ',' << num(y_of(rate)) << ' ';
        }
        out << "\"/>\n";
    };
    polyline("#c0392b", true);
    polyline("#2980b9", false);
    out << "  <text class=\"legend\" x=\"" << c.left + 10 << "\" y=\"" << c.top - 10
        << "\" font-size=\"12\" fill=\"#c0392b\">negative</text>\n";
    out << "  <text class=\"legend\" x=\"" << c.left + 90 << "\" y=\"" << c.top - 10
        << "\" font-size=\"12\" fill=\"#2980b9\">non-negative</text>\n";
    out << "</svg>\n";
}

void write_topic_means_svg(const std::filesystem::path& path,
                           const std::vector<TopicMean>& means) {
    if (means.empty()) throw DataError("write_topic_means_svg: no topics to plot");
    SvgCanvas c;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    svg_header(out, c, "Average topic weight per document");

    double max_mean = 0.0;
    for (const auto& m : means) max_mean = std::max(max_mean, m.mean);
    if (max_mean <= 0.0) max_mean = 1.0;

    const std::size_t n = means.size();
    const double slot = c.plot_w() / static_cast<double>(n);
    const double bar_w = slot * 0.7;
    out << "  <line class=\"axis\" x1=\"" << c.left << "\" y1=\"" << c.top + c.plot_h()
        << "\" x2=\"" << c.left + c.plot_w() << "\" y2=\"" << c.top + c.plot_h()
        << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double h = c.plot_h() * means[i].mean / max_mean;
        const double x = c.left + slot * static_cast<double>(i) + (slot - bar_w) / 2;
        out << "  <rect class=\"bar\" x=\"" << num(x) << "\" y=\"" << num(c.top + c.plot_h() - h)
            << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h)
            << "\" fill=\"#2980b9\"/>\n";
        out << "  <text class=\"xtick\" x=\"" << num(x + bar_w / 2) << "\" y=\""
            << num(c.top + c.plot_h() + 20) << "\" text-anchor=\"middle\" font-size=\"11\">T"
            << means[i].topic + 1 << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace sentopics::report
