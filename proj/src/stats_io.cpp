#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "sentopics/errors.hpp"
#include "sentopics/report.hpp"

namespace sentopics::stats {

namespace {

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string label_of(const std::vector<std::string>& labels, std::size_t topic) {
    return topic < labels.size() ? labels[topic] : "T" + std::to_string(topic + 1);
}

}  // namespace

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<TopicComparison>& rows,
                          const std::vector<std::string>& topic_labels) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic,label,result,d_mean,effect_size\n";
    for (const auto& row : rows) {
        out << row.test.topic << ',' << label_of(topic_labels, row.test.topic) << ',';
        if (row.test.direction == Direction::NS) {
            out << "NS,NS,NS\n";
            continue;
        }
        out << "* " << direction_name(row.test.direction) << ',';
        if (row.has_effect) {
            out << fmt6(row.effect.d_mean) << ',' << effect_class_name(row.effect.effect);
        } else {
            out << "NS,NS";
        }
        out << '\n';
    }
}

void write_comparison_detail_csv(const std::filesystem::path& path,
                                 const std::vector<TopicComparison>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic,t,df,p,p_adj,alpha_used,direction,d_full,d_mean,effect_size,warning\n";
    for (const auto& row : rows) {
        out << row.test.topic << ',' << fmt6(row.test.t) << ',' << fmt6(row.test.df) << ','
            << fmt6(row.test.p) << ',' << fmt6(row.test.p_adj) << ',' << fmt6(row.test.alpha_used)
            << ',' << direction_name(row.test.direction) << ',';
        if (row.has_effect) {
            out << fmt6(row.effect.d_full) << ',' << fmt6(row.effect.d_mean) << ','
                << effect_class_name(row.effect.effect);
        } else {
            out << ",,";
        }
        out << ',' << row.test.warning << '\n';
    }
}

void write_comparison_strata_csv(const std::filesystem::path& path,
                                 const std::vector<TopicComparison>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "topic,size,d\n";
    for (const auto& row : rows) {
        if (!row.has_effect) continue;
        for (const auto& [size, d] : row.effect.d_by_size) {
            out << row.test.topic << ',' << size << ',' << fmt6(d) << '\n';
        }
    }
}

void write_comparison_json(const std::filesystem::path& path,
                           const std::vector<TopicComparison>& rows,
                           const std::vector<std::string>& topic_labels) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["topic"] = row.test.topic;
        r["label"] = label_of(topic_labels, row.test.topic);
        r["t"] = row.test.t;
        r["df"] = row.test.df;
        r["p"] = row.test.p;
        r["p_adj"] = row.test.p_adj;
        r["alpha_used"] = row.test.alpha_used;
        r["direction"] = direction_name(row.test.direction);
        r["significant"] = row.test.direction != Direction::NS;
        r["degenerate"] = row.test.degenerate;
        if (!row.test.warning.empty()) r["warning"] = row.test.warning;
        if (row.has_effect) {
            r["d_full"] = row.effect.d_full;
            r["d_mean"] = row.effect.d_mean;
            r["effect_size"] = effect_class_key(row.effect.effect);
            nlohmann::json strata = nlohmann::json::object();
            for (const auto& [size, d] : row.effect.d_by_size) strata[std::to_string(size)] = d;
            r["d_by_size"] = strata;
            if (!row.effect.warnings.empty()) r["effect_warnings"] = row.effect.warnings;
        }
        j.push_back(r);
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace sentopics::stats
