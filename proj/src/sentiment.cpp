#include "sentopics/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sentopics/errors.hpp"

namespace sentopics::sentiment {

const char* label_name(SentimentLabel label) {
    return label == SentimentLabel::Negative ? "NEG" : "NONNEG";
}

SentimentLabel label_from_name(const std::string& name) {
    if (name == "NEG") return SentimentLabel::Negative;
    if (name == "NONNEG") return SentimentLabel::NonNegative;
    throw DataError("unknown sentiment label: " + name);
}

void PolarityLexicon::validate() const {
    if (positive.empty() && negative.empty()) {
        throw DataError("polarity lexicon is empty");
    }
    for (const auto& t : positive) {
        if (negative.count(t)) throw DataError("term in both polarity sets: " + t);
    }
}

void ValenceLexicon::validate() const {
    for (const auto& [term, v] : valence) {
        if (!std::isfinite(v)) throw DataError("non-finite valence for term: " + term);
    }
    for (const auto& [term, v] : boosters) {
        if (!std::isfinite(v)) throw DataError("non-finite booster increment for term: " + term);
    }
    for (const auto& t : negators) {
        if (valence.count(t)) throw DataError("negator also carries a valence: " + t);
    }
    if (normalizer <= 0 || negation_window < 0) {
        throw DataError("invalid valence lexicon constants");
    }
}

DifferenceScore score_difference(const std::vector<std::string>& tokens,
                                 const PolarityLexicon& lex) {
    if (tokens.empty()) throw DataError("score_difference: empty token list");
    std::size_t pos = 0, neg = 0;
    for (const auto& t : tokens) {
        if (lex.positive.count(t)) ++pos;
        if (lex.negative.count(t)) ++neg;
    }
    DifferenceScore out;
    out.diff = 100.0 * (static_cast<double>(pos) - static_cast<double>(neg)) /
               static_cast<double>(tokens.size());
    out.label = out.diff < 0 ? SentimentLabel::Negative : SentimentLabel::NonNegative;
    return out;
}

SentimentLabel label_from_cs(double cs) {
    return cs <= -0.05 ? SentimentLabel::Negative : SentimentLabel::NonNegative;
}

CompoundScore compound_score(const std::vector<std::string>& tokens, const ValenceLexicon& lex) {
    if (tokens.empty()) throw DataError("compound_score: empty token list");
    double s = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto hit = lex.valence.find(tokens[i]);
        if (hit == lex.valence.end()) continue;
        double v = hit->second;
        if (i > 0) {
            auto boost = lex.boosters.find(tokens[i - 1]);
            if (boost != lex.boosters.end() && v != 0.0) {
                // Booster pushes the valence away from zero.
                v += (v > 0 ? boost->second : -boost->second);
            }
        }
        for (int back = 1; back <= lex.negation_window && back <= static_cast<int>(i); ++back) {
            if (lex.negators.count(tokens[i - static_cast<std::size_t>(back)])) {
                v *= lex.negation_damp;
                break;
            }
        }
        s += v;
    }
    CompoundScore out;
    out.cs = s / std::sqrt(s * s + lex.normalizer);
    out.label = label_from_cs(out.cs);
    return out;
}

namespace {

double round2(double percent) { return std::round(percent * 100.0) / 100.0; }

}  // namespace

AgreementReport evaluate_agreement(
    const std::string& engine,
    const std::unordered_map<std::string, SentimentLabel>& predictions,
    const std::vector<GoldRecord>& gold) {
    AgreementReport report;
    report.engine = engine;
    for (const auto& rec : gold) {
        auto it = predictions.find(rec.id);
        if (it == predictions.end()) {
            throw DataError("no prediction for gold record id " + rec.id);
        }
        if (rec.coder_a != rec.coder_b) continue;  // only unanimous records count
        ++report.n_gold_used;
        if (it->second == rec.coder_a) ++report.n_matches;
    }
    if (report.n_gold_used == 0) throw DataError("gold set has no unanimous records");
    report.agreement =
        round2(100.0 * static_cast<double>(report.n_matches) / static_cast<double>(report.n_gold_used));
    return report;
}

std::string select_engine(const std::vector<AgreementReport>& reports) {
    if (reports.empty()) throw DataError("select_engine: no agreement reports");
    const AgreementReport* best = &reports.front();
    for (const auto& r : reports) {
        if (r.agreement > best->agreement ||
            (r.agreement == best->agreement && r.engine < best->engine)) {
            best = &r;
        }
    }
    return best->engine;
}

PolarityLexicon read_polarity_lexicon(const std::filesystem::path& positive_terms,
                                      const std::filesystem::path& negative_terms) {
    PolarityLexicon lex;
    lex.positive = corpus::read_term_file(positive_terms);
    lex.negative = corpus::read_term_file(negative_terms);
    lex.validate();
    return lex;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

ValenceLexicon read_valence_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open valence lexicon: " + path.string());
    ValenceLexicon lex;
    enum class Section { Valences, Boosters, Negators } section = Section::Valences;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[boosters]") {
            section = Section::Boosters;
            continue;
        }
        if (t == "[negators]") {
            section = Section::Negators;
            continue;
        }
        auto fields = split_csv_line(t);
        auto bad = [&](const char* what) {
            return DataError(path.string() + ":" + std::to_string(lineno) + ": " + what);
        };
        try {
            if (section == Section::Negators) {
                lex.negators.insert(strip(fields.at(0)));
            } else if (section == Section::Boosters) {
                const double inc =
                    fields.size() > 1 ? std::stod(fields.at(1)) : lex.default_booster;
                lex.boosters[strip(fields.at(0))] = inc;
            } else {
                if (fields.size() < 2) throw bad("expected term,valence");
                lex.valence[strip(fields.at(0))] = std::stod(fields.at(1));
            }
        } catch (const std::invalid_argument&) {
            throw bad("unparseable number");
        }
    }
    lex.validate();
    return lex;
}

std::vector<GoldRecord> read_gold_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open gold label file: " + path.string());
    std::vector<GoldRecord> gold;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (first && t.rfind("id,", 0) == 0) {  // header
            first = false;
            continue;
        }
        first = false;
        auto fields = split_csv_line(t);
        if (fields.size() < 3) throw DataError("gold CSV needs id,coder_a,coder_b: " + t);
        gold.push_back({strip(fields[0]), label_from_name(strip(fields[1])),
                        label_from_name(strip(fields[2]))});
    }
    return gold;
}

void write_sentiment_csv(const std::filesystem::path& path, const std::string& engine,
                         const std::vector<ScoredDoc>& scored) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "id,engine,score,label\n";
    char buf[64];
    for (const auto& s : scored) {
        std::snprintf(buf, sizeof(buf), "%.6g", s.score);
        out << s.id << ',' << engine << ',' << buf << ',' << label_name(s.label) << '\n';
    }
}

std::vector<ScoredDoc> read_sentiment_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path.string());
    std::vector<ScoredDoc> scored;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const std::string t = strip(line);
        if (t.empty()) continue;
        auto fields = split_csv_line(t);
        if (fields.size() < 4) throw DataError("bad sentiment CSV row: " + t);
        scored.push_back({strip(fields[0]), std::stod(fields[2]), label_from_name(strip(fields[3]))});
    }
    return scored;
}

}  // namespace sentopics::sentiment
