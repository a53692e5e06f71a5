#include "sentopics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sentopics/errors.hpp"

namespace sentopics::corpus {

namespace {

bool is_word_char(char c, bool keep_apostrophes) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) return true;
    return keep_apostrophes && c == '\'';
}

bool has_prefix_ci(const std::string& token, const char* prefix) {
    std::size_t n = 0;
    while (prefix[n] != '\0') ++n;
    if (token.size() < n) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::tolower(static_cast<unsigned char>(token[i])) != prefix[i]) return false;
    }
    return true;
}

bool is_url_token(const std::string& token) {
    return has_prefix_ci(token, "http://") || has_prefix_ci(token, "https://") ||
           has_prefix_ci(token, "www.");
}

std::vector<std::string> split_whitespace(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.push_back(text.substr(start, i - start));
    }
    return out;
}

}  // namespace

std::string clean_text(const std::string& raw, const CleanOptions& opts) {
    std::string out;
    out.reserve(raw.size());
    for (const auto& token : split_whitespace(raw)) {
        if (token[0] == '@' || is_url_token(token)) continue;
        std::string kept;
        for (char c : token) {
            if (is_word_char(c, opts.keep_apostrophes)) {
                kept.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            }
        }
        if (kept.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += kept;
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>& stopwords) {
    return remove_stopwords(split_whitespace(text), stopwords);
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopwords) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!stopwords.count(t)) out.push_back(t);
    }
    return out;
}

std::vector<CleanDoc> filter_corpus(const std::vector<CleanDoc>& docs, const CleanOptions& opts,
                                    FilterStats* stats) {
    FilterStats local;
    local.input = docs.size();

    // Duplicate key is (author_id, exact token sequence); the earliest
    // timestamp wins, input position breaks timestamp ties.
    std::unordered_map<std::string, std::size_t> winner;
    winner.reserve(docs.size());
    auto key_of = [](const CleanDoc& d) {
        std::string key = d.author_id;
        key.push_back('\x1f');
        for (const auto& t : d.tokens) {
            key += t;
            key.push_back('\x1f');
        }
        return key;
    };
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::string key = key_of(docs[i]);
        auto [it, inserted] = winner.emplace(key, i);
        if (!inserted && docs[i].timestamp < docs[it->second].timestamp) it->second = i;
    }

    std::vector<CleanDoc> out;
    out.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (winner.at(key_of(docs[i])) != i) {
            ++local.dropped_duplicate;
            continue;
        }
        if (docs[i].tokens.size() < opts.min_tokens) {
            ++local.dropped_short;
            continue;
        }
        out.push_back(docs[i]);
    }
    local.output = out.size();
    if (stats) *stats = local;
    return out;
}

void Vocabulary::add_occurrence(const std::string& term) {
    auto [it, inserted] = index_.emplace(term, terms_.size());
    if (inserted) {
        terms_.push_back(term);
        freq_.push_back(0);
        doc_freq_.push_back(0);
    }
    ++freq_[it->second];
    ++total_tokens_;
}

void Vocabulary::finish_document(const std::unordered_set<std::string>& distinct) {
    for (const auto& term : distinct) ++doc_freq_[index_.at(term)];
}

Vocabulary build_vocabulary(const std::vector<CleanDoc>& docs) {
    if (docs.empty()) throw DataError("build_vocabulary: empty corpus");
    Vocabulary vocab;
    for (const auto& doc : docs) {
        std::unordered_set<std::string> distinct;
        for (const auto& token : doc.tokens) {
            vocab.add_occurrence(token);
            distinct.insert(token);
        }
        vocab.finish_document(distinct);
    }
    return vocab;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%*1[T ]%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s,
                    &consumed) != 6 ||
        mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) {
        throw DataError("unparseable ISO-8601 timestamp: " + text);
    }
    std::size_t pos = static_cast<std::size_t>(consumed);
    if (pos < text.size() && text[pos] == '.') {  // drop fractional seconds
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    std::int64_t offset = 0;
    if (pos < text.size()) {
        const char c = text[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int oh = 0, om = 0;
            if (std::sscanf(text.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2 &&
                std::sscanf(text.c_str() + pos + 1, "%2d%2d", &oh, &om) != 2) {
                throw DataError("bad timezone offset in timestamp: " + text);
            }
            offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
            pos = text.size();
        }
    }
    return days_from_civil(y, mo, d) * 86400LL + h * 3600LL + mi * 60LL + s - offset;
}

std::string format_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

std::string month_bucket(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) --days;
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", y, m);
    return buf;
}

std::vector<RawPost> read_posts_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path.string());
    std::vector<RawPost> posts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        RawPost p;
        try {
            p.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
            p.text = j.at("text").get<std::string>();
            p.timestamp = parse_iso8601(j.at("created_at").get<std::string>());
            p.author_id = j.at("author_id").is_string() ? j.at("author_id").get<std::string>()
                                                        : j.at("author_id").dump();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (p.id.empty()) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty post id");
        }
        if (j.contains("author_class")) {
            const std::string ac = j["author_class"].get<std::string>();
            p.author_class = ac == "individual"     ? AuthorClass::Individual
                             : ac == "organization" ? AuthorClass::Organization
                                                    : AuthorClass::Unknown;
        }
        posts.push_back(std::move(p));
    }
    return posts;
}

void write_clean_jsonl(const std::filesystem::path& path, const std::vector<CleanDoc>& docs) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    for (const auto& d : docs) {
        nlohmann::json j;
        j["id"] = d.id;
        j["created_at"] = format_utc(d.timestamp);
        j["author_id"] = d.author_id;
        j["tokens"] = d.tokens;
        out << j.dump() << '\n';
    }
}

std::vector<CleanDoc> read_clean_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path.string());
    std::vector<CleanDoc> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        CleanDoc d;
        d.id = j.at("id").get<std::string>();
        d.timestamp = parse_iso8601(j.at("created_at").get<std::string>());
        d.author_id = j.at("author_id").get<std::string>();
        d.tokens = j.at("tokens").get<std::vector<std::string>>();
        docs.push_back(std::move(d));
    }
    return docs;
}

std::unordered_set<std::string> read_term_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open term file: " + path.string());
    std::unordered_set<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        terms.insert(line.substr(start));
    }
    return terms;
}

void write_vocabulary_csv(const std::filesystem::path& path, const Vocabulary& vocab) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "term,index,freq,doc_freq\n";
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        out << vocab.term(i) << ',' << i << ',' << vocab.frequency(i) << ','
            << vocab.doc_frequency(i) << '\n';
    }
}

}  // namespace sentopics::corpus
