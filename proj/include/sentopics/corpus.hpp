#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sentopics::corpus {

enum class AuthorClass { Individual, Organization, Unknown };

struct RawPost {
    std::string id;
    std::string text;
    std::int64_t timestamp = 0;  // UTC epoch seconds
    std::string author_id;
    AuthorClass author_class = AuthorClass::Unknown;
};

struct CleanDoc {
    std::string id;
    std::vector<std::string> tokens;
    std::int64_t timestamp = 0;
    std::string author_id;
};

struct CleanOptions {
    bool keep_apostrophes = true;
    std::size_t min_tokens = 5;
};

// term -> dense index bijection plus corpus/document frequencies.
class Vocabulary {
public:
    std::size_t size() const { return terms_.size(); }
    const std::string& term(std::size_t index) const { return terms_.at(index); }
    std::size_t index(const std::string& term) const { return index_.at(term); }
    std::optional<std::size_t> find(const std::string& term) const {
        auto it = index_.find(term);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::uint64_t frequency(std::size_t index) const { return freq_.at(index); }
    std::uint64_t doc_frequency(std::size_t index) const { return doc_freq_.at(index); }
    std::uint64_t total_tokens() const { return total_tokens_; }

    void add_occurrence(const std::string& term);
    void finish_document(const std::unordered_set<std::string>& distinct);

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::uint64_t> freq_;
    std::vector<std::uint64_t> doc_freq_;
    std::uint64_t total_tokens_ = 0;
};

// Strips URLs and @-mentions, removes characters outside
// [alphanumeric, apostrophe, whitespace], lowercases, collapses whitespace.
// Total and idempotent.
std::string clean_text(const std::string& raw, const CleanOptions& opts = {});

// Whitespace split with stop-word removal; input is assumed cleaned.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::unordered_set<std::string>& stopwords);
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopwords);

// Drops duplicate (author_id, token sequence) pairs keeping the earliest
// timestamp, then drops docs shorter than opts.min_tokens. Input order is
// preserved for the surviving docs.
struct FilterStats {
    std::size_t input = 0;
    std::size_t dropped_duplicate = 0;
    std::size_t dropped_short = 0;
    std::size_t output = 0;
};
std::vector<CleanDoc> filter_corpus(const std::vector<CleanDoc>& docs,
                                    const CleanOptions& opts = {},
                                    FilterStats* stats = nullptr);

Vocabulary build_vocabulary(const std::vector<CleanDoc>& docs);

// ISO-8601 timestamp (e.g. 2020-11-01T12:30:00Z or with +hh:mm offset) to
// UTC epoch seconds. Fractional seconds are truncated.
std::int64_t parse_iso8601(const std::string& text);
std::string format_utc(std::int64_t epoch_seconds);
std::string month_bucket(std::int64_t epoch_seconds);  // "YYYY-MM"

// JSON Lines input: one object per post, keys id, text, created_at,
// author_id, author_class (optional).
std::vector<RawPost> read_posts_jsonl(const std::filesystem::path& path);
void write_clean_jsonl(const std::filesystem::path& path, const std::vector<CleanDoc>& docs);
std::vector<CleanDoc> read_clean_jsonl(const std::filesystem::path& path);

// One term per line, '#' comment lines ignored.
std::unordered_set<std::string> read_term_file(const std::filesystem::path& path);

void write_vocabulary_csv(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace sentopics::corpus
