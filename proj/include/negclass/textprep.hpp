#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "negclass/corpus.hpp"

namespace negclass {

using Tokens = std::vector<std::string>;

// Lowercases ASCII letters, drops URLs (http://, https://, www.), @-mentions
// and the '#' of hashtags, then collapses whitespace runs and trims.
std::string normalize(std::string_view text);

// Splits on runs of characters that are neither ASCII alphanumerics nor
// non-ASCII bytes (so UTF-8 words stay whole). Tokens shorter than two code
// points and all-digit tokens are discarded.
Tokens tokenize(std::string_view normalized);

inline Tokens analyze(std::string_view text) { return tokenize(normalize(text)); }

// Set of lowercase words, e.g. an English word list.
class Dictionary {
public:
    Dictionary() = default;
    // Throws DataError if empty or if a word contains whitespace.
    explicit Dictionary(std::unordered_set<std::string> words);

    // One word per line, '#' comment lines and blank lines ignored. Words are
    // lowercased on load.
    static Dictionary parse(std::istream& in);
    static Dictionary load(const std::filesystem::path& path);

    bool contains(std::string_view word) const { return words_.count(std::string(word)) != 0; }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// Share of tokens (with multiplicity) found in the dictionary; 0 for no tokens.
double english_ratio(const Tokens& tokens, const Dictionary& dict);

struct Partition {
    Corpus kept;
    Corpus dropped;
};

// Keeps documents with english_ratio(analyze(text)) >= threshold.
Partition filter_english(const Corpus& corpus, const Dictionary& dict, double threshold);

}  // namespace negclass
