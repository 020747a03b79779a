#include "negclass/textprep.hpp"

#include <fstream>
#include <istream>

#include "negclass/error.hpp"
#include "text_format.hpp"

namespace negclass {

namespace {

bool is_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }
bool is_ascii_alnum(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
bool is_token_char(unsigned char c) { return is_ascii_alnum(c) || c >= 0x80; }
bool is_handle_char(unsigned char c) { return is_ascii_alnum(c) || c == '_'; }
char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool starts_with(std::string_view s, std::size_t pos, std::string_view prefix) {
    return s.substr(pos, prefix.size()) == prefix;
}

}  // namespace

std::string normalize(std::string_view text) {
    std::string lower(text.size(), '\0');
    for (std::size_t i = 0; i < text.size(); ++i) lower[i] = ascii_lower(text[i]);

    std::string out;
    out.reserve(lower.size());
    bool pending_space = false;
    auto emit = [&](char c) {
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += c;
    };

    const std::string_view s = lower;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (is_space(c)) {
            pending_space = true;
            ++i;
            continue;
        }
        const bool word_start = i == 0 || is_space(static_cast<unsigned char>(s[i - 1]));
        if (word_start && (starts_with(s, i, "http://") || starts_with(s, i, "https://") || starts_with(s, i, "www."))) {
            while (i < s.size() && !is_space(static_cast<unsigned char>(s[i]))) ++i;
            continue;
        }
        const bool after_boundary = i == 0 || !is_handle_char(static_cast<unsigned char>(s[i - 1]));
        const bool next_handle = i + 1 < s.size() && is_handle_char(static_cast<unsigned char>(s[i + 1]));
        if (c == '@' && after_boundary && next_handle) {
            ++i;
            while (i < s.size() && is_handle_char(static_cast<unsigned char>(s[i]))) ++i;
            continue;
        }
        if (c == '#' && after_boundary && next_handle) {
            ++i;
            continue;
        }
        emit(s[i]);
        ++i;
    }
    return out;
}

Tokens tokenize(std::string_view text) {
    Tokens tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_token_char(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t begin = i;
        std::size_t code_points = 0;
        bool all_digits = true;
        while (i < text.size() && is_token_char(static_cast<unsigned char>(text[i]))) {
            const auto c = static_cast<unsigned char>(text[i]);
            if ((c & 0xC0) != 0x80) ++code_points;
            if (c < '0' || c > '9') all_digits = false;
            ++i;
        }
        if (code_points >= 2 && !all_digits) tokens.emplace_back(text.substr(begin, i - begin));
    }
    return tokens;
}

Dictionary::Dictionary(std::unordered_set<std::string> words) : words_(std::move(words)) {
    if (words_.empty()) throw DataError("dictionary is empty");
    for (const auto& w : words_) {
        if (w.empty()) throw DataError("dictionary contains an empty word");
        for (char c : w) {
            if (is_space(static_cast<unsigned char>(c))) throw DataError("dictionary word contains whitespace: '" + w + "'");
            if (ascii_lower(c) != c) throw DataError("dictionary word is not lowercase: '" + w + "'");
        }
    }
}

Dictionary Dictionary::parse(std::istream& in) {
    std::unordered_set<std::string> words;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto w = detail::trim(line);
        if (w.empty() || w.front() == '#') continue;
        std::string word(w);
        for (char& c : word) {
            if (is_space(static_cast<unsigned char>(c))) {
                throw DataError("dictionary line " + std::to_string(lineno) + ": word contains whitespace");
            }
            c = ascii_lower(c);
        }
        words.insert(std::move(word));
    }
    return Dictionary(std::move(words));
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dictionary '" + path.string() + "'");
    return parse(in);
}

double english_ratio(const Tokens& tokens, const Dictionary& dict) {
    if (tokens.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& t : tokens) hits += dict.contains(t) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

Partition filter_english(const Corpus& corpus, const Dictionary& dict, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw DataError("english threshold must be in [0, 1]");
    Partition p;
    for (const auto& doc : corpus) {
        (english_ratio(analyze(doc.text), dict) >= threshold ? p.kept : p.dropped).push_back(doc);
    }
    return p;
}

}  // namespace negclass
