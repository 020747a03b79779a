#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_set>

#include "negclass/textprep.hpp"

namespace negclass {

class PolarityLexicon {
public:
    PolarityLexicon() = default;
    // Both sets nonempty and disjoint, otherwise DataError.
    PolarityLexicon(std::unordered_set<std::string> positive, std::unordered_set<std::string> negative);

    // Lines `token<TAB>pos` or `token<TAB>neg`; '#' comments and blank lines skipped.
    static PolarityLexicon parse(std::istream& in);
    static PolarityLexicon load(const std::filesystem::path& path);

    bool is_positive(const std::string& token) const { return positive_.count(token) != 0; }
    bool is_negative(const std::string& token) const { return negative_.count(token) != 0; }

private:
    std::unordered_set<std::string> positive_;
    std::unordered_set<std::string> negative_;
};

// (positive hits - negative hits) / |tokens|, 0 for no tokens.
double polarity_score(const Tokens& tokens, const PolarityLexicon& lexicon);

struct LexiconGate {
    const PolarityLexicon* lexicon = nullptr;
    double threshold = 0.0;
};

// Trusts the document's own polarity field.
struct ColumnGate {};

// Splits a corpus into negative documents (kept) and the rest. The lexicon
// gate keeps documents scoring strictly below the threshold; the column gate
// keeps documents marked negative and throws DataError naming the first
// document without a polarity.
Partition gate_negative(const Corpus& corpus, const LexiconGate& gate);
Partition gate_negative(const Corpus& corpus, ColumnGate);

}  // namespace negclass
