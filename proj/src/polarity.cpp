#include "negclass/polarity.hpp"

#include <fstream>
#include <istream>

#include "negclass/error.hpp"
#include "text_format.hpp"

namespace negclass {

PolarityLexicon::PolarityLexicon(std::unordered_set<std::string> positive, std::unordered_set<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
    if (positive_.empty() || negative_.empty()) throw DataError("polarity lexicon needs positive and negative entries");
    for (const auto& t : positive_) {
        if (negative_.count(t)) throw DataError("token '" + t + "' is both positive and negative");
    }
}

PolarityLexicon PolarityLexicon::parse(std::istream& in) {
    std::unordered_set<std::string> pos, neg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("lexicon line " + std::to_string(lineno) + ": expected token<TAB>pos|neg");
        }
        std::string token(detail::trim(std::string_view(line).substr(0, tab)));
        const auto tag = detail::trim(std::string_view(line).substr(tab + 1));
        if (token.empty()) throw DataError("lexicon line " + std::to_string(lineno) + ": empty token");
        if (tag == "pos") {
            pos.insert(std::move(token));
        } else if (tag == "neg") {
            neg.insert(std::move(token));
        } else {
            throw DataError("lexicon line " + std::to_string(lineno) + ": unknown tag '" + std::string(tag) + "'");
        }
    }
    return PolarityLexicon(std::move(pos), std::move(neg));
}

PolarityLexicon PolarityLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open lexicon '" + path.string() + "'");
    return parse(in);
}

double polarity_score(const Tokens& tokens, const PolarityLexicon& lexicon) {
    if (tokens.empty()) return 0.0;
    long balance = 0;
    for (const auto& t : tokens) {
        if (lexicon.is_positive(t)) ++balance;
        else if (lexicon.is_negative(t)) --balance;
    }
    return static_cast<double>(balance) / static_cast<double>(tokens.size());
}

Partition gate_negative(const Corpus& corpus, const LexiconGate& gate) {
    if (!gate.lexicon) throw DataError("lexicon gate without a lexicon");
    Partition p;
    for (const auto& doc : corpus) {
        (polarity_score(analyze(doc.text), *gate.lexicon) < gate.threshold ? p.kept : p.dropped).push_back(doc);
    }
    return p;
}

Partition gate_negative(const Corpus& corpus, ColumnGate) {
    Partition p;
    for (const auto& doc : corpus) {
        if (!doc.polarity) throw DataError("document '" + doc.id + "' has no polarity");
        (*doc.polarity == Polarity::negative ? p.kept : p.dropped).push_back(doc);
    }
    return p;
}

}  // namespace negclass
