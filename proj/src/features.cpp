#include "negclass/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "negclass/error.hpp"

namespace negclass {

SparseVector::SparseVector(std::size_t dimension, std::vector<Entry> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].index >= dimension_) throw DataError("sparse index out of range");
        if (i && entries_[i].index <= entries_[i - 1].index) throw DataError("sparse indices must increase");
        if (entries_[i].value == 0.0) throw DataError("sparse vector stores an explicit zero");
    }
}

double SparseVector::value_at(std::size_t index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, std::size_t i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

double SparseVector::sum() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value;
    return s;
}

double SparseVector::norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value * e.value;
    return std::sqrt(s);
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> df, std::size_t n_docs)
    : tokens_(std::move(tokens)), df_(std::move(df)), n_docs_(n_docs) {
    if (df_.size() != tokens_.size()) throw DataError("vocabulary: frequency list size mismatch");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (df_[i] > n_docs_) throw DataError("vocabulary: document frequency exceeds document count");
        if (!index_.emplace(tokens_[i], i).second) throw DataError("vocabulary: duplicate token '" + tokens_[i] + "'");
    }
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary fit_vocabulary(const std::vector<Tokens>& docs, const VocabularyOptions& options) {
    if (docs.empty()) throw DataError("cannot fit a vocabulary on zero documents");
    if (options.min_df < 1) throw DataError("min_df must be at least 1");

    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        Tokens unique = doc;
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (auto& t : unique) ++df[std::move(t)];
    }

    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [token, f] : df) {
        if (f >= options.min_df) kept.emplace_back(token, f);
    }
    if (options.max_features && kept.size() > *options.max_features) {
        std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        kept.resize(*options.max_features);
        std::sort(kept.begin(), kept.end());
    }
    if (kept.empty()) throw DataError("vocabulary is empty after min_df/max_features filtering");

    std::vector<std::string> tokens;
    std::vector<std::size_t> freqs;
    for (auto& [token, f] : kept) {
        tokens.push_back(std::move(token));
        freqs.push_back(f);
    }
    return Vocabulary(std::move(tokens), std::move(freqs), docs.size());
}

SparseVector count_vector(const Tokens& tokens, const Vocabulary& vocab) {
    std::map<std::size_t, double> counts;
    for (const auto& t : tokens) {
        if (auto i = vocab.index_of(t)) counts[*i] += 1.0;
    }
    std::vector<SparseVector::Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [i, c] : counts) entries.push_back({i, c});
    return SparseVector(vocab.size(), std::move(entries));
}

IdfWeights fit_idf(const std::vector<SparseVector>& counts, const Vocabulary& vocab) {
    if (counts.empty()) throw DataError("cannot fit idf on zero documents");
    std::vector<std::size_t> df(vocab.size(), 0);
    for (const auto& v : counts) {
        if (v.dimension() != vocab.size()) throw DataError("count vector dimension does not match vocabulary");
        for (const auto& e : v.entries()) ++df[e.index];
    }
    const double n = static_cast<double>(counts.size());
    std::vector<double> idf(vocab.size());
    for (std::size_t i = 0; i < idf.size(); ++i) {
        idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
    }
    return IdfWeights(std::move(idf), counts.size());
}

SparseVector tfidf(const SparseVector& counts, const IdfWeights& idf) {
    if (counts.dimension() != idf.size()) throw DataError("tf-idf dimension mismatch");
    std::vector<SparseVector::Entry> entries;
    entries.reserve(counts.nnz());
    double sq = 0.0;
    for (const auto& e : counts.entries()) {
        const double v = e.value * idf[e.index];
        entries.push_back({e.index, v});
        sq += v * v;
    }
    if (sq > 0.0) {
        const double norm = std::sqrt(sq);
        for (auto& e : entries) e.value /= norm;
    }
    return SparseVector(counts.dimension(), std::move(entries));
}

const char* to_string(FeatureKind kind) { return kind == FeatureKind::counts ? "counts" : "tfidf"; }

FeatureKind feature_kind_from_string(const std::string& s) {
    if (s == "counts") return FeatureKind::counts;
    if (s == "tfidf") return FeatureKind::tfidf;
    throw DataError("unknown feature kind '" + s + "'");
}

Featurizer Featurizer::fit(FeatureKind kind, const std::vector<Tokens>& docs, const VocabularyOptions& options) {
    Featurizer f;
    f.kind = kind;
    f.vocabulary = fit_vocabulary(docs, options);
    if (kind == FeatureKind::tfidf) {
        std::vector<SparseVector> counts;
        counts.reserve(docs.size());
        for (const auto& d : docs) counts.push_back(count_vector(d, f.vocabulary));
        f.idf = fit_idf(counts, f.vocabulary);
    }
    return f;
}

FeaturizedDoc Featurizer::featurize(const Tokens& tokens) const {
    auto counts = count_vector(tokens, vocabulary);
    if (kind == FeatureKind::counts) return {kind, std::move(counts)};
    return {kind, tfidf(counts, *idf)};
}

}  // namespace negclass
