#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "negclass/textprep.hpp"

namespace negclass {

// Sorted (index, value) pairs over a fixed dimension; zeros are not stored.
class SparseVector {
public:
    struct Entry {
        std::size_t index;
        double value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    SparseVector() = default;
    explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}
    // Throws DataError unless indices are strictly increasing, below the
    // dimension and values are nonzero.
    SparseVector(std::size_t dimension, std::vector<Entry> entries);

    std::size_t dimension() const { return dimension_; }
    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t nnz() const { return entries_.size(); }

    double value_at(std::size_t index) const;
    double sum() const;
    double norm() const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::size_t dimension_ = 0;
    std::vector<Entry> entries_;
};

class Vocabulary {
public:
    Vocabulary() = default;
    // Tokens must be distinct; `document_frequency` parallel to `tokens`.
    Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> document_frequency, std::size_t n_docs_fitted);

    std::size_t size() const { return tokens_.size(); }
    std::optional<std::size_t> index_of(const std::string& token) const;
    const std::string& token(std::size_t index) const { return tokens_.at(index); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::size_t document_frequency(std::size_t index) const { return df_.at(index); }
    const std::vector<std::size_t>& document_frequencies() const { return df_; }
    std::size_t n_docs_fitted() const { return n_docs_; }

private:
    std::vector<std::string> tokens_;
    std::vector<std::size_t> df_;
    std::size_t n_docs_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

struct VocabularyOptions {
    std::size_t min_df = 2;
    std::optional<std::size_t> max_features = 20000;
};

// Keeps tokens with document frequency >= min_df; with max_features, the top
// tokens by (df descending, token ascending). Indices follow lexicographic
// token order. Throws DataError on no documents or an empty result.
Vocabulary fit_vocabulary(const std::vector<Tokens>& docs, const VocabularyOptions& options = {});

// Multiplicity of each in-vocabulary token; unknown tokens are dropped.
SparseVector count_vector(const Tokens& tokens, const Vocabulary& vocab);

class IdfWeights {
public:
    IdfWeights() = default;
    IdfWeights(std::vector<double> idf, std::size_t n_docs) : idf_(std::move(idf)), n_docs_(n_docs) {}

    std::size_t size() const { return idf_.size(); }
    double operator[](std::size_t i) const { return idf_[i]; }
    const std::vector<double>& values() const { return idf_; }
    std::size_t n_docs() const { return n_docs_; }

private:
    std::vector<double> idf_;
    std::size_t n_docs_ = 0;
};

// Smoothed idf ln((1 + n) / (1 + df)) + 1, df counted over `counts`.
IdfWeights fit_idf(const std::vector<SparseVector>& counts, const Vocabulary& vocab);

// count * idf, then L2-normalized. Throws DataError on dimension mismatch.
SparseVector tfidf(const SparseVector& counts, const IdfWeights& idf);

enum class FeatureKind { counts, tfidf };

const char* to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

struct FeaturizedDoc {
    FeatureKind kind = FeatureKind::counts;
    SparseVector vector;
};

// Everything needed to turn raw text into a model's input.
struct Featurizer {
    FeatureKind kind = FeatureKind::counts;
    Vocabulary vocabulary;
    std::optional<IdfWeights> idf;  // present iff kind == tfidf

    // Fits vocabulary (and idf for tfidf) on the given token lists.
    static Featurizer fit(FeatureKind kind, const std::vector<Tokens>& docs, const VocabularyOptions& options);

    FeaturizedDoc featurize(const Tokens& tokens) const;
    FeaturizedDoc featurize_text(std::string_view text) const { return featurize(analyze(text)); }
    std::size_t dimension() const { return vocabulary.size(); }
};

}  // namespace negclass
