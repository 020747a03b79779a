#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "negclass/category.hpp"

namespace negclass {

enum class Polarity { positive, negative };

struct Geotag {
    double lat = 0.0;
    double lon = 0.0;
    std::optional<std::string> location_name;

    friend bool operator==(const Geotag&, const Geotag&) = default;
};

// One text record. Optional fields stay absent unless the source supplied
// them.
struct Document {
    std::string id;
    std::string text;
    std::optional<Polarity> polarity;
    std::optional<Geotag> geotag;
    std::optional<std::array<std::string, 3>> expert_labels;
    std::optional<std::string> label;

    friend bool operator==(const Document&, const Document&) = default;
};

using Corpus = std::vector<Document>;

enum class CorpusFormat { csv, jsonl };

// Picks csv for a ".csv" extension and jsonl otherwise.
CorpusFormat format_for_path(const std::filesystem::path& path);

// Parses a corpus and validates every record against `categories` (labels
// and expert labels must be known names, ids unique and non-empty, geotag
// in range). Errors are DataError naming the line and field.
Corpus parse_corpus(std::istream& in, CorpusFormat format,
                    const CategorySet& categories = CategorySet::negativity());
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const CategorySet& categories = CategorySet::negativity());

void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus, CorpusFormat format);

// --- expert adjudication ---------------------------------------------------

struct Accepted {
    std::string label;
};
struct Rejected {};
using Adjudication = std::variant<Accepted, Rejected>;

// Two-of-three majority. Throws DataError when expert labels are missing.
Adjudication adjudicate(const Document& doc);

struct AdjudicatedCorpus {
    Corpus labeled;
    Corpus rejected;
};

AdjudicatedCorpus adjudicate_corpus(const Corpus& corpus);

// --- splitting ---------------------------------------------------------------

struct Split {
    Corpus train;
    Corpus test;
};

// Per category with n documents, floor(n * test_fraction) are moved to the
// test side, picked by a seeded shuffle of that category's documents. Both
// outputs keep the input order.
Split stratified_split(const Corpus& corpus, double test_fraction, std::uint64_t seed,
                       const CategorySet& categories = CategorySet::negativity());

// --- class distribution --------------------------------------------------------

struct CategoryCounts {
    std::string category;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
};

class DistributionSpec {
public:
    DistributionSpec() = default;
    explicit DistributionSpec(std::vector<CategoryCounts> rows) : rows_(std::move(rows)) {}

    // Train/test counts of the reference dataset, canonical order.
    static DistributionSpec table1();

    const std::vector<CategoryCounts>& rows() const { return rows_; }
    std::size_t total() const;
    std::size_t count(std::size_t row) const { return rows_[row].train_count + rows_[row].test_count; }
    // 100 * count / total, unrounded.
    double percent(std::size_t row) const;

private:
    std::vector<CategoryCounts> rows_;
};

// CSV with header `category,train_count,test_count`; an optional fourth
// `percent` column is checked against the counts (+-0.005).
DistributionSpec load_distribution_spec(const std::filesystem::path& path,
                                        const CategorySet& categories = CategorySet::negativity());

struct ClassShare {
    std::string category;
    std::size_t count = 0;
    double percent = 0.0;  // rounded to 2 decimals
};

// Counts per category in `categories` order. Throws DataError on an empty
// corpus or an unlabeled document.
std::vector<ClassShare> class_distribution(const Corpus& corpus,
                                           const CategorySet& categories = CategorySet::negativity());

std::string render_distribution(const std::vector<ClassShare>& shares);

// --- synthetic corpora -----------------------------------------------------------

struct NamedLocation {
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
};

// A handful of Pakistani cities, usable as a default geotag pool.
const std::vector<NamedLocation>& default_locations();

// CSV with header `name,lat,lon`.
std::vector<NamedLocation> load_locations(const std::filesystem::path& path);

struct SynthOptions {
    std::size_t keyword_pool_size = 20;
    std::size_t noise_pool_size = 200;
    double signal_prob = 0.8;
    std::size_t min_len = 5;
    std::size_t max_len = 20;
    std::uint64_t seed = 42;
    // Empty means no geotags.
    std::vector<NamedLocation> locations;
};

// Keyword token j of a category; pools of different categories are disjoint.
std::string keyword_token(std::string_view category, std::size_t j);
std::string noise_token(std::size_t j);

// Emits exactly train_count + test_count labeled documents per category, in
// a seeded interleaved order.
Corpus synthesize_corpus(const DistributionSpec& spec, const SynthOptions& options);

}  // namespace negclass
