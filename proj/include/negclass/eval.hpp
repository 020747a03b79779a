#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "negclass/category.hpp"

namespace negclass {

// Cell (i, j) counts documents of true class i predicted as class j.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t k) : k_(k), cells_(k * k, 0) {}

    std::size_t size() const { return k_; }
    std::uint64_t operator()(std::size_t truth, std::size_t predicted) const { return cells_[truth * k_ + predicted]; }
    std::uint64_t& operator()(std::size_t truth, std::size_t predicted) { return cells_[truth * k_ + predicted]; }
    std::uint64_t row_sum(std::size_t c) const;
    std::uint64_t col_sum(std::size_t c) const;
    std::uint64_t trace() const;
    std::uint64_t total() const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t k_ = 0;
    std::vector<std::uint64_t> cells_;
};

// Throws DataError on a length mismatch or a label >= k.
ConfusionMatrix confusion(std::span<const std::size_t> truth, std::span<const std::size_t> predicted, std::size_t k);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    // Set when the metric was 0/0 and reported as 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& m);

struct MetricAverages {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct Summary {
    double accuracy = 0.0;
    MetricAverages macro;
    MetricAverages weighted;  // support-weighted
    std::uint64_t total = 0;
};

struct Averages {
    MetricAverages macro;
    MetricAverages weighted;
    std::uint64_t total_support = 0;
};

// Unweighted and support-weighted means. Throws DataError when the total
// support is zero.
Averages average_metrics(std::span<const ClassMetrics> per_class);

// Averages plus accuracy = trace / total. Throws DataError on an empty matrix.
Summary aggregate(const ConfusionMatrix& m, std::span<const ClassMetrics> per_class);

struct EvalReport {
    std::string model;
    CategorySet categories;
    ConfusionMatrix matrix;
    std::vector<ClassMetrics> per_class;
    Summary summary;
};

EvalReport evaluate(std::string model, const CategorySet& categories, std::span<const std::size_t> truth,
                    std::span<const std::size_t> predicted);

// Class rows, then an Avg/Total row (support-weighted, total support), a
// macro row and the accuracy; values to 2 decimals. Metrics that were 0/0
// carry a trailing '*'.
std::string render_text(const EvalReport& report);
// One row per class plus `macro avg`, `weighted avg` and `accuracy` rows,
// full precision.
std::string render_csv(const EvalReport& report);
nlohmann::ordered_json to_json(const EvalReport& report);
// Inverse of to_json; throws DataError on a malformed document.
EvalReport report_from_json(const nlohmann::ordered_json& j);

struct ComparisonRow {
    std::string model;
    double accuracy = 0.0;
};

// Sorted by accuracy descending, ties by model name ascending.
std::vector<ComparisonRow> compare_models(const std::vector<std::pair<std::string, EvalReport>>& reports);
// Two-column table, accuracy to 4 decimals.
std::string render_comparison(const std::vector<ComparisonRow>& rows);

}  // namespace negclass
