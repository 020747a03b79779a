#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "negclass/error.hpp"
#include "negclass/features.hpp"

namespace negclass::detail {

// Common shape checks for supervised training input; returns the dimension.
inline std::size_t check_training_data(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                                       std::size_t num_classes) {
    if (xs.empty()) throw ModelError("no training examples");
    if (xs.size() != labels.size()) throw ModelError("example and label counts differ");
    if (num_classes < 1) throw ModelError("at least one class is required");
    const auto dim = xs.front().dimension();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].dimension() != dim) throw ModelError("examples have differing dimensions");
        if (labels[i] >= num_classes) throw ModelError("label " + std::to_string(labels[i]) + " out of range");
    }
    return dim;
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

inline double sparse_dot(std::span<const double> dense, const SparseVector& x) {
    double s = 0.0;
    for (const auto& e : x.entries()) s += dense[e.index] * e.value;
    return s;
}

}  // namespace negclass::detail
