#include <cmath>

#include "negclass/error.hpp"
#include "negclass/models.hpp"
#include "training_common.hpp"

namespace negclass {

NaiveBayesModel train_naive_bayes(std::span<const SparseVector> counts, std::span<const std::size_t> labels,
                                  std::size_t num_classes, double alpha) {
    if (!(alpha > 0.0)) throw ModelError("naive Bayes alpha must be positive");
    const auto dim = detail::check_training_data(counts, labels, num_classes);

    std::vector<double> docs_per_class(num_classes, 0.0);
    Matrix token_counts(num_classes, dim);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto c = labels[i];
        docs_per_class[c] += 1.0;
        for (const auto& e : counts[i].entries()) token_counts(c, e.index) += e.value;
    }

    NaiveBayesModel m;
    m.alpha = alpha;
    m.log_prior.resize(num_classes);
    m.log_likelihood = Matrix(num_classes, dim);
    const double n = static_cast<double>(counts.size());
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (docs_per_class[c] == 0.0) throw ModelError("class " + std::to_string(c) + " has no training documents");
        m.log_prior[c] = std::log(docs_per_class[c] / n);
        double total = 0.0;
        for (double v : token_counts.row(c)) total += v;
        const double denom = std::log(total + alpha * static_cast<double>(dim));
        for (std::size_t t = 0; t < dim; ++t) m.log_likelihood(c, t) = std::log(token_counts(c, t) + alpha) - denom;
    }
    return m;
}

std::vector<double> predict_log_posterior(const NaiveBayesModel& model, const SparseVector& counts) {
    std::vector<double> scores = model.log_prior;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        scores[c] += detail::sparse_dot(model.log_likelihood.row(c), counts);
    }
    return scores;
}

}  // namespace negclass
