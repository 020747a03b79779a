#include <cmath>

#include "negclass/error.hpp"
#include "negclass/models.hpp"
#include "negclass/random.hpp"
#include "training_common.hpp"

namespace negclass {

namespace {

// Folds a pending scale factor back into the weights once it gets small, so
// that updates divided by the scale stay well conditioned.
void renormalize(std::span<double> weights, double& scale) {
    if (scale >= 1e-9) return;
    for (auto& w : weights) w *= scale;
    scale = 1.0;
}

void check_finite(const LinearModel& m) {
    for (double w : m.weights.data()) {
        if (!std::isfinite(w)) throw ModelError("training diverged: non-finite weight");
    }
    for (double b : m.bias) {
        if (!std::isfinite(b)) throw ModelError("training diverged: non-finite bias");
    }
}

// Cross-entropy of `label` under softmax(scores).
double cross_entropy(std::span<const double> scores, std::size_t label) {
    double m = scores[0];
    for (double s : scores) m = std::max(m, s);
    double z = 0.0;
    for (double s : scores) z += std::exp(s - m);
    return std::log(z) + m - scores[label];
}

}  // namespace

std::vector<double> LinearModel::scores(const SparseVector& x) const {
    std::vector<double> s = bias;
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += detail::sparse_dot(weights.row(k), x);
    return s;
}

double logistic_objective(const LinearModel& model, std::span<const SparseVector> xs,
                          std::span<const std::size_t> labels, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) loss += cross_entropy(model.scores(xs[i]), labels[i]);
    loss /= static_cast<double>(xs.size());
    double sq = 0.0;
    for (double w : model.weights.data()) sq += w * w;
    return loss + 0.5 * l2 * sq;
}

LinearModel logistic_gradient(const LinearModel& model, std::span<const SparseVector> xs,
                              std::span<const std::size_t> labels, double l2) {
    LinearModel g;
    g.kind = model.kind;
    g.feature_kind = model.feature_kind;
    g.weights = Matrix(model.weights.rows(), model.weights.cols());
    g.bias.assign(model.bias.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto p = softmax(model.scores(xs[i]));
        p[labels[i]] -= 1.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            for (const auto& e : xs[i].entries()) g.weights(k, e.index) += inv_n * p[k] * e.value;
            g.bias[k] += inv_n * p[k];
        }
    }
    for (std::size_t j = 0; j < g.weights.data().size(); ++j) g.weights.data()[j] += l2 * model.weights.data()[j];
    return g;
}

LinearModel train_logistic(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                           std::size_t num_classes, const TrainConfig& config) {
    config.validate(ModelKind::logistic);
    const auto dim = detail::check_training_data(xs, labels, num_classes);

    // W = scale * U keeps the L2 shrinkage O(1) per step.
    Matrix u(num_classes, dim);
    double scale = 1.0;
    std::vector<double> bias(num_classes, 0.0);
    std::vector<double> z(num_classes);

    const double eta0 = config.learning_rate, lambda = config.l2_lambda;
    auto order = detail::identity_order(xs.size());
    Rng rng(config.seed);
    double t = 0.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (const auto i : order) {
            const auto& x = xs[i];
            const double eta = eta0 / (1.0 + eta0 * lambda * t);
            for (std::size_t k = 0; k < num_classes; ++k) z[k] = scale * detail::sparse_dot(u.row(k), x) + bias[k];
            const double loss = cross_entropy(z, labels[i]);
            if (!std::isfinite(loss)) {
                throw ModelError("training diverged: non-finite loss in epoch " + std::to_string(epoch + 1));
            }
            auto g = softmax(z);
            g[labels[i]] -= 1.0;

            scale *= 1.0 - eta * lambda;
            if (scale <= 0.0) {
                std::fill(u.data().begin(), u.data().end(), 0.0);
                scale = 1.0;
            }
            for (std::size_t k = 0; k < num_classes; ++k) {
                const double coef = eta * g[k] / scale;
                auto row = u.row(k);
                for (const auto& e : x.entries()) row[e.index] -= coef * e.value;
                bias[k] -= eta * g[k];
            }
            renormalize(u.data(), scale);
            t += 1.0;
        }
    }

    LinearModel m;
    m.kind = LinearKind::logistic;
    m.feature_kind = FeatureKind::tfidf;
    m.weights = std::move(u);
    for (auto& w : m.weights.data()) w *= scale;
    m.bias = std::move(bias);
    check_finite(m);
    return m;
}

HingeSubgradient hinge_subgradient(std::span<const double> weights, double bias, const SparseVector& x, int y,
                                   double l2) {
    HingeSubgradient g;
    g.weights.resize(weights.size());
    for (std::size_t j = 0; j < weights.size(); ++j) g.weights[j] = l2 * weights[j];
    g.bias = l2 * bias;
    const double margin = y * (detail::sparse_dot(weights, x) + bias);
    if (margin < 1.0) {
        for (const auto& e : x.entries()) g.weights[e.index] -= y * e.value;
        g.bias -= y;
    }
    return g;
}

LinearModel train_linear_svm(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                             std::size_t num_classes, const TrainConfig& config) {
    config.validate(ModelKind::svm);
    const auto dim = detail::check_training_data(xs, labels, num_classes);
    const double lambda = config.l2_lambda;

    LinearModel m;
    m.kind = LinearKind::svm;
    m.feature_kind = FeatureKind::tfidf;
    m.weights = Matrix(num_classes, dim);
    m.bias.assign(num_classes, 0.0);

    // Weights plus the bias as a trailing coordinate, stored as scale * u.
    std::vector<double> u(dim + 1);
    for (std::size_t k = 0; k < num_classes; ++k) {
        std::fill(u.begin(), u.end(), 0.0);
        double scale = 1.0;
        auto order = detail::identity_order(xs.size());
        Rng rng(mix_seed(config.seed, k));
        double t = 1.0;
        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            rng.shuffle(std::span<std::size_t>(order));
            for (const auto i : order) {
                const auto& x = xs[i];
                const double y = labels[i] == k ? 1.0 : -1.0;
                const double eta = 1.0 / (lambda * t);
                const double margin = y * scale * (detail::sparse_dot(u, x) + u[dim]);

                const double shrink = 1.0 - eta * lambda;
                if (shrink <= 0.0) {
                    std::fill(u.begin(), u.end(), 0.0);
                    scale = 1.0;
                } else {
                    scale *= shrink;
                }
                if (margin < 1.0) {
                    const double coef = eta * y / scale;
                    for (const auto& e : x.entries()) u[e.index] += coef * e.value;
                    u[dim] += coef;
                }
                renormalize(u, scale);
                t += 1.0;
            }
        }
        auto row = m.weights.row(k);
        for (std::size_t j = 0; j < dim; ++j) row[j] = scale * u[j];
        m.bias[k] = scale * u[dim];
    }
    check_finite(m);
    return m;
}

}  // namespace negclass
