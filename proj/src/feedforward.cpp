#include <cmath>

#include "negclass/error.hpp"
#include "negclass/models.hpp"
#include "negclass/random.hpp"
#include "training_common.hpp"

namespace negclass {

namespace {

struct ForwardPass {
    std::vector<double> pre;     // H, before the rectifier
    std::vector<double> hidden;  // H
    std::vector<double> logits;  // K
};

ForwardPass forward(const FeedForwardModel& m, const SparseVector& x) {
    const auto h = m.hidden_units(), k = m.num_classes();
    ForwardPass f;
    f.pre = m.b1;
    for (std::size_t j = 0; j < h; ++j) f.pre[j] += detail::sparse_dot(m.w1.row(j), x);
    f.hidden.resize(h);
    for (std::size_t j = 0; j < h; ++j) f.hidden[j] = f.pre[j] > 0.0 ? f.pre[j] : 0.0;
    f.logits = m.b2;
    for (std::size_t c = 0; c < k; ++c) {
        const auto row = m.w2.row(c);
        for (std::size_t j = 0; j < h; ++j) f.logits[c] += row[j] * f.hidden[j];
    }
    return f;
}

// Output-layer error (softmax - onehot) and hidden-layer error, both for one
// example. Returns the example's cross-entropy.
double backward(const FeedForwardModel& m, const ForwardPass& f, std::size_t label, std::vector<double>& d_logits,
                std::vector<double>& d_pre) {
    d_logits = softmax(f.logits);
    const double loss = -std::log(d_logits[label]);
    d_logits[label] -= 1.0;
    const auto h = m.hidden_units();
    d_pre.assign(h, 0.0);
    for (std::size_t c = 0; c < d_logits.size(); ++c) {
        const auto row = m.w2.row(c);
        for (std::size_t j = 0; j < h; ++j) d_pre[j] += row[j] * d_logits[c];
    }
    for (std::size_t j = 0; j < h; ++j) {
        if (!(f.pre[j] > 0.0)) d_pre[j] = 0.0;
    }
    return loss;
}

double squared_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return s;
}

}  // namespace

std::vector<double> FeedForwardModel::hidden(const SparseVector& x) const { return forward(*this, x).hidden; }

std::vector<double> FeedForwardModel::logits(const SparseVector& x) const { return forward(*this, x).logits; }

FeedForwardModel init_feedforward(std::size_t dimension, std::size_t hidden_units, std::size_t num_classes,
                                  std::uint64_t seed) {
    FeedForwardModel m;
    m.w1 = Matrix(hidden_units, dimension);
    m.b1.assign(hidden_units, 0.0);
    m.w2 = Matrix(num_classes, hidden_units);
    m.b2.assign(num_classes, 0.0);
    Rng rng(seed);
    const double a1 = std::sqrt(6.0 / static_cast<double>(dimension + hidden_units));
    for (auto& w : m.w1.data()) w = rng.uniform(-a1, a1);
    const double a2 = std::sqrt(6.0 / static_cast<double>(hidden_units + num_classes));
    for (auto& w : m.w2.data()) w = rng.uniform(-a2, a2);
    return m;
}

double feedforward_objective(const FeedForwardModel& model, std::span<const SparseVector> xs,
                             std::span<const std::size_t> labels, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto logits = model.logits(xs[i]);
        const auto p = softmax(logits);
        loss -= std::log(p[labels[i]]);
    }
    loss /= static_cast<double>(xs.size());
    return loss + 0.5 * l2 * (squared_norm(model.w1) + squared_norm(model.w2));
}

FeedForwardModel feedforward_gradient(const FeedForwardModel& model, std::span<const SparseVector> xs,
                                      std::span<const std::size_t> labels, double l2) {
    const auto h = model.hidden_units(), k = model.num_classes();
    FeedForwardModel g;
    g.w1 = Matrix(h, model.dimension());
    g.b1.assign(h, 0.0);
    g.w2 = Matrix(k, h);
    g.b2.assign(k, 0.0);

    const double inv_n = 1.0 / static_cast<double>(xs.size());
    std::vector<double> d_logits, d_pre;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto f = forward(model, xs[i]);
        backward(model, f, labels[i], d_logits, d_pre);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < h; ++j) g.w2(c, j) += inv_n * d_logits[c] * f.hidden[j];
            g.b2[c] += inv_n * d_logits[c];
        }
        for (std::size_t j = 0; j < h; ++j) {
            for (const auto& e : xs[i].entries()) g.w1(j, e.index) += inv_n * d_pre[j] * e.value;
            g.b1[j] += inv_n * d_pre[j];
        }
    }
    for (std::size_t j = 0; j < g.w1.data().size(); ++j) g.w1.data()[j] += l2 * model.w1.data()[j];
    for (std::size_t j = 0; j < g.w2.data().size(); ++j) g.w2.data()[j] += l2 * model.w2.data()[j];
    return g;
}

FeedForwardModel train_feedforward(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                                   std::size_t num_classes, const TrainConfig& config) {
    config.validate(ModelKind::feedforward);
    const auto dim = detail::check_training_data(xs, labels, num_classes);
    auto m = init_feedforward(dim, config.hidden_units, num_classes, config.seed);
    const auto h = m.hidden_units();
    const double eta = config.learning_rate, lambda = config.l2_lambda;

    auto order = detail::identity_order(xs.size());
    Rng rng(mix_seed(config.seed, 1));
    std::vector<double> d_logits, d_pre;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (const auto i : order) {
            const auto& x = xs[i];
            const auto f = forward(m, x);
            const double loss = backward(m, f, labels[i], d_logits, d_pre);
            if (!std::isfinite(loss)) {
                throw ModelError("training diverged: non-finite loss in epoch " + std::to_string(epoch + 1));
            }
            if (lambda > 0.0) {
                const double shrink = 1.0 - eta * lambda;
                for (auto& w : m.w1.data()) w *= shrink;
                for (auto& w : m.w2.data()) w *= shrink;
            }
            for (std::size_t c = 0; c < num_classes; ++c) {
                auto row = m.w2.row(c);
                for (std::size_t j = 0; j < h; ++j) row[j] -= eta * d_logits[c] * f.hidden[j];
                m.b2[c] -= eta * d_logits[c];
            }
            for (std::size_t j = 0; j < h; ++j) {
                if (d_pre[j] == 0.0) continue;
                auto row = m.w1.row(j);
                for (const auto& e : x.entries()) row[e.index] -= eta * d_pre[j] * e.value;
                m.b1[j] -= eta * d_pre[j];
            }
        }
    }
    for (const auto* part : {&m.w1.data(), &m.w2.data(), &m.b1, &m.b2}) {
        for (double v : *part) {
            if (!std::isfinite(v)) throw ModelError("training diverged: non-finite parameter");
        }
    }
    return m;
}

}  // namespace negclass
