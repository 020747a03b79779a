#pragma once

// Independent reference computations used as test oracles. None of these
// call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace negclass::oracle {

// Multinomial naive Bayes evaluated straight from the training documents
// (lists of token ids), multiplying probabilities in linear space. Returns
// log P(c) P(query | c) for every class.
inline std::vector<double> naive_bayes_log_joint(const std::vector<std::vector<std::size_t>>& docs,
                                                 const std::vector<std::size_t>& labels, std::size_t num_classes,
                                                 std::size_t vocab_size, double alpha,
                                                 const std::vector<std::size_t>& query) {
    std::vector<double> out(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        double n_c = 0.0, total = 0.0;
        std::vector<double> count(vocab_size, 0.0);
        for (std::size_t d = 0; d < docs.size(); ++d) {
            if (labels[d] != c) continue;
            n_c += 1.0;
            for (auto t : docs[d]) {
                count[t] += 1.0;
                total += 1.0;
            }
        }
        double joint = n_c / static_cast<double>(docs.size());
        for (auto t : query) joint *= (count[t] + alpha) / (total + alpha * static_cast<double>(vocab_size));
        out[c] = std::log(joint);
    }
    return out;
}

struct CountedMetrics {
    std::vector<double> precision, recall, f1;
    std::vector<double> support;
    double accuracy = 0.0;
    double macro_p = 0.0, macro_r = 0.0, macro_f1 = 0.0;
    double weighted_p = 0.0, weighted_r = 0.0, weighted_f1 = 0.0;
};

// Precision/recall/F1 by walking the documents once per class.
inline CountedMetrics count_metrics(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& predicted,
                                    std::size_t num_classes) {
    CountedMetrics m;
    const double n = static_cast<double>(truth.size());
    double correct = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i] ? 1.0 : 0.0;
    m.accuracy = correct / n;
    for (std::size_t c = 0; c < num_classes; ++c) {
        double tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] == c && predicted[i] == c) tp += 1;
            else if (predicted[i] == c) fp += 1;
            else if (truth[i] == c) fn += 1;
        }
        const double p = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
        const double r = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
        const double f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
        m.precision.push_back(p);
        m.recall.push_back(r);
        m.f1.push_back(f);
        m.support.push_back(tp + fn);
    }
    const double k = static_cast<double>(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        m.macro_p += m.precision[c] / k;
        m.macro_r += m.recall[c] / k;
        m.macro_f1 += m.f1[c] / k;
        m.weighted_p += m.support[c] / n * m.precision[c];
        m.weighted_r += m.support[c] / n * m.recall[c];
        m.weighted_f1 += m.support[c] / n * m.f1[c];
    }
    return m;
}

// Central difference of `objective` with respect to `param`, restoring it.
inline double central_difference(const std::function<double()>& objective, double& param, double step) {
    const double saved = param;
    param = saved + step;
    const double up = objective();
    param = saved - step;
    const double down = objective();
    param = saved;
    return (up - down) / (2.0 * step);
}

// |a - b| / max(|a|, |b|), or |a - b| when both are below `floor`.
inline double relative_error(double a, double b, double floor = 1e-8) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale < floor ? std::abs(a - b) : std::abs(a - b) / scale;
}

}  // namespace negclass::oracle
