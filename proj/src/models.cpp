#include "negclass/models.hpp"

#include <algorithm>
#include <cmath>

#include "negclass/error.hpp"

namespace negclass {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::naive_bayes: return "nb";
        case ModelKind::logistic: return "logreg";
        case ModelKind::svm: return "svm";
        case ModelKind::feedforward: return "ffnn";
    }
    return "?";
}

ModelKind model_kind_from_string(std::string_view s) {
    if (s == "nb") return ModelKind::naive_bayes;
    if (s == "logreg") return ModelKind::logistic;
    if (s == "svm") return ModelKind::svm;
    if (s == "ffnn") return ModelKind::feedforward;
    throw UsageError("unknown model kind '" + std::string(s) + "' (expected nb, logreg, svm or ffnn)");
}

FeatureKind feature_kind_for(ModelKind kind) {
    return (kind == ModelKind::logistic || kind == ModelKind::svm) ? FeatureKind::tfidf : FeatureKind::counts;
}

TrainConfig TrainConfig::defaults_for(ModelKind kind) {
    TrainConfig c;
    switch (kind) {
        case ModelKind::naive_bayes:
            c.nb_alpha = 1.0;
            break;
        case ModelKind::logistic:
            c.learning_rate = 0.1;
            c.l2_lambda = 1e-4;
            c.epochs = 20;
            break;
        case ModelKind::svm:
            c.l2_lambda = 1e-4;
            c.epochs = 20;
            break;
        case ModelKind::feedforward:
            c.hidden_units = 64;
            c.learning_rate = 0.05;
            c.epochs = 30;
            c.l2_lambda = 0.0;
            break;
    }
    return c;
}

void TrainConfig::validate(ModelKind kind) const {
    auto bad = [](const std::string& what) { throw ModelError("invalid training config: " + what); };
    switch (kind) {
        case ModelKind::naive_bayes:
            if (!(nb_alpha > 0.0) || !std::isfinite(nb_alpha)) bad("nb alpha must be positive");
            return;
        case ModelKind::feedforward:
            if (hidden_units < 1) bad("hidden_units must be at least 1");
            [[fallthrough]];
        case ModelKind::logistic:
            if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) bad("learning_rate must be positive");
            if (!(l2_lambda >= 0.0) || !std::isfinite(l2_lambda)) bad("l2_lambda must be nonnegative");
            break;
        case ModelKind::svm:
            if (!(l2_lambda > 0.0) || !std::isfinite(l2_lambda)) bad("l2_lambda must be positive for the SVM");
            break;
    }
    if (epochs < 1) bad("epochs must be at least 1");
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> p(scores.size());
    if (scores.empty()) return p;
    const double m = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        p[k] = std::exp(scores[k] - m);
        z += p[k];
    }
    for (auto& v : p) v /= z;
    return p;
}

std::size_t argmax(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k) {
        if (scores[k] > scores[best]) best = k;
    }
    return best;
}

namespace {

FeatureKind expected_kind(const ModelParams& model) {
    if (const auto* lin = std::get_if<LinearModel>(&model)) return lin->feature_kind;
    return FeatureKind::counts;
}

std::size_t dimension_of(const ModelParams& model) {
    return std::visit([](const auto& m) { return m.dimension(); }, model);
}

}  // namespace

Prediction predict(const ModelParams& model, const FeaturizedDoc& doc) {
    if (doc.kind != expected_kind(model)) {
        throw DataError(std::string("feature kind mismatch: model expects ") + to_string(expected_kind(model)) +
                        ", got " + to_string(doc.kind));
    }
    if (doc.vector.dimension() != dimension_of(model)) {
        throw DataError("feature dimension " + std::to_string(doc.vector.dimension()) + " does not match model dimension " +
                        std::to_string(dimension_of(model)));
    }
    Prediction p;
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
        p.scores = predict_log_posterior(*nb, doc.vector);
    } else if (const auto* lin = std::get_if<LinearModel>(&model)) {
        p.scores = lin->scores(doc.vector);
    } else {
        p.scores = std::get<FeedForwardModel>(model).logits(doc.vector);
    }
    p.label = argmax(p.scores);
    return p;
}

std::vector<Prediction> TrainedModel::predict_corpus(const Corpus& corpus) const {
    std::vector<Prediction> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus) out.push_back(predict_text(doc.text));
    return out;
}

TrainedModel train_model(ModelKind kind, const Corpus& train, const CategorySet& categories, const TrainConfig& config,
                         const VocabularyOptions& vocab_options) {
    config.validate(kind);
    if (train.empty()) throw ModelError("training corpus is empty");

    std::vector<Tokens> tokens;
    Labels labels;
    tokens.reserve(train.size());
    for (const auto& doc : train) {
        if (!doc.label) throw DataError("training document '" + doc.id + "' is unlabeled");
        labels.push_back(categories.index_of(*doc.label));
        tokens.push_back(analyze(doc.text));
    }

    TrainedModel m;
    m.kind = kind;
    m.categories = categories;
    m.config = config;
    m.featurizer = Featurizer::fit(feature_kind_for(kind), tokens, vocab_options);

    std::vector<SparseVector> xs;
    xs.reserve(tokens.size());
    for (const auto& t : tokens) xs.push_back(m.featurizer.featurize(t).vector);

    const auto k = categories.size();
    switch (kind) {
        case ModelKind::naive_bayes:
        {
            std::vector<std::size_t> n(k, 0);
            for (auto l : labels) ++n[l];
            for (std::size_t c = 0; c < k; ++c) {
                if (n[c] == 0) throw ModelError("class '" + categories.name(c) + "' has no training documents");
            }
            m.params = train_naive_bayes(xs, labels, k, config.nb_alpha);
        }
            break;
        case ModelKind::logistic:
            m.params = train_logistic(xs, labels, k, config);
            break;
        case ModelKind::svm:
            m.params = train_linear_svm(xs, labels, k, config);
            break;
        case ModelKind::feedforward:
            m.params = train_feedforward(xs, labels, k, config);
            break;
    }
    return m;
}

}  // namespace negclass
