#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "negclass/category.hpp"
#include "negclass/corpus.hpp"
#include "negclass/features.hpp"

namespace negclass {

// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class ModelKind { naive_bayes, logistic, svm, feedforward };

// Short names used on the command line and in model files: nb, logreg, svm, ffnn.
const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);
// Counts for naive Bayes and the network, tf-idf for the linear models.
FeatureKind feature_kind_for(ModelKind kind);

struct TrainConfig {
    std::size_t epochs = 20;
    double learning_rate = 0.1;
    double l2_lambda = 1e-4;
    std::uint64_t seed = 1;
    std::size_t hidden_units = 64;
    double nb_alpha = 1.0;

    // Per-kind defaults: logreg eta 0.1 / lambda 1e-4 / 20 epochs, svm lambda
    // 1e-4 / 20 epochs, ffnn H 64 / eta 0.05 / 30 epochs / no L2, nb alpha 1.
    static TrainConfig defaults_for(ModelKind kind);
    // Throws ModelError describing the first invalid field for `kind`.
    void validate(ModelKind kind) const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

using Labels = std::vector<std::size_t>;

// --- naive Bayes -------------------------------------------------------------

struct NaiveBayesModel {
    std::vector<double> log_prior;  // K
    Matrix log_likelihood;          // K x V
    double alpha = 1.0;

    std::size_t num_classes() const { return log_prior.size(); }
    std::size_t dimension() const { return log_likelihood.cols(); }
};

// Multinomial naive Bayes with additive smoothing on count vectors. Throws
// ModelError when a class has no training documents.
NaiveBayesModel train_naive_bayes(std::span<const SparseVector> counts, std::span<const std::size_t> labels,
                                  std::size_t num_classes, double alpha);

// log P(c) + sum_t count(t) log P(t | c) for every class.
std::vector<double> predict_log_posterior(const NaiveBayesModel& model, const SparseVector& counts);

// --- linear models -------------------------------------------------------------

enum class LinearKind { logistic, svm };

struct LinearModel {
    LinearKind kind = LinearKind::logistic;
    FeatureKind feature_kind = FeatureKind::tfidf;
    Matrix weights;             // K x V
    std::vector<double> bias;   // K

    std::size_t num_classes() const { return bias.size(); }
    std::size_t dimension() const { return weights.cols(); }
    std::vector<double> scores(const SparseVector& x) const;
};

// Mean softmax cross-entropy plus (l2 / 2) * ||W||^2; the bias is not
// penalized.
double logistic_objective(const LinearModel& model, std::span<const SparseVector> xs,
                          std::span<const std::size_t> labels, double l2);
// Analytic gradient of logistic_objective, shaped like the model.
LinearModel logistic_gradient(const LinearModel& model, std::span<const SparseVector> xs,
                              std::span<const std::size_t> labels, double l2);

// Per-example SGD from zero weights with a seeded shuffle each epoch and step
// eta_t = eta0 / (1 + eta0 * lambda * t). Throws ModelError on divergence.
LinearModel train_logistic(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                           std::size_t num_classes, const TrainConfig& config);

struct HingeSubgradient {
    std::vector<double> weights;
    double bias = 0.0;
};

// Subgradient of (l2 / 2) * ||(w, b)||^2 + max(0, 1 - y (w.x + b)) for y in
// {-1, +1}. The bias acts as the weight of a constant feature.
HingeSubgradient hinge_subgradient(std::span<const double> weights, double bias, const SparseVector& x, int y,
                                   double l2);

// One-vs-rest Pegasos: machine k sees label +1 for class k and -1 otherwise,
// with step 1 / (lambda * t) and its own shuffle stream mix_seed(seed, k).
LinearModel train_linear_svm(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                             std::size_t num_classes, const TrainConfig& config);

// --- feed-forward network ---------------------------------------------------------

// One hidden rectifier layer followed by a softmax output.
struct FeedForwardModel {
    Matrix w1;               // H x V
    std::vector<double> b1;  // H
    Matrix w2;               // K x H
    std::vector<double> b2;  // K

    std::size_t hidden_units() const { return b1.size(); }
    std::size_t num_classes() const { return b2.size(); }
    std::size_t dimension() const { return w1.cols(); }
    std::vector<double> hidden(const SparseVector& x) const;
    std::vector<double> logits(const SparseVector& x) const;
};

// Uniform(-a, a) weights with a = sqrt(6 / (fan_in + fan_out)), zero biases.
FeedForwardModel init_feedforward(std::size_t dimension, std::size_t hidden_units, std::size_t num_classes,
                                  std::uint64_t seed);

// Mean cross-entropy plus (l2 / 2) * (||W1||^2 + ||W2||^2).
double feedforward_objective(const FeedForwardModel& model, std::span<const SparseVector> xs,
                             std::span<const std::size_t> labels, double l2);
// Backpropagated gradient of feedforward_objective, shaped like the model.
FeedForwardModel feedforward_gradient(const FeedForwardModel& model, std::span<const SparseVector> xs,
                                      std::span<const std::size_t> labels, double l2);

FeedForwardModel train_feedforward(std::span<const SparseVector> xs, std::span<const std::size_t> labels,
                                   std::size_t num_classes, const TrainConfig& config);

// --- shared inference ---------------------------------------------------------------

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> scores);
// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const double> scores);

using ModelParams = std::variant<NaiveBayesModel, LinearModel, FeedForwardModel>;

struct Prediction {
    std::size_t label = 0;
    std::vector<double> scores;  // NB log-joint, linear raw scores, network logits
};

// Throws DataError if the document's feature kind or dimension does not match.
Prediction predict(const ModelParams& model, const FeaturizedDoc& doc);

struct TrainedModel {
    ModelKind kind = ModelKind::naive_bayes;
    CategorySet categories;
    Featurizer featurizer;
    TrainConfig config;
    ModelParams params;

    Prediction predict_tokens(const Tokens& tokens) const { return predict(params, featurizer.featurize(tokens)); }
    Prediction predict_text(std::string_view text) const { return predict_tokens(analyze(text)); }
    std::vector<Prediction> predict_corpus(const Corpus& corpus) const;
};

// Featurizes the (labeled) training corpus with the kind's feature pairing
// and trains the requested model.
TrainedModel train_model(ModelKind kind, const Corpus& train, const CategorySet& categories, const TrainConfig& config,
                         const VocabularyOptions& vocab_options = {});

// Model files: a header line `NEGCLASS-MODEL <version> <payload bytes>
// <fnv1a64 hex>` followed by a JSON payload holding kind, feature kind,
// categories, vocabulary, idf, config (including seed) and all parameters.
inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
// Throws ModelVersionError, ModelIntegrityError or ModelChecksumError.
TrainedModel deserialize_model(std::string_view bytes);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace negclass
