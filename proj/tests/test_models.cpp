#include <doctest.h>

#include <cmath>
#include <numeric>

#include "negclass/error.hpp"
#include "negclass/models.hpp"
#include "negclass/random.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace negclass;

namespace {

using E = SparseVector::Entry;

SparseVector sv(std::size_t dim, std::vector<E> entries) { return SparseVector(dim, std::move(entries)); }

// A docs "x x", "x y"; B doc "y y" over vocabulary {x, y}.
struct ToyNb {
    std::vector<SparseVector> xs = {sv(2, {{0, 2.0}}), sv(2, {{0, 1.0}, {1, 1.0}}), sv(2, {{1, 2.0}})};
    Labels labels = {0, 0, 1};
};

// Four points, two classes, separable by the sign of feature 0 vs feature 1.
struct Separable {
    std::vector<SparseVector> xs = {sv(3, {{0, 1.0}}), sv(3, {{0, 0.8}, {2, 0.6}}), sv(3, {{1, 1.0}}),
                                    sv(3, {{1, 0.8}, {2, 0.6}})};
    Labels labels = {0, 0, 1, 1};
};

template <typename Scorer>
double training_accuracy(const std::vector<SparseVector>& xs, const Labels& labels, Scorer score) {
    double ok = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) ok += argmax(score(xs[i])) == labels[i] ? 1 : 0;
    return ok / static_cast<double>(xs.size());
}

SparseVector random_sparse(Rng& rng, std::size_t dim, bool counts) {
    std::vector<E> e;
    for (std::size_t j = 0; j < dim; ++j) {
        if (rng.uniform() < 0.5) e.push_back({j, counts ? static_cast<double>(1 + rng.below(3)) : rng.uniform(0.1, 1.0)});
    }
    return SparseVector(dim, std::move(e));
}

Corpus small_synthetic(double signal, std::uint64_t seed) {
    SynthOptions o;
    o.signal_prob = signal;
    o.seed = seed;
    o.keyword_pool_size = 8;
    o.noise_pool_size = 40;
    DistributionSpec spec({{"Politics", 30, 0}, {"Injustice", 30, 0}, {"Crime", 30, 0}, {"Economic", 30, 0},
                           {"Failure", 30, 0}, {"Terrorism", 30, 0}, {"Social Aspects", 30, 0}, {"Corruption", 30, 0}});
    return synthesize_corpus(spec, o);
}

TrainConfig quick_config(ModelKind kind) {
    auto c = TrainConfig::defaults_for(kind);
    if (kind == ModelKind::feedforward) {
        c.hidden_units = 16;
        c.epochs = 10;
    }
    return c;
}

constexpr ModelKind kAllKinds[] = {ModelKind::naive_bayes, ModelKind::logistic, ModelKind::svm, ModelKind::feedforward};

}  // namespace

TEST_CASE("naive Bayes hand-computed parameters") {
    const ToyNb t;
    const auto m = train_naive_bayes(t.xs, t.labels, 2, 1.0);
    CHECK(std::exp(m.log_prior[0]) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(std::exp(m.log_likelihood(0, 0)) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    CHECK(std::exp(m.log_likelihood(0, 1)) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(std::exp(m.log_likelihood(1, 0)) == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
    CHECK(std::exp(m.log_likelihood(1, 1)) == doctest::Approx(3.0 / 4.0).epsilon(1e-12));

    const auto s = predict_log_posterior(m, sv(2, {{0, 1.0}}));
    CHECK(s[0] == doctest::Approx(std::log(2.0 / 3.0 * 2.0 / 3.0)).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(std::log(1.0 / 3.0 * 1.0 / 4.0)).epsilon(1e-12));
    CHECK(argmax(s) == 0);

    // Empty document: priors decide.
    CHECK(predict_log_posterior(m, SparseVector(2)) == m.log_prior);
}

TEST_CASE("naive Bayes degenerate cases") {
    const auto single = train_naive_bayes(std::vector<SparseVector>{sv(2, {{0, 1.0}})}, Labels{0}, 1, 1.0);
    CHECK(single.log_prior[0] == 0.0);

    // Mirrored data gives mirrored likelihoods.
    const std::vector<SparseVector> xs = {sv(2, {{0, 3.0}, {1, 1.0}}), sv(2, {{0, 1.0}, {1, 3.0}})};
    const auto m = train_naive_bayes(xs, Labels{0, 1}, 2, 0.5);
    CHECK(m.log_likelihood(0, 0) == m.log_likelihood(1, 1));
    CHECK(m.log_likelihood(0, 1) == m.log_likelihood(1, 0));

    // Identical classes tie and resolve to index 0.
    const auto same = train_naive_bayes(std::vector<SparseVector>{sv(2, {{0, 1.0}}), sv(2, {{0, 1.0}})}, Labels{0, 1}, 2, 1.0);
    CHECK(predict(same, {FeatureKind::counts, sv(2, {{1, 4.0}})}).label == 0);

    CHECK_THROWS_AS(train_naive_bayes(xs, Labels{0, 0}, 2, 1.0), ModelError);
    CHECK_THROWS_AS(train_naive_bayes(xs, Labels{0, 1}, 2, 0.0), ModelError);
    CHECK_THROWS_AS(train_naive_bayes(xs, Labels{0, 2}, 2, 1.0), ModelError);
}

TEST_CASE("naive Bayes distributions are normalized and match the brute-force oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t v = 1 + rng.below(5), k = 1 + rng.below(3);
        const std::size_t n = k + rng.below(20 - k + 1);
        std::vector<std::vector<std::size_t>> docs(n);
        Labels labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = i < k ? i : rng.below(k);
            for (std::uint64_t j = 0, len = rng.below(6); j < len; ++j) docs[i].push_back(rng.below(v));
        }
        auto to_counts = [&](const std::vector<std::size_t>& ids) {
            std::vector<double> dense(v, 0.0);
            for (auto id : ids) dense[id] += 1.0;
            std::vector<E> e;
            for (std::size_t j = 0; j < v; ++j) {
                if (dense[j] != 0.0) e.push_back({j, dense[j]});
            }
            return SparseVector(v, e);
        };
        std::vector<SparseVector> xs;
        for (const auto& d : docs) xs.push_back(to_counts(d));
        const double alpha = trial % 2 ? 1.0 : 0.5;
        const auto m = train_naive_bayes(xs, labels, k, alpha);

        double prior_mass = 0;
        for (double lp : m.log_prior) prior_mass += std::exp(lp);
        REQUIRE(std::abs(prior_mass - 1.0) <= 1e-9);
        for (std::size_t c = 0; c < k; ++c) {
            double mass = 0;
            for (double l : m.log_likelihood.row(c)) mass += std::exp(l);
            REQUIRE(std::abs(mass - 1.0) <= 1e-9);
        }

        std::vector<std::size_t> query;
        for (std::uint64_t j = 0, len = rng.below(6); j < len; ++j) query.push_back(rng.below(v));
        const auto expected = oracle::naive_bayes_log_joint(docs, labels, k, v, alpha, query);
        const auto got = predict_log_posterior(m, to_counts(query));
        for (std::size_t c = 0; c < k; ++c) REQUIRE(std::abs(got[c] - expected[c]) <= 1e-9);

        const auto post = softmax(got);
        REQUIRE(std::abs(std::accumulate(post.begin(), post.end(), 0.0) - 1.0) <= 1e-9);
    }
}

TEST_CASE("softmax and argmax") {
    const std::vector<double> zeros(5, 0.0);
    for (double p : softmax(zeros)) CHECK(p == doctest::Approx(0.2).epsilon(1e-15));
    const auto big = softmax(std::vector<double>{1000.0, 999.0, -1000.0});
    CHECK(std::abs(big[0] + big[1] + big[2] - 1.0) <= 1e-12);
    CHECK(argmax(std::vector<double>{1.0, 3.0, 3.0}) == 1);
    CHECK(argmax(std::vector<double>{-2.0}) == 0);

    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> s(1 + rng.below(8));
        for (auto& x : s) x = rng.uniform(-30, 30);
        const auto p = softmax(s);
        double sum = 0;
        for (double x : p) {
            REQUIRE(x > 0.0);
            sum += x;
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("logistic regression") {
    SUBCASE("zero weights give uniform probabilities and label 0") {
        LinearModel m;
        m.weights = Matrix(4, 3);
        m.bias.assign(4, 0.0);
        const auto x = sv(3, {{1, 0.5}});
        for (double p : softmax(m.scores(x))) CHECK(p == 0.25);
        CHECK(predict(m, {FeatureKind::tfidf, x}).label == 0);
    }
    SUBCASE("separable toy set is fit perfectly") {
        const Separable t;
        const auto m = train_logistic(t.xs, t.labels, 2, TrainConfig::defaults_for(ModelKind::logistic));
        CHECK(training_accuracy(t.xs, t.labels, [&](const SparseVector& x) { return m.scores(x); }) == 1.0);
    }
    SUBCASE("analytic gradient matches central differences on a random 3-doc batch") {
        Rng rng(31);
        for (int point = 0; point < 5; ++point) {
            std::vector<SparseVector> xs;
            for (int i = 0; i < 3; ++i) xs.push_back(random_sparse(rng, 4, false));
            const Labels labels = {0, 1, 2};
            LinearModel m;
            m.weights = Matrix(3, 4);
            for (auto& w : m.weights.data()) w = rng.uniform(-1, 1);
            m.bias = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const double l2 = 0.01;
            const auto g = logistic_gradient(m, xs, labels, l2);
            auto f = [&] { return logistic_objective(m, xs, labels, l2); };
            for (std::size_t j = 0; j < m.weights.data().size(); ++j) {
                const double fd = oracle::central_difference(f, m.weights.data()[j], 1e-6);
                CHECK(oracle::relative_error(fd, g.weights.data()[j]) <= 1e-4);
            }
            for (std::size_t k = 0; k < 3; ++k) {
                const double fd = oracle::central_difference(f, m.bias[k], 1e-6);
                CHECK(oracle::relative_error(fd, g.bias[k]) <= 1e-4);
            }
        }
    }
    SUBCASE("training is deterministic and the seed matters") {
        const auto corpus = small_synthetic(0.8, 3);
        std::vector<SparseVector> xs;
        Labels labels;
        const auto f = Featurizer::fit(FeatureKind::tfidf, [&] {
            std::vector<Tokens> d;
            for (const auto& doc : corpus) d.push_back(analyze(doc.text));
            return d;
        }(), {});
        for (const auto& doc : corpus) {
            xs.push_back(f.featurize_text(doc.text).vector);
            labels.push_back(CategorySet::negativity().index_of(*doc.label));
        }
        auto c = TrainConfig::defaults_for(ModelKind::logistic);
        c.epochs = 3;
        const auto a = train_logistic(xs, labels, 8, c);
        const auto b = train_logistic(xs, labels, 8, c);
        CHECK(a.weights == b.weights);
        CHECK(a.bias == b.bias);
        c.seed = 2;
        CHECK_FALSE(train_logistic(xs, labels, 8, c).weights == a.weights);
    }
    SUBCASE("divergence is reported") {
        const std::vector<SparseVector> xs = {sv(2, {{0, 1e150}}), sv(2, {{1, 1e150}})};
        auto c = TrainConfig::defaults_for(ModelKind::logistic);
        c.learning_rate = 1e300;
        c.l2_lambda = 0.0;
        CHECK_THROWS_AS(train_logistic(xs, Labels{0, 1}, 2, c), ModelError);
    }
}

TEST_CASE("linear SVM") {
    SUBCASE("separable toy set is fit perfectly") {
        const Separable t;
        const auto m = train_linear_svm(t.xs, t.labels, 2, TrainConfig::defaults_for(ModelKind::svm));
        CHECK(m.kind == LinearKind::svm);
        CHECK(training_accuracy(t.xs, t.labels, [&](const SparseVector& x) { return m.scores(x); }) == 1.0);
    }
    SUBCASE("all-identical labels predict that class everywhere") {
        const Separable t;
        const Labels all_one(t.xs.size(), 1);
        const auto m = train_linear_svm(t.xs, all_one, 3, TrainConfig::defaults_for(ModelKind::svm));
        for (const auto& x : t.xs) CHECK(argmax(m.scores(x)) == 1);
        CHECK(argmax(m.scores(SparseVector(3))) == 1);
    }
    SUBCASE("hinge subgradient") {
        const std::vector<double> w = {0.5, -2.0, 1.5};
        const auto x = sv(3, {{0, 1.0}, {2, 1.0}});  // w.x + b = 2.25
        const auto outside = hinge_subgradient(w, 0.25, x, +1, 0.1);
        for (std::size_t j = 0; j < 3; ++j) CHECK(outside.weights[j] == 0.1 * w[j]);
        CHECK(outside.bias == 0.1 * 0.25);

        const auto violated = hinge_subgradient(w, 0.25, x, -1, 0.1);
        CHECK(violated.weights[0] == doctest::Approx(0.05 + 1.0));
        CHECK(violated.weights[1] == doctest::Approx(-0.2));
        CHECK(violated.weights[2] == doctest::Approx(0.15 + 1.0));
        CHECK(violated.bias == doctest::Approx(0.025 + 1.0));
    }
    SUBCASE("lambda must be positive") {
        const Separable t;
        auto c = TrainConfig::defaults_for(ModelKind::svm);
        c.l2_lambda = 0.0;
        CHECK_THROWS_AS(train_linear_svm(t.xs, t.labels, 2, c), ModelError);
    }
}

TEST_CASE("feed-forward network") {
    SUBCASE("zero input passes biases through") {
        auto m = init_feedforward(4, 3, 2, 9);
        m.b2 = {0.3, -0.7};
        const auto h = m.hidden(SparseVector(4));
        for (double v : h) CHECK(v == 0.0);
        CHECK(m.logits(SparseVector(4)) == m.b2);
        m.b1 = {1.0, -1.0, 0.5};
        CHECK(m.hidden(SparseVector(4)) == std::vector<double>{1.0, 0.0, 0.5});
    }
    SUBCASE("initialization scale and determinism") {
        const auto m = init_feedforward(10, 6, 3, 5);
        const double a1 = std::sqrt(6.0 / 16.0), a2 = std::sqrt(6.0 / 9.0);
        for (double w : m.w1.data()) CHECK(std::abs(w) <= a1);
        for (double w : m.w2.data()) CHECK(std::abs(w) <= a2);
        CHECK(m.w1.rows() == 6);
        CHECK(m.w1.cols() == 10);
        CHECK(init_feedforward(10, 6, 3, 5).w1 == m.w1);
        CHECK_FALSE(init_feedforward(10, 6, 3, 6).w1 == m.w1);
    }
    SUBCASE("backprop matches central differences on a 2x3x2 network") {
        Rng rng(41);
        for (int point = 0; point < 5; ++point) {
            std::vector<SparseVector> xs = {sv(2, {{0, 1.0}, {1, 2.0}}), sv(2, {{1, 1.0}}), sv(2, {{0, 3.0}})};
            const Labels labels = {0, 1, 1};
            auto m = init_feedforward(2, 3, 2, 100 + point);
            for (auto& b : m.b1) b = rng.uniform(0.1, 0.5);  // keep units away from the kink
            for (auto& b : m.b2) b = rng.uniform(-0.5, 0.5);
            const double l2 = 0.001;
            const auto g = feedforward_gradient(m, xs, labels, l2);
            auto f = [&] { return feedforward_objective(m, xs, labels, l2); };
            auto check_all = [&](std::vector<double>& params, const std::vector<double>& grads) {
                for (std::size_t j = 0; j < params.size(); ++j) {
                    const double fd = oracle::central_difference(f, params[j], 1e-6);
                    CHECK(oracle::relative_error(fd, grads[j]) <= 1e-4);
                }
            };
            check_all(m.w1.data(), g.w1.data());
            check_all(m.b1, g.b1);
            check_all(m.w2.data(), g.w2.data());
            check_all(m.b2, g.b2);
        }
    }
    SUBCASE("XOR with four hidden units") {
        const std::vector<SparseVector> xs = {SparseVector(2), sv(2, {{0, 1.0}}), sv(2, {{1, 1.0}}),
                                              sv(2, {{0, 1.0}, {1, 1.0}})};
        const Labels labels = {0, 1, 1, 0};
        auto c = TrainConfig::defaults_for(ModelKind::feedforward);
        c.hidden_units = 4;
        c.epochs = 500;
        c.seed = 2;
        const auto m = train_feedforward(xs, labels, 2, c);
        CHECK(training_accuracy(xs, labels, [&](const SparseVector& x) { return m.logits(x); }) == 1.0);

        // Rectifier units can die from some starting points; most seeds still solve it.
        int solved = 0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            c.seed = seed;
            const auto s = train_feedforward(xs, labels, 2, c);
            solved += training_accuracy(xs, labels, [&](const SparseVector& x) { return s.logits(x); }) == 1.0;
        }
        CHECK(solved >= 30);
    }
    SUBCASE("divergence is reported") {
        const std::vector<SparseVector> xs = {sv(2, {{0, 50.0}}), sv(2, {{1, 50.0}})};
        auto c = TrainConfig::defaults_for(ModelKind::feedforward);
        c.learning_rate = 1e300;
        c.hidden_units = 4;
        CHECK_THROWS_AS(train_feedforward(xs, Labels{0, 1}, 2, c), ModelError);
    }
}

TEST_CASE("TrainConfig validation and kind names") {
    for (auto kind : kAllKinds) {
        CHECK_NOTHROW(TrainConfig::defaults_for(kind).validate(kind));
        CHECK(model_kind_from_string(to_string(kind)) == kind);
    }
    CHECK(feature_kind_for(ModelKind::naive_bayes) == FeatureKind::counts);
    CHECK(feature_kind_for(ModelKind::logistic) == FeatureKind::tfidf);
    CHECK(feature_kind_for(ModelKind::svm) == FeatureKind::tfidf);
    CHECK(feature_kind_for(ModelKind::feedforward) == FeatureKind::counts);
    CHECK_THROWS_AS(model_kind_from_string("forest"), UsageError);

    auto c = TrainConfig::defaults_for(ModelKind::logistic);
    c.epochs = 0;
    CHECK_THROWS_AS(c.validate(ModelKind::logistic), ModelError);
    c = TrainConfig::defaults_for(ModelKind::logistic);
    c.learning_rate = -1;
    CHECK_THROWS_AS(c.validate(ModelKind::logistic), ModelError);
    c = TrainConfig::defaults_for(ModelKind::feedforward);
    c.hidden_units = 0;
    CHECK_THROWS_AS(c.validate(ModelKind::feedforward), ModelError);
    c = TrainConfig::defaults_for(ModelKind::naive_bayes);
    c.nb_alpha = 0;
    CHECK_THROWS_AS(c.validate(ModelKind::naive_bayes), ModelError);
}

TEST_CASE("predict checks kind and dimension and is consistent across calls") {
    const ToyNb t;
    const ModelParams nb = train_naive_bayes(t.xs, t.labels, 2, 1.0);
    CHECK_THROWS_AS(predict(nb, {FeatureKind::tfidf, sv(2, {{0, 1.0}})}), DataError);
    CHECK_THROWS_AS(predict(nb, {FeatureKind::counts, sv(3, {{0, 1.0}})}), DataError);
    const auto p = predict(nb, {FeatureKind::counts, sv(2, {{0, 1.0}})});
    CHECK(p.scores == predict_log_posterior(std::get<NaiveBayesModel>(nb), sv(2, {{0, 1.0}})));

    const auto corpus = small_synthetic(0.8, 4);
    for (auto kind : kAllKinds) {
        const auto model = train_model(kind, corpus, CategorySet::negativity(), quick_config(kind));
        const auto batch = model.predict_corpus(corpus);
        REQUIRE(batch.size() == corpus.size());
        for (std::size_t i = 0; i < 100; ++i) {
            const auto one = model.predict_text(corpus[i].text);
            CHECK(one.label == batch[i].label);
            CHECK(one.scores == batch[i].scores);
        }
    }
}

TEST_CASE("adding a constant to every class score leaves the label unchanged") {
    const auto corpus = small_synthetic(0.6, 8);
    for (auto kind : kAllKinds) {
        auto model = train_model(kind, corpus, CategorySet::negativity(), quick_config(kind));
        const auto before = model.predict_corpus(corpus);
        std::visit(
            [](auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, NaiveBayesModel>) {
                    for (auto& x : p.log_prior) x += 3.5;
                } else if constexpr (std::is_same_v<T, LinearModel>) {
                    for (auto& x : p.bias) x += 3.5;
                } else {
                    for (auto& x : p.b2) x += 3.5;
                }
            },
            model.params);
        const auto after = model.predict_corpus(corpus);
        for (std::size_t i = 0; i < corpus.size(); ++i) REQUIRE(after[i].label == before[i].label);
    }
}

TEST_CASE("train_model learns the synthetic task and is bit-deterministic") {
    const auto corpus = small_synthetic(1.0, 9);
    for (auto kind : kAllKinds) {
        const auto a = train_model(kind, corpus, CategorySet::negativity(), quick_config(kind));
        const auto b = train_model(kind, corpus, CategorySet::negativity(), quick_config(kind));
        CHECK(serialize_model(a) == serialize_model(b));
        CHECK(a.featurizer.kind == feature_kind_for(kind));
        std::size_t ok = 0;
        const auto preds = a.predict_corpus(corpus);
        for (std::size_t i = 0; i < corpus.size(); ++i) ok += a.categories.name(preds[i].label) == *corpus[i].label;
        CHECK(static_cast<double>(ok) / static_cast<double>(corpus.size()) >= 0.99);
    }
}

TEST_CASE("train_model input errors") {
    auto corpus = small_synthetic(0.8, 10);
    std::erase_if(corpus, [](const Document& d) { return *d.label == "Terrorism"; });
    CHECK_THROWS_WITH_AS(train_model(ModelKind::naive_bayes, corpus, CategorySet::negativity(), TrainConfig{}),
                         doctest::Contains("Terrorism"), ModelError);
    CHECK_THROWS_AS(train_model(ModelKind::logistic, {}, CategorySet::negativity(), TrainConfig{}), ModelError);
    corpus[0].label.reset();
    CHECK_THROWS_AS(train_model(ModelKind::svm, corpus, CategorySet::negativity(), TrainConfig{}), DataError);
}

TEST_CASE("model files round-trip exactly") {
    const auto corpus = small_synthetic(0.8, 11);
    testing::TempDir dir;
    for (auto kind : kAllKinds) {
        const auto model = train_model(kind, corpus, CategorySet::negativity(), quick_config(kind));
        const auto path = dir / (std::string(to_string(kind)) + ".bin");
        save_model(model, path);
        const auto loaded = load_model(path);
        CHECK(loaded.kind == kind);
        CHECK(loaded.config == model.config);
        CHECK(loaded.categories.names() == model.categories.names());
        CHECK(serialize_model(loaded) == serialize_model(model));
        const auto a = model.predict_corpus(corpus), b = loaded.predict_corpus(corpus);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            REQUIRE(a[i].label == b[i].label);
            REQUIRE(a[i].scores == b[i].scores);
        }
    }
}

TEST_CASE("corrupted model files raise distinct errors") {
    const auto model = train_model(ModelKind::naive_bayes, small_synthetic(0.8, 12), CategorySet::negativity(), TrainConfig{});
    const auto bytes = serialize_model(model);

    CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() - 10)), ModelIntegrityError);
    CHECK_THROWS_AS(deserialize_model(bytes.substr(0, 10)), ModelIntegrityError);
    CHECK_THROWS_AS(deserialize_model(bytes + "x"), ModelIntegrityError);
    CHECK_THROWS_AS(deserialize_model("garbage\n{}"), ModelIntegrityError);

    auto future = bytes;
    future.replace(0, std::string("NEGCLASS-MODEL 1").size(), "NEGCLASS-MODEL 7");
    try {
        deserialize_model(future);
        FAIL("expected a version error");
    } catch (const ModelVersionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find('7') != std::string::npos);
        CHECK(msg.find('1') != std::string::npos);
    }

    auto flipped = bytes;
    const auto pos = flipped.find("\"kind\":\"nb\"");
    REQUIRE(pos != std::string::npos);
    flipped[pos + 9] = 'x';
    CHECK_THROWS_AS(deserialize_model(flipped), ModelChecksumError);

    testing::TempDir dir;
    CHECK_THROWS_AS(load_model(dir / "missing.bin"), ModelError);
}
