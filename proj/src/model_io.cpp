#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "negclass/error.hpp"
#include "negclass/models.hpp"
#include "text_format.hpp"

namespace negclass {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kMagic = "NEGCLASS-MODEL";

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.data().size()) throw ModelIntegrityError("model file: matrix data has the wrong size");
    m.data() = std::move(data);
    return m;
}

const char* linear_kind_name(LinearKind k) { return k == LinearKind::logistic ? "logistic" : "svm"; }

json params_to_json(const ModelParams& params) {
    if (const auto* nb = std::get_if<NaiveBayesModel>(&params)) {
        return json{{"alpha", nb->alpha}, {"log_prior", nb->log_prior}, {"log_likelihood", matrix_to_json(nb->log_likelihood)}};
    }
    if (const auto* lin = std::get_if<LinearModel>(&params)) {
        return json{{"linear_kind", linear_kind_name(lin->kind)},
                    {"weights", matrix_to_json(lin->weights)},
                    {"bias", lin->bias}};
    }
    const auto& ff = std::get<FeedForwardModel>(params);
    return json{{"activation", "relu"},
                {"w1", matrix_to_json(ff.w1)},
                {"b1", ff.b1},
                {"w2", matrix_to_json(ff.w2)},
                {"b2", ff.b2}};
}

ModelParams params_from_json(ModelKind kind, FeatureKind feature_kind, const json& j) {
    switch (kind) {
        case ModelKind::naive_bayes: {
            NaiveBayesModel nb;
            nb.alpha = j.at("alpha").get<double>();
            nb.log_prior = j.at("log_prior").get<std::vector<double>>();
            nb.log_likelihood = matrix_from_json(j.at("log_likelihood"));
            if (nb.log_likelihood.rows() != nb.log_prior.size()) throw ModelIntegrityError("model file: class count mismatch");
            return nb;
        }
        case ModelKind::logistic:
        case ModelKind::svm: {
            LinearModel lin;
            const auto lk = j.at("linear_kind").get<std::string>();
            lin.kind = lk == "logistic" ? LinearKind::logistic : LinearKind::svm;
            if ((kind == ModelKind::logistic) != (lin.kind == LinearKind::logistic)) {
                throw ModelIntegrityError("model file: linear kind '" + lk + "' contradicts model kind");
            }
            lin.feature_kind = feature_kind;
            lin.weights = matrix_from_json(j.at("weights"));
            lin.bias = j.at("bias").get<std::vector<double>>();
            if (lin.weights.rows() != lin.bias.size()) throw ModelIntegrityError("model file: class count mismatch");
            return lin;
        }
        case ModelKind::feedforward: {
            FeedForwardModel ff;
            if (j.at("activation").get<std::string>() != "relu") throw ModelIntegrityError("model file: unknown activation");
            ff.w1 = matrix_from_json(j.at("w1"));
            ff.b1 = j.at("b1").get<std::vector<double>>();
            ff.w2 = matrix_from_json(j.at("w2"));
            ff.b2 = j.at("b2").get<std::vector<double>>();
            if (ff.w1.rows() != ff.b1.size() || ff.w2.cols() != ff.b1.size() || ff.w2.rows() != ff.b2.size()) {
                throw ModelIntegrityError("model file: layer shapes disagree");
            }
            return ff;
        }
    }
    throw ModelIntegrityError("model file: unknown model kind");
}

json config_to_json(const TrainConfig& c) {
    return json{{"epochs", c.epochs},         {"learning_rate", c.learning_rate}, {"l2_lambda", c.l2_lambda},
                {"seed", c.seed},             {"hidden_units", c.hidden_units},   {"nb_alpha", c.nb_alpha}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.epochs = j.at("epochs").get<std::size_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.l2_lambda = j.at("l2_lambda").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.hidden_units = j.at("hidden_units").get<std::size_t>();
    c.nb_alpha = j.at("nb_alpha").get<double>();
    return c;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
    json payload;
    payload["format_version"] = kModelFormatVersion;
    payload["kind"] = to_string(model.kind);
    payload["feature_kind"] = to_string(model.featurizer.kind);
    payload["categories"] = model.categories.names();
    payload["train_seed"] = model.config.seed;
    payload["config"] = config_to_json(model.config);
    payload["vocabulary"] = json{{"tokens", model.featurizer.vocabulary.tokens()},
                                 {"document_frequency", model.featurizer.vocabulary.document_frequencies()},
                                 {"n_docs", model.featurizer.vocabulary.n_docs_fitted()}};
    if (model.featurizer.idf) {
        payload["idf"] = json{{"values", model.featurizer.idf->values()}, {"n_docs", model.featurizer.idf->n_docs()}};
    }
    payload["params"] = params_to_json(model.params);

    const std::string body = payload.dump();
    return std::string(kMagic) + " " + std::to_string(kModelFormatVersion) + " " + std::to_string(body.size()) + " " +
           hex64(fnv1a64(body)) + "\n" + body;
}

TrainedModel deserialize_model(std::string_view bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string_view::npos) throw ModelIntegrityError("model file: missing header (truncated?)");
    std::istringstream header{std::string(bytes.substr(0, nl))};
    std::string magic, version_text, length_text, checksum_text, extra;
    header >> magic >> version_text >> length_text >> checksum_text;
    if (magic != kMagic || checksum_text.size() != 16 || (header >> extra)) {
        throw ModelIntegrityError("model file: malformed header");
    }
    const auto version = detail::parse_int<int>(version_text);
    const auto length = detail::parse_int<std::size_t>(length_text);
    if (!version || !length) throw ModelIntegrityError("model file: malformed header");
    if (*version != kModelFormatVersion) {
        throw ModelVersionError("model file format version " + std::to_string(*version) +
                                " is not supported (this build reads version " + std::to_string(kModelFormatVersion) + ")");
    }

    const auto body = bytes.substr(nl + 1);
    if (body.size() < *length) {
        throw ModelIntegrityError("model file truncated: expected " + std::to_string(*length) + " payload bytes, found " +
                                  std::to_string(body.size()));
    }
    if (body.size() > *length) throw ModelIntegrityError("model file has trailing bytes after the payload");
    if (hex64(fnv1a64(body)) != checksum_text) {
        throw ModelChecksumError("model file checksum mismatch (stored " + checksum_text + ", computed " +
                                 hex64(fnv1a64(body)) + ")");
    }

    try {
        const auto j = json::parse(body);
        if (j.at("format_version").get<int>() != *version) throw ModelIntegrityError("model file: version fields disagree");

        TrainedModel m;
        m.kind = model_kind_from_string(j.at("kind").get<std::string>());
        m.categories = CategorySet(j.at("categories").get<std::vector<std::string>>());
        m.config = config_from_json(j.at("config"));
        if (j.at("train_seed").get<std::uint64_t>() != m.config.seed) throw ModelIntegrityError("model file: seed fields disagree");

        m.featurizer.kind = feature_kind_from_string(j.at("feature_kind").get<std::string>());
        const auto& v = j.at("vocabulary");
        m.featurizer.vocabulary = Vocabulary(v.at("tokens").get<std::vector<std::string>>(),
                                             v.at("document_frequency").get<std::vector<std::size_t>>(),
                                             v.at("n_docs").get<std::size_t>());
        if (j.contains("idf")) {
            m.featurizer.idf = IdfWeights(j["idf"].at("values").get<std::vector<double>>(), j["idf"].at("n_docs").get<std::size_t>());
            if (m.featurizer.idf->size() != m.featurizer.vocabulary.size()) throw ModelIntegrityError("model file: idf size mismatch");
        }
        if ((m.featurizer.kind == FeatureKind::tfidf) != m.featurizer.idf.has_value()) {
            throw ModelIntegrityError("model file: idf presence contradicts feature kind");
        }
        m.params = params_from_json(m.kind, m.featurizer.kind, j.at("params"));

        const auto dim = std::visit([](const auto& p) { return p.dimension(); }, m.params);
        const auto classes = std::visit([](const auto& p) { return p.num_classes(); }, m.params);
        if (dim != m.featurizer.vocabulary.size()) throw ModelIntegrityError("model file: parameter and vocabulary sizes differ");
        if (classes != m.categories.size()) throw ModelIntegrityError("model file: parameter and category counts differ");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ModelIntegrityError(std::string("model file: invalid payload: ") + e.what());
    } catch (const DataError& e) {
        throw ModelIntegrityError(std::string("model file: invalid payload: ") + e.what());
    } catch (const UsageError& e) {
        throw ModelIntegrityError(std::string("model file: invalid payload: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write model file '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ModelError("write failed for model file '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file '" + path.string() + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace negclass
