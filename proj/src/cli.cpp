#include "negclass/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "negclass/corpus.hpp"
#include "negclass/error.hpp"
#include "negclass/eval.hpp"
#include "negclass/geomap.hpp"
#include "negclass/models.hpp"
#include "negclass/polarity.hpp"
#include "negclass/textprep.hpp"
#include "text_format.hpp"

namespace negclass::cli {

namespace {

namespace fs = std::filesystem;

// --- config schema -------------------------------------------------------------

enum class ValueType { real, size, u64, choice, text };

struct KeySpec {
    const char* key;
    const char* default_value;
    ValueType type;
    double lo = 0.0;           // real: inclusive lower bound; size: minimum
    double hi = 0.0;           // real: upper bound
    bool hi_open = false;      // real: exclude hi
    bool lo_open = false;      // real: exclude lo
    std::vector<std::string> choices = {};
};

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> specs = {
        {"synth.spec", "table1", ValueType::text},
        {"synth.seed", "42", ValueType::u64},
        {"synth.keyword_pool_size", "20", ValueType::size, 1},
        {"synth.noise_pool_size", "200", ValueType::size, 1},
        {"synth.signal_prob", "0.8", ValueType::real, 0.0, 1.0},
        {"synth.min_len", "5", ValueType::size, 0},
        {"synth.max_len", "20", ValueType::size, 0},
        {"synth.locations", "default", ValueType::text},
        {"split.test_fraction", "0.25", ValueType::real, 0.0, 1.0, true},
        {"split.seed", "7", ValueType::u64},
        {"filter.english_threshold", "0.7", ValueType::real, 0.0, 1.0},
        {"gate.mode", "lexicon", ValueType::choice, 0, 0, false, false, {"lexicon", "column"}},
        {"gate.threshold", "0", ValueType::real, -1e300, 1e300},
        {"features.min_df", "2", ValueType::size, 1},
        {"features.max_features", "20000", ValueType::size, 1},
        {"train.seed", "1", ValueType::u64},
        {"nb.alpha", "1.0", ValueType::real, 0.0, 1e300, false, true},
        {"logreg.epochs", "20", ValueType::size, 1},
        {"logreg.learning_rate", "0.1", ValueType::real, 0.0, 1e300, false, true},
        {"logreg.l2_lambda", "1e-4", ValueType::real, 0.0, 1e300},
        {"svm.epochs", "20", ValueType::size, 1},
        {"svm.l2_lambda", "1e-4", ValueType::real, 0.0, 1e300, false, true},
        {"ffnn.hidden_units", "64", ValueType::size, 1},
        {"ffnn.learning_rate", "0.05", ValueType::real, 0.0, 1e300, false, true},
        {"ffnn.epochs", "30", ValueType::size, 1},
        {"ffnn.l2_lambda", "0", ValueType::real, 0.0, 1e300},
        {"report.format", "text", ValueType::choice, 0, 0, false, false, {"text", "csv", "json"}},
        {"geo.mode", "auto", ValueType::choice, 0, 0, false, false, {"auto", "named", "grid"}},
        {"geo.cell_deg", "0.5", ValueType::real, 0.0, 1e300, false, true},
        {"pipeline.workdir", "negclass-out", ValueType::text},
        {"pipeline.models", "nb,logreg,svm,ffnn", ValueType::text},
        {"pipeline.geo_model", "best", ValueType::text},
    };
    return specs;
}

const KeySpec* find_spec(const std::string& key) {
    for (const auto& s : schema()) {
        if (key == s.key) return &s;
    }
    return nullptr;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto t = detail::trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

void check_value(const KeySpec& spec, const std::string& value) {
    auto bad = [&](const std::string& why) {
        throw UsageError("config key '" + std::string(spec.key) + "': " + why + " (got '" + value + "')");
    };
    switch (spec.type) {
        case ValueType::real: {
            auto v = detail::parse_double(value);
            if (!v || !std::isfinite(*v)) bad("expected a number");
            if (*v < spec.lo || (spec.lo_open && *v == spec.lo)) bad("below allowed range");
            if (*v > spec.hi || (spec.hi_open && *v == spec.hi)) bad("above allowed range");
            break;
        }
        case ValueType::size: {
            auto v = detail::parse_int<std::size_t>(value);
            if (!v) bad("expected a nonnegative integer");
            if (static_cast<double>(*v) < spec.lo) bad("must be at least " + detail::fixed(spec.lo, 0));
            break;
        }
        case ValueType::u64:
            if (!detail::parse_int<std::uint64_t>(value)) bad("expected an unsigned 64-bit integer");
            break;
        case ValueType::choice:
            if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) bad("not an allowed value");
            break;
        case ValueType::text:
            if (value.empty()) bad("must not be empty");
            break;
    }
    if (std::string_view(spec.key) == "pipeline.models") {
        const auto models = split_list(value);
        if (models.empty()) bad("no models listed");
        for (const auto& m : models) model_kind_from_string(m);
    }
}

}  // namespace

PipelineConfig::PipelineConfig() {
    for (const auto& s : schema()) values_[s.key] = s.default_value;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
    const auto* spec = find_spec(key);
    if (!spec) throw UsageError("unknown config key '" + key + "'");
    check_value(*spec, value);
    values_[key] = value;
}

void PipelineConfig::merge_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            set(std::string(detail::trim(t.substr(0, eq))), std::string(detail::trim(t.substr(eq + 1))));
        } catch (const UsageError& e) {
            throw UsageError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (detail::parse_int<std::size_t>(get("synth.min_len")) > detail::parse_int<std::size_t>(get("synth.max_len"))) {
        throw UsageError(origin + ": synth.min_len exceeds synth.max_len");
    }
}

void PipelineConfig::merge_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    merge_text(ss.str(), path.string());
}

const std::string& PipelineConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("unknown config key '" + key + "'");
    return it->second;
}

double PipelineConfig::get_double(const std::string& key) const { return *detail::parse_double(get(key)); }
std::size_t PipelineConfig::get_size(const std::string& key) const { return *detail::parse_int<std::size_t>(get(key)); }
std::uint64_t PipelineConfig::get_u64(const std::string& key) const { return *detail::parse_int<std::uint64_t>(get(key)); }

std::vector<std::string> PipelineConfig::keys() {
    std::vector<std::string> out;
    for (const auto& s : schema()) out.emplace_back(s.key);
    return out;
}

namespace {

// --- pipeline stages shared by subcommands and `pipeline` ---------------------------

CorpusFormat resolve_format(const std::optional<std::string>& flag, const fs::path& path) {
    if (!flag) return format_for_path(path);
    if (*flag == "csv") return CorpusFormat::csv;
    if (*flag == "jsonl") return CorpusFormat::jsonl;
    throw UsageError("unknown corpus format '" + *flag + "' (expected csv or jsonl)");
}

void write_corpus_file(const fs::path& path, const Corpus& corpus) { save_corpus(path, corpus, format_for_path(path)); }
Corpus read_corpus_file(const fs::path& path) { return load_corpus(path, format_for_path(path)); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DistributionSpec resolve_spec(const std::string& spec) {
    if (spec == "table1") return DistributionSpec::table1();
    return load_distribution_spec(spec);
}

std::vector<NamedLocation> resolve_locations(const std::string& value) {
    if (value == "default") return default_locations();
    if (value == "none") return {};
    return load_locations(value);
}

SynthOptions synth_options(const PipelineConfig& cfg) {
    SynthOptions o;
    o.keyword_pool_size = cfg.get_size("synth.keyword_pool_size");
    o.noise_pool_size = cfg.get_size("synth.noise_pool_size");
    o.signal_prob = cfg.get_double("synth.signal_prob");
    o.min_len = cfg.get_size("synth.min_len");
    o.max_len = cfg.get_size("synth.max_len");
    o.seed = cfg.get_u64("synth.seed");
    o.locations = resolve_locations(cfg.get("synth.locations"));
    return o;
}

TrainConfig train_config(ModelKind kind, const PipelineConfig& cfg) {
    auto c = TrainConfig::defaults_for(kind);
    c.seed = cfg.get_u64("train.seed");
    switch (kind) {
        case ModelKind::naive_bayes:
            c.nb_alpha = cfg.get_double("nb.alpha");
            break;
        case ModelKind::logistic:
            c.epochs = cfg.get_size("logreg.epochs");
            c.learning_rate = cfg.get_double("logreg.learning_rate");
            c.l2_lambda = cfg.get_double("logreg.l2_lambda");
            break;
        case ModelKind::svm:
            c.epochs = cfg.get_size("svm.epochs");
            c.l2_lambda = cfg.get_double("svm.l2_lambda");
            break;
        case ModelKind::feedforward:
            c.hidden_units = cfg.get_size("ffnn.hidden_units");
            c.learning_rate = cfg.get_double("ffnn.learning_rate");
            c.epochs = cfg.get_size("ffnn.epochs");
            c.l2_lambda = cfg.get_double("ffnn.l2_lambda");
            break;
    }
    return c;
}

VocabularyOptions vocab_options(const PipelineConfig& cfg) {
    return {cfg.get_size("features.min_df"), cfg.get_size("features.max_features")};
}

Corpus relabel_with_predictions(const Corpus& corpus, const TrainedModel& model, std::vector<Prediction>* keep) {
    auto preds = model.predict_corpus(corpus);
    Corpus out = corpus;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].label = model.categories.name(preds[i].label);
    if (keep) *keep = std::move(preds);
    return out;
}

EvalReport evaluate_model(const TrainedModel& model, const Corpus& test, const std::string& name) {
    Labels truth, predicted;
    for (const auto& doc : test) {
        if (!doc.label) throw DataError("evaluation document '" + doc.id + "' is unlabeled");
        truth.push_back(model.categories.index_of(*doc.label));
        predicted.push_back(model.predict_text(doc.text).label);
    }
    return evaluate(name, model.categories, truth, predicted);
}

std::string render_report(const EvalReport& report, const std::string& format) {
    if (format == "csv") return render_csv(report);
    if (format == "json") return to_json(report).dump(2) + "\n";
    return render_text(report);
}

GeoAggregation map_corpus(const Corpus& predicted, const PipelineConfig& cfg) {
    auto mode = cfg.get("geo.mode");
    if (mode == "auto") mode = location_name_coverage(predicted) >= 0.9 ? "named" : "grid";
    Grouping grouping = NamedGrouping{};
    if (mode == "grid") grouping = GridGrouping{cfg.get_double("geo.cell_deg")};
    return aggregate_by_location(predicted, CategorySet::negativity(), grouping);
}

std::string scores_csv(const Corpus& corpus, const std::vector<Prediction>& preds, const CategorySet& categories) {
    std::ostringstream os;
    os << "id,predicted";
    for (const auto& n : categories.names()) os << ',' << '"' << n << '"';
    os << '\n';
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        os << '"' << corpus[i].id << '"' << ',' << '"' << categories.name(preds[i].label) << '"';
        for (double s : preds[i].scores) os << ',' << detail::shortest(s);
        os << '\n';
    }
    return os.str();
}

struct Context {
    PipelineConfig cfg;
    std::ostream& out;
    std::ostream& err;
};

int run_pipeline(Context& ctx, const fs::path& workdir) {
    auto& cfg = ctx.cfg;
    fs::create_directories(workdir);

    const auto corpus = synthesize_corpus(resolve_spec(cfg.get("synth.spec")), synth_options(cfg));
    write_corpus_file(workdir / "corpus.jsonl", corpus);
    write_text(workdir / "distribution.txt", render_distribution(class_distribution(corpus)));

    const auto split = stratified_split(corpus, cfg.get_double("split.test_fraction"), cfg.get_u64("split.seed"));
    write_corpus_file(workdir / "train.jsonl", split.train);
    write_corpus_file(workdir / "test.jsonl", split.test);
    ctx.err << "pipeline: " << corpus.size() << " documents, " << split.train.size() << " train / "
            << split.test.size() << " test\n";

    std::vector<std::pair<std::string, EvalReport>> reports;
    std::map<std::string, TrainedModel> models;
    for (const auto& name : split_list(cfg.get("pipeline.models"))) {
        const auto kind = model_kind_from_string(name);
        auto model = train_model(kind, split.train, CategorySet::negativity(), train_config(kind, cfg), vocab_options(cfg));
        save_model(model, workdir / ("model-" + name + ".bin"));
        auto report = evaluate_model(model, split.test, name);
        write_text(workdir / ("report-" + name + ".txt"), render_text(report));
        write_text(workdir / ("report-" + name + ".json"), to_json(report).dump(2) + "\n");
        ctx.err << "pipeline: " << name << " test accuracy " << detail::fixed(report.summary.accuracy, 4) << '\n';
        reports.emplace_back(name, std::move(report));
        models.emplace(name, std::move(model));
    }
    const auto rows = compare_models(reports);
    const auto table = render_comparison(rows);
    write_text(workdir / "comparison.txt", table);
    ctx.out << table;

    std::string geo_model = cfg.get("pipeline.geo_model");
    if (geo_model == "best") geo_model = rows.front().model;
    auto it = models.find(geo_model);
    if (it == models.end()) throw UsageError("pipeline.geo_model '" + geo_model + "' is not among pipeline.models");
    const auto predicted = relabel_with_predictions(split.test, it->second, nullptr);
    write_corpus_file(workdir / "predictions.jsonl", predicted);
    const auto geo = map_corpus(predicted, cfg);
    emit_geojson(geo.aggregates, CategorySet::negativity(), workdir / "map.geojson");
    ctx.err << "pipeline: mapped " << geo.aggregates.size() << " locations with " << geo_model << ", skipped "
            << geo.skipped << " documents\n";
    return kSuccess;
}

// Records a flag value to be copied into the config after parsing.
class Overrides {
public:
    CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto value = std::make_shared<std::optional<std::string>>();
        holders_.push_back({key, value});
        return app->add_option(flag, *value, help + " [config: " + key + "]");
    }

    void apply(PipelineConfig& cfg) const {
        for (const auto& [key, value] : holders_) {
            if (*value) cfg.set(key, **value);
        }
    }

private:
    std::vector<std::pair<std::string, std::shared_ptr<std::optional<std::string>>>> holders_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-stage negativity classification: polarity gate, then an 8-category classifier", "negclass"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);

    Overrides overrides;
    std::string input, output, extra_out, extra_out2, aux_path, name;
    std::optional<std::string> in_format, report_format;
    std::vector<std::string> report_paths;
    bool show_distribution = false;

    auto* ingest = app.add_subcommand("ingest", "Validate a CSV/JSONL corpus and rewrite it");
    ingest->add_option("--input", input, "Corpus to read")->required();
    ingest->add_option("--format", in_format, "Input format (csv|jsonl); default from extension");
    ingest->add_option("--out", output, "Output corpus (.csv or .jsonl)")->required();
    ingest->add_flag("--distribution", show_distribution, "Print the class distribution of labeled input");

    auto* adjudicate_cmd = app.add_subcommand("adjudicate", "Resolve three expert labels by 2-of-3 majority");
    adjudicate_cmd->add_option("--input", input, "Corpus with expert labels")->required();
    adjudicate_cmd->add_option("--out", output, "Accepted, labeled documents")->required();
    adjudicate_cmd->add_option("--rejects", extra_out, "Documents without a majority")->required();

    auto* filter = app.add_subcommand("filter-lang", "Keep documents whose dictionary ratio reaches a threshold");
    filter->add_option("--input", input, "Corpus to filter")->required();
    filter->add_option("--dict", aux_path, "Word list, one word per line")->required()->check(CLI::ExistingFile);
    overrides.add(filter, "--threshold", "filter.english_threshold", "Minimum in-dictionary token share");
    filter->add_option("--out", output, "Kept documents")->required();
    filter->add_option("--dropped", extra_out, "Dropped documents");

    auto* gate = app.add_subcommand("gate", "Select negative documents");
    gate->add_option("--input", input, "Corpus to gate")->required();
    overrides.add(gate, "--mode", "gate.mode", "lexicon or column");
    gate->add_option("--lexicon", aux_path, "token<TAB>pos|neg lexicon (lexicon mode)");
    overrides.add(gate, "--threshold", "gate.threshold", "Keep documents scoring strictly below");
    gate->add_option("--out", output, "Negative documents")->required();
    gate->add_option("--dropped", extra_out, "Remaining documents");

    auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
    split_cmd->add_option("--input", input, "Labeled corpus")->required();
    overrides.add(split_cmd, "--test-fraction", "split.test_fraction", "Per-class test share in [0, 1)");
    overrides.add(split_cmd, "--seed", "split.seed", "Shuffle seed");
    split_cmd->add_option("--train-out", output, "Training corpus")->required();
    split_cmd->add_option("--test-out", extra_out, "Test corpus")->required();

    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
    overrides.add(synth, "--spec", "synth.spec", "'table1' or a category,train_count,test_count CSV");
    overrides.add(synth, "--seed", "synth.seed", "Generator seed");
    overrides.add(synth, "--keyword-pool", "synth.keyword_pool_size", "Keywords per category");
    overrides.add(synth, "--noise-pool", "synth.noise_pool_size", "Shared noise tokens");
    overrides.add(synth, "--signal-prob", "synth.signal_prob", "Probability a token is a keyword");
    overrides.add(synth, "--min-len", "synth.min_len", "Minimum tokens per document");
    overrides.add(synth, "--max-len", "synth.max_len", "Maximum tokens per document");
    overrides.add(synth, "--locations", "synth.locations", "'default', 'none' or a name,lat,lon CSV");
    synth->add_option("--out", output, "Output corpus")->required();
    synth->add_flag("--distribution", show_distribution, "Print the class distribution");

    auto* train = app.add_subcommand("train", "Train one model");
    std::string model_name;
    train->add_option("--model", model_name, "nb, logreg, svm or ffnn")->required();
    train->add_option("--input", input, "Labeled training corpus")->required();
    train->add_option("--out", output, "Model file to write")->required();
    overrides.add(train, "--seed", "train.seed", "Training seed");
    overrides.add(train, "--min-df", "features.min_df", "Minimum document frequency");
    overrides.add(train, "--max-features", "features.max_features", "Vocabulary cap");

    auto* predict_cmd = app.add_subcommand("predict", "Label documents with a trained model");
    predict_cmd->add_option("--model", aux_path, "Model file")->required();
    predict_cmd->add_option("--input", input, "Corpus to label")->required();
    predict_cmd->add_option("--out", output, "Corpus with predicted labels")->required();
    predict_cmd->add_option("--scores", extra_out, "Optional per-class score CSV");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Per-class precision/recall/F1 report");
    evaluate_cmd->add_option("--model", aux_path, "Model file")->required();
    evaluate_cmd->add_option("--input", input, "Labeled test corpus")->required();
    evaluate_cmd->add_option("--out", output, "Report file (default: standard output)");
    overrides.add(evaluate_cmd, "--format", "report.format", "text, csv or json");
    evaluate_cmd->add_option("--name", name, "Model name in the report (default: model kind)");

    auto* compare = app.add_subcommand("compare", "Rank JSON evaluation reports by accuracy");
    compare->add_option("--reports", report_paths, "JSON reports written by evaluate --format json")->required();
    compare->add_option("--out", output, "Table file (default: standard output)");

    auto* geomap = app.add_subcommand("geomap", "Aggregate labeled documents by location into GeoJSON");
    geomap->add_option("--input", input, "Corpus whose labels are mapped (e.g. predict output)")->required();
    geomap->add_option("--out", output, "GeoJSON file")->required();
    overrides.add(geomap, "--mode", "geo.mode", "auto, named or grid");
    overrides.add(geomap, "--cell", "geo.cell_deg", "Grid cell size in degrees");

    auto* pipeline = app.add_subcommand("pipeline", "synth -> split -> train all -> evaluate -> compare -> geomap");
    overrides.add(pipeline, "--workdir", "pipeline.workdir", "Output directory");
    overrides.add(pipeline, "--seed", "synth.seed", "Synthetic corpus seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        Context ctx{PipelineConfig{}, out, err};
        if (const char* env = std::getenv("NEGCLASS_CONFIG"); env && *env) ctx.cfg.merge_file(env);
        if (config_path) ctx.cfg.merge_file(*config_path);
        overrides.apply(ctx.cfg);
        auto& cfg = ctx.cfg;

        if (ingest->parsed()) {
            const auto corpus = load_corpus(input, resolve_format(in_format, input));
            write_corpus_file(output, corpus);
            if (show_distribution) out << render_distribution(class_distribution(corpus));
            err << "ingest: " << corpus.size() << " documents\n";
        } else if (adjudicate_cmd->parsed()) {
            const auto result = adjudicate_corpus(read_corpus_file(input));
            write_corpus_file(output, result.labeled);
            write_corpus_file(extra_out, result.rejected);
            err << "adjudicate: " << result.labeled.size() << " accepted, " << result.rejected.size() << " rejected\n";
        } else if (filter->parsed()) {
            const auto part =
                filter_english(read_corpus_file(input), Dictionary::load(aux_path), cfg.get_double("filter.english_threshold"));
            write_corpus_file(output, part.kept);
            if (!extra_out.empty()) write_corpus_file(extra_out, part.dropped);
            err << "filter-lang: kept " << part.kept.size() << ", dropped " << part.dropped.size() << '\n';
        } else if (gate->parsed()) {
            const auto corpus = read_corpus_file(input);
            Partition part;
            if (cfg.get("gate.mode") == "column") {
                part = gate_negative(corpus, ColumnGate{});
            } else {
                if (aux_path.empty()) throw UsageError("gate: lexicon mode requires --lexicon");
                const auto lexicon = PolarityLexicon::load(aux_path);
                part = gate_negative(corpus, LexiconGate{&lexicon, cfg.get_double("gate.threshold")});
            }
            write_corpus_file(output, part.kept);
            if (!extra_out.empty()) write_corpus_file(extra_out, part.dropped);
            err << "gate: " << part.kept.size() << " negative, " << part.dropped.size() << " other\n";
        } else if (split_cmd->parsed()) {
            const auto s = stratified_split(read_corpus_file(input), cfg.get_double("split.test_fraction"),
                                            cfg.get_u64("split.seed"));
            write_corpus_file(output, s.train);
            write_corpus_file(extra_out, s.test);
            err << "split: " << s.train.size() << " train, " << s.test.size() << " test\n";
        } else if (synth->parsed()) {
            const auto corpus = synthesize_corpus(resolve_spec(cfg.get("synth.spec")), synth_options(cfg));
            write_corpus_file(output, corpus);
            if (show_distribution) out << render_distribution(class_distribution(corpus));
            err << "synth: " << corpus.size() << " documents\n";
        } else if (train->parsed()) {
            const auto kind = model_kind_from_string(model_name);
            const auto model = train_model(kind, read_corpus_file(input), CategorySet::negativity(),
                                           train_config(kind, cfg), vocab_options(cfg));
            save_model(model, output);
            err << "train: " << model_name << " on " << model.featurizer.dimension() << " features\n";
        } else if (predict_cmd->parsed()) {
            const auto model = load_model(aux_path);
            const auto corpus = read_corpus_file(input);
            std::vector<Prediction> preds;
            write_corpus_file(output, relabel_with_predictions(corpus, model, &preds));
            if (!extra_out.empty()) write_text(extra_out, scores_csv(corpus, preds, model.categories));
        } else if (evaluate_cmd->parsed()) {
            const auto model = load_model(aux_path);
            const auto report = evaluate_model(model, read_corpus_file(input), name.empty() ? to_string(model.kind) : name);
            const auto text = render_report(report, cfg.get("report.format"));
            if (output.empty()) out << text;
            else write_text(output, text);
        } else if (compare->parsed()) {
            std::vector<std::pair<std::string, EvalReport>> reports;
            for (const auto& p : report_paths) {
                nlohmann::ordered_json j;
                try {
                    j = nlohmann::ordered_json::parse(read_text(p));
                } catch (const nlohmann::json::parse_error& e) {
                    throw DataError(p + ": " + e.what());
                }
                auto report = report_from_json(j);
                auto model = report.model;
                reports.emplace_back(std::move(model), std::move(report));
            }
            const auto table = render_comparison(compare_models(reports));
            if (output.empty()) out << table;
            else write_text(output, table);
        } else if (geomap->parsed()) {
            const auto geo = map_corpus(read_corpus_file(input), cfg);
            emit_geojson(geo.aggregates, CategorySet::negativity(), output);
            err << "geomap: " << geo.aggregates.size() << " locations, " << geo.skipped << " skipped\n";
        } else if (pipeline->parsed()) {
            return run_pipeline(ctx, cfg.get("pipeline.workdir"));
        }
        return kSuccess;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return kModelError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace negclass::cli
