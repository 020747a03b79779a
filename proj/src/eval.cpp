#include "negclass/eval.hpp"

#include <algorithm>
#include <sstream>

#include "csv.hpp"
#include "negclass/error.hpp"
#include "text_format.hpp"

namespace negclass {

std::uint64_t ConfusionMatrix::row_sum(std::size_t c) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < k_; ++j) s += (*this)(c, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t c) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += (*this)(i, c);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += (*this)(i, i);
    return s;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t s = 0;
    for (auto v : cells_) s += v;
    return s;
}

ConfusionMatrix confusion(std::span<const std::size_t> truth, std::span<const std::size_t> predicted, std::size_t k) {
    if (truth.size() != predicted.size()) {
        throw DataError("label sequences differ in length (" + std::to_string(truth.size()) + " vs " +
                        std::to_string(predicted.size()) + ")");
    }
    ConfusionMatrix m(k);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= k || predicted[i] >= k) throw DataError("label out of range at position " + std::to_string(i));
        ++m(truth[i], predicted[i]);
    }
    return m;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& m) {
    std::vector<ClassMetrics> out(m.size());
    for (std::size_t c = 0; c < m.size(); ++c) {
        auto& r = out[c];
        const auto hit = static_cast<double>(m(c, c));
        const auto predicted = m.col_sum(c);
        r.support = m.row_sum(c);
        r.precision_undefined = predicted == 0;
        r.recall_undefined = r.support == 0;
        r.precision = predicted ? hit / static_cast<double>(predicted) : 0.0;
        r.recall = r.support ? hit / static_cast<double>(r.support) : 0.0;
        const double pr = r.precision + r.recall;
        r.f1_undefined = pr == 0.0;
        r.f1 = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
    }
    return out;
}

Averages average_metrics(std::span<const ClassMetrics> per_class) {
    Averages a;
    for (const auto& c : per_class) a.total_support += c.support;
    if (per_class.empty() || a.total_support == 0) throw DataError("cannot average metrics of an empty evaluation");
    const double k = static_cast<double>(per_class.size());
    const double n = static_cast<double>(a.total_support);
    for (const auto& c : per_class) {
        a.macro.precision += c.precision / k;
        a.macro.recall += c.recall / k;
        a.macro.f1 += c.f1 / k;
        const double w = static_cast<double>(c.support) / n;
        a.weighted.precision += w * c.precision;
        a.weighted.recall += w * c.recall;
        a.weighted.f1 += w * c.f1;
    }
    return a;
}

Summary aggregate(const ConfusionMatrix& m, std::span<const ClassMetrics> per_class) {
    if (m.total() == 0) throw DataError("cannot aggregate an empty evaluation");
    const auto a = average_metrics(per_class);
    Summary s;
    s.total = m.total();
    s.accuracy = static_cast<double>(m.trace()) / static_cast<double>(s.total);
    s.macro = a.macro;
    s.weighted = a.weighted;
    return s;
}

EvalReport evaluate(std::string model, const CategorySet& categories, std::span<const std::size_t> truth,
                    std::span<const std::size_t> predicted) {
    EvalReport r;
    r.model = std::move(model);
    r.categories = categories;
    r.matrix = confusion(truth, predicted, categories.size());
    r.per_class = per_class_metrics(r.matrix);
    r.summary = aggregate(r.matrix, r.per_class);
    return r;
}

namespace {

std::string cell(double v, bool undefined) { return detail::fixed(v, 2) + (undefined ? "*" : ""); }

std::string pad_left(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }
std::string pad_right(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string render_text(const EvalReport& r) {
    std::size_t name_w = std::string("Avg/Total").size();
    for (const auto& n : r.categories.names()) name_w = std::max(name_w, n.size());
    name_w += 2;

    std::ostringstream os;
    auto row = [&](const std::string& name, const std::string& p, const std::string& rc, const std::string& f,
                   const std::string& s) {
        os << pad_right(name, name_w) << pad_left(p, 10) << pad_left(rc, 10) << pad_left(f, 10) << pad_left(s, 10) << '\n';
    };
    os << "Model: " << r.model << '\n';
    row("Classes", "Precision", "Recall", "F1-score", "Support");
    bool any_undefined = false;
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        any_undefined |= m.precision_undefined || m.recall_undefined || m.f1_undefined;
        row(r.categories.name(c), cell(m.precision, m.precision_undefined), cell(m.recall, m.recall_undefined),
            cell(m.f1, m.f1_undefined), std::to_string(m.support));
    }
    const auto& s = r.summary;
    const auto total = std::to_string(s.total);
    row("Avg/Total", detail::fixed(s.weighted.precision, 2), detail::fixed(s.weighted.recall, 2),
        detail::fixed(s.weighted.f1, 2), total);
    row("Macro Avg", detail::fixed(s.macro.precision, 2), detail::fixed(s.macro.recall, 2), detail::fixed(s.macro.f1, 2),
        total);
    row("Accuracy", "", "", detail::fixed(s.accuracy, 2), total);
    if (any_undefined) os << "* 0/0, reported as 0\n";
    return os.str();
}

std::string render_csv(const EvalReport& r) {
    std::ostringstream os;
    csv::write_row(os, {"class", "precision", "recall", "f1", "support"});
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        csv::write_row(os, {r.categories.name(c), detail::shortest(m.precision), detail::shortest(m.recall),
                            detail::shortest(m.f1), std::to_string(m.support)});
    }
    const auto& s = r.summary;
    const auto total = std::to_string(s.total);
    csv::write_row(os, {"macro avg", detail::shortest(s.macro.precision), detail::shortest(s.macro.recall),
                        detail::shortest(s.macro.f1), total});
    csv::write_row(os, {"weighted avg", detail::shortest(s.weighted.precision), detail::shortest(s.weighted.recall),
                        detail::shortest(s.weighted.f1), total});
    csv::write_row(os, {"accuracy", "", "", detail::shortest(s.accuracy), total});
    return os.str();
}

nlohmann::ordered_json to_json(const EvalReport& r) {
    using json = nlohmann::ordered_json;
    json j;
    j["model"] = r.model;
    j["categories"] = r.categories.names();
    json rows = json::array();
    for (std::size_t i = 0; i < r.matrix.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < r.matrix.size(); ++k) row.push_back(r.matrix(i, k));
        rows.push_back(std::move(row));
    }
    j["confusion_matrix"] = std::move(rows);
    json classes = json::array();
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        json undefined = json::array();
        if (m.precision_undefined) undefined.push_back("precision");
        if (m.recall_undefined) undefined.push_back("recall");
        if (m.f1_undefined) undefined.push_back("f1");
        classes.push_back(json{{"class", r.categories.name(c)},
                               {"precision", m.precision},
                               {"recall", m.recall},
                               {"f1", m.f1},
                               {"support", m.support},
                               {"undefined", std::move(undefined)}});
    }
    j["per_class"] = std::move(classes);
    const auto& s = r.summary;
    j["accuracy"] = s.accuracy;
    j["macro_avg"] = json{{"precision", s.macro.precision}, {"recall", s.macro.recall}, {"f1", s.macro.f1}};
    j["weighted_avg"] = json{{"precision", s.weighted.precision}, {"recall", s.weighted.recall}, {"f1", s.weighted.f1}};
    j["total"] = s.total;
    return j;
}

EvalReport report_from_json(const nlohmann::ordered_json& j) {
    try {
        CategorySet categories(j.at("categories").get<std::vector<std::string>>());
        const auto& rows = j.at("confusion_matrix");
        if (!rows.is_array() || rows.size() != categories.size()) throw DataError("report: confusion matrix shape mismatch");
        EvalReport r;
        r.model = j.at("model").get<std::string>();
        r.categories = categories;
        r.matrix = ConfusionMatrix(categories.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].is_array() || rows[i].size() != categories.size()) {
                throw DataError("report: confusion matrix shape mismatch");
            }
            for (std::size_t k = 0; k < rows[i].size(); ++k) r.matrix(i, k) = rows[i][k].get<std::uint64_t>();
        }
        r.per_class = per_class_metrics(r.matrix);
        r.summary = aggregate(r.matrix, r.per_class);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

std::vector<ComparisonRow> compare_models(const std::vector<std::pair<std::string, EvalReport>>& reports) {
    std::vector<ComparisonRow> rows;
    for (const auto& [name, report] : reports) rows.push_back({name, report.summary.accuracy});
    std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
        return a.model < b.model;
    });
    return rows;
}

std::string render_comparison(const std::vector<ComparisonRow>& rows) {
    std::size_t w = std::string("Models").size();
    for (const auto& r : rows) w = std::max(w, r.model.size());
    w += 2;
    std::ostringstream os;
    os << pad_right("Models", w) << "Test Accuracy\n";
    for (const auto& r : rows) os << pad_right(r.model, w) << detail::fixed(r.accuracy, 4) << '\n';
    return os.str();
}

}  // namespace negclass
