#include "negclass/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "negclass/error.hpp"
#include "negclass/random.hpp"
#include "text_format.hpp"

namespace negclass {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kCsvColumns = {"id",  "text", "label",    "polarity", "lat",
                                              "lon", "location", "expert1", "expert2", "expert3"};

[[noreturn]] void fail(std::size_t line, std::string_view field, const std::string& what) {
    throw DataError("line " + std::to_string(line) + ": field '" + std::string(field) + "': " + what);
}

Polarity parse_polarity(std::size_t line, const std::string& s) {
    if (s == "positive") return Polarity::positive;
    if (s == "negative") return Polarity::negative;
    fail(line, "polarity", "expected 'positive' or 'negative', got '" + s + "'");
}

const char* polarity_name(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

double parse_coordinate(std::size_t line, std::string_view field, std::string_view text, double limit) {
    auto v = detail::parse_double(detail::trim(text));
    if (!v || !std::isfinite(*v)) fail(line, field, "not a number: '" + std::string(text) + "'");
    if (*v < -limit || *v > limit) {
        fail(line, field, "out of range [-" + detail::fixed(limit, 0) + ", " + detail::fixed(limit, 0) +
                              "]: " + std::string(text));
    }
    return *v;
}

// Checks cross-field invariants shared by both formats.
void validate(const Document& doc, std::size_t line, const CategorySet& categories) {
    if (doc.id.empty()) fail(line, "id", "must not be empty");
    if (doc.label && !categories.contains(*doc.label)) fail(line, "label", "unknown category '" + *doc.label + "'");
    if (doc.expert_labels) {
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& l = (*doc.expert_labels)[i];
            if (!categories.contains(l)) {
                fail(line, "expert" + std::to_string(i + 1), "unknown category '" + l + "'");
            }
        }
    }
}

Document parse_csv_record(const csv::Record& rec, const std::vector<std::size_t>& column_of,
                          const CategorySet& categories) {
    if (rec.fields.size() != kCsvColumns.size()) {
        throw DataError("line " + std::to_string(rec.line) + ": expected " + std::to_string(kCsvColumns.size()) +
                        " fields, got " + std::to_string(rec.fields.size()));
    }
    auto cell = [&](std::size_t col) -> const std::string& { return rec.fields[column_of[col]]; };

    Document doc;
    doc.id = cell(0);
    doc.text = cell(1);
    if (!cell(2).empty()) doc.label = cell(2);
    if (!cell(3).empty()) doc.polarity = parse_polarity(rec.line, cell(3));

    const bool has_lat = !cell(4).empty(), has_lon = !cell(5).empty();
    if (has_lat != has_lon) fail(rec.line, has_lat ? "lon" : "lat", "lat and lon must be given together");
    if (has_lat) {
        Geotag g;
        g.lat = parse_coordinate(rec.line, "lat", cell(4), 90.0);
        g.lon = parse_coordinate(rec.line, "lon", cell(5), 180.0);
        if (!cell(6).empty()) g.location_name = cell(6);
        doc.geotag = std::move(g);
    } else if (!cell(6).empty()) {
        fail(rec.line, "location", "requires lat and lon");
    }

    const int experts = !cell(7).empty() + !cell(8).empty() + !cell(9).empty();
    if (experts == 3) {
        doc.expert_labels = std::array<std::string, 3>{cell(7), cell(8), cell(9)};
    } else if (experts != 0) {
        fail(rec.line, "expert_labels", "exactly 3 expert labels required, got " + std::to_string(experts));
    }
    validate(doc, rec.line, categories);
    return doc;
}

Corpus parse_csv(std::istream& in, const CategorySet& categories) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw DataError("line 1: missing CSV header");

    std::vector<std::size_t> column_of(kCsvColumns.size(), SIZE_MAX);
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
        const auto name = detail::trim(header->fields[i]);
        auto it = std::find(kCsvColumns.begin(), kCsvColumns.end(), name);
        if (it == kCsvColumns.end()) fail(header->line, name, "unknown column");
        auto& slot = column_of[static_cast<std::size_t>(it - kCsvColumns.begin())];
        if (slot != SIZE_MAX) fail(header->line, name, "duplicate column");
        slot = i;
    }
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
        if (column_of[c] == SIZE_MAX) fail(header->line, kCsvColumns[c], "missing column");
    }

    Corpus out;
    while (auto rec = reader.next()) out.push_back(parse_csv_record(*rec, column_of, categories));
    return out;
}

std::string json_string(const ordered_json& obj, std::size_t line, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(line, key, "expected a string");
    return v.get<std::string>();
}

Document parse_json_record(const ordered_json& obj, std::size_t line, const CategorySet& categories) {
    static const std::set<std::string> known = {"id",  "text",     "label",        "polarity",
                                                "lat", "lon",      "location",     "expert_labels"};
    if (!obj.is_object()) throw DataError("line " + std::to_string(line) + ": expected a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) fail(line, key, "unknown field");
    }
    auto present = [&](const char* key) { return obj.contains(key) && !obj.at(key).is_null(); };

    Document doc;
    if (!present("id")) fail(line, "id", "missing");
    doc.id = json_string(obj, line, "id");
    if (!present("text")) fail(line, "text", "missing");
    doc.text = json_string(obj, line, "text");
    if (present("label")) doc.label = json_string(obj, line, "label");
    if (present("polarity")) doc.polarity = parse_polarity(line, json_string(obj, line, "polarity"));

    auto coordinate = [&](const char* key, double limit) {
        const auto& v = obj.at(key);
        if (!v.is_number()) fail(line, key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d) || d < -limit || d > limit) fail(line, key, "out of range: " + v.dump());
        return d;
    };
    if (present("lat") != present("lon")) {
        fail(line, present("lat") ? "lon" : "lat", "lat and lon must be given together");
    }
    if (present("lat")) {
        Geotag g;
        g.lat = coordinate("lat", 90.0);
        g.lon = coordinate("lon", 180.0);
        if (present("location")) g.location_name = json_string(obj, line, "location");
        doc.geotag = std::move(g);
    } else if (present("location")) {
        fail(line, "location", "requires lat and lon");
    }

    if (present("expert_labels")) {
        const auto& arr = obj.at("expert_labels");
        if (!arr.is_array() || arr.size() != 3) fail(line, "expert_labels", "expected an array of 3 names");
        std::array<std::string, 3> labels;
        for (std::size_t i = 0; i < 3; ++i) {
            if (!arr[i].is_string()) fail(line, "expert_labels", "entries must be strings");
            labels[i] = arr[i].get<std::string>();
        }
        doc.expert_labels = std::move(labels);
    }
    validate(doc, line, categories);
    return doc;
}

Corpus parse_jsonl(std::istream& in, const CategorySet& categories) {
    Corpus out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError("line " + std::to_string(lineno) + ": invalid JSON: " + e.what());
        }
        out.push_back(parse_json_record(obj, lineno, categories));
    }
    return out;
}

ordered_json to_json(const Document& doc) {
    ordered_json o;
    o["id"] = doc.id;
    o["text"] = doc.text;
    if (doc.label) o["label"] = *doc.label;
    if (doc.polarity) o["polarity"] = polarity_name(*doc.polarity);
    if (doc.geotag) {
        o["lat"] = doc.geotag->lat;
        o["lon"] = doc.geotag->lon;
        if (doc.geotag->location_name) o["location"] = *doc.geotag->location_name;
    }
    if (doc.expert_labels) o["expert_labels"] = *doc.expert_labels;
    return o;
}

std::string category_slug(std::string_view name) {
    std::string s;
    for (unsigned char c : name) {
        if (std::isalnum(c)) s += static_cast<char>(std::tolower(c));
    }
    return s;
}

}  // namespace

CorpusFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

Corpus parse_corpus(std::istream& in, CorpusFormat format, const CategorySet& categories) {
    Corpus corpus = format == CorpusFormat::csv ? parse_csv(in, categories) : parse_jsonl(in, categories);
    std::unordered_set<std::string> ids;
    for (const auto& d : corpus) {
        if (!ids.insert(d.id).second) throw DataError("duplicate document id '" + d.id + "'");
    }
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const CategorySet& categories) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
    try {
        return parse_corpus(in, format, categories);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format) {
    if (format == CorpusFormat::jsonl) {
        for (const auto& d : corpus) out << to_json(d).dump() << '\n';
        return;
    }
    csv::write_row(out, kCsvColumns);
    for (const auto& d : corpus) {
        std::vector<std::string> row(kCsvColumns.size());
        row[0] = d.id;
        row[1] = d.text;
        if (d.label) row[2] = *d.label;
        if (d.polarity) row[3] = polarity_name(*d.polarity);
        if (d.geotag) {
            row[4] = detail::shortest(d.geotag->lat);
            row[5] = detail::shortest(d.geotag->lon);
            if (d.geotag->location_name) row[6] = *d.geotag->location_name;
        }
        if (d.expert_labels) {
            for (std::size_t i = 0; i < 3; ++i) row[7 + i] = (*d.expert_labels)[i];
        }
        csv::write_row(out, row);
    }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus, CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file '" + path.string() + "'");
    write_corpus(out, corpus, format);
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Adjudication adjudicate(const Document& doc) {
    if (!doc.expert_labels) throw DataError("document '" + doc.id + "' has no expert labels");
    const auto& l = *doc.expert_labels;
    if (l[0] == l[1] || l[0] == l[2]) return Accepted{l[0]};
    if (l[1] == l[2]) return Accepted{l[1]};
    return Rejected{};
}

AdjudicatedCorpus adjudicate_corpus(const Corpus& corpus) {
    AdjudicatedCorpus out;
    for (const auto& doc : corpus) {
        const auto result = adjudicate(doc);
        if (const auto* a = std::get_if<Accepted>(&result)) {
            Document labeled = doc;
            labeled.label = a->label;
            out.labeled.push_back(std::move(labeled));
        } else {
            out.rejected.push_back(doc);
        }
    }
    return out;
}

Split stratified_split(const Corpus& corpus, double test_fraction, std::uint64_t seed,
                       const CategorySet& categories) {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
        throw DataError("test fraction must be in [0, 1), got " + detail::shortest(test_fraction));
    }
    std::vector<std::vector<std::size_t>> members(categories.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& doc = corpus[i];
        if (!doc.label) throw DataError("document '" + doc.id + "' is unlabeled");
        members[categories.index_of(*doc.label)].push_back(i);
    }

    std::vector<char> in_test(corpus.size(), 0);
    for (std::size_t c = 0; c < members.size(); ++c) {
        auto& idx = members[c];
        // The epsilon absorbs representation error in products such as 100 * 0.29.
        const auto n_test =
            static_cast<std::size_t>(std::floor(static_cast<double>(idx.size()) * test_fraction + 1e-9));
        Rng rng(mix_seed(seed, c));
        rng.shuffle(std::span<std::size_t>(idx));
        for (std::size_t k = 0; k < n_test; ++k) in_test[idx[k]] = 1;
    }

    Split split;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        (in_test[i] ? split.test : split.train).push_back(corpus[i]);
    }
    return split;
}

DistributionSpec DistributionSpec::table1() {
    return DistributionSpec({{"Politics", 395, 131},
                             {"Injustice", 297, 99},
                             {"Crime", 252, 84},
                             {"Economic", 234, 76},
                             {"Failure", 209, 70},
                             {"Terrorism", 202, 68},
                             {"Social Aspects", 195, 65},
                             {"Corruption", 150, 50}});
}

std::size_t DistributionSpec::total() const {
    std::size_t t = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) t += count(r);
    return t;
}

double DistributionSpec::percent(std::size_t row) const {
    const auto t = total();
    return t == 0 ? 0.0 : 100.0 * static_cast<double>(count(row)) / static_cast<double>(t);
}

DistributionSpec load_distribution_spec(const std::filesystem::path& path, const CategorySet& categories) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open distribution spec '" + path.string() + "'");
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw DataError(path.string() + ": empty distribution spec");
    const std::vector<std::string> expected = {"category", "train_count", "test_count"};
    const bool with_percent = header->fields.size() == 4 && detail::trim(header->fields[3]) == "percent";
    if (header->fields.size() != expected.size() + (with_percent ? 1 : 0) ||
        !std::equal(expected.begin(), expected.end(), header->fields.begin(),
                    [](const std::string& a, const std::string& b) { return a == detail::trim(b); })) {
        throw DataError(path.string() + ": header must be 'category,train_count,test_count[,percent]'");
    }

    std::vector<CategoryCounts> rows;
    std::vector<std::optional<double>> stated;
    std::set<std::string> seen;
    while (auto rec = reader.next()) {
        if (rec->fields.size() != header->fields.size()) {
            fail(rec->line, "category", "wrong number of fields");
        }
        CategoryCounts row;
        row.category = std::string(detail::trim(rec->fields[0]));
        if (!categories.contains(row.category)) fail(rec->line, "category", "unknown category '" + row.category + "'");
        if (!seen.insert(row.category).second) fail(rec->line, "category", "duplicate category");
        auto train = detail::parse_int<std::size_t>(detail::trim(rec->fields[1]));
        auto test = detail::parse_int<std::size_t>(detail::trim(rec->fields[2]));
        if (!train) fail(rec->line, "train_count", "not a nonnegative integer");
        if (!test) fail(rec->line, "test_count", "not a nonnegative integer");
        row.train_count = *train;
        row.test_count = *test;
        rows.push_back(row);
        if (with_percent) {
            auto p = detail::parse_double(detail::trim(rec->fields[3]));
            if (!p) fail(rec->line, "percent", "not a number");
            stated.push_back(p);
        }
    }
    DistributionSpec spec(std::move(rows));
    for (std::size_t r = 0; r < stated.size(); ++r) {
        if (std::abs(spec.percent(r) - *stated[r]) > 0.005 + 1e-9) {
            throw DataError(path.string() + ": stated percent " + detail::fixed(*stated[r], 2) + " for '" +
                            spec.rows()[r].category + "' disagrees with counts (" +
                            detail::fixed(spec.percent(r), 4) + ")");
        }
    }
    return spec;
}

std::vector<ClassShare> class_distribution(const Corpus& corpus, const CategorySet& categories) {
    if (corpus.empty()) throw DataError("class distribution of an empty corpus");
    std::vector<std::size_t> counts(categories.size(), 0);
    for (const auto& doc : corpus) {
        if (!doc.label) throw DataError("document '" + doc.id + "' is unlabeled");
        ++counts[categories.index_of(*doc.label)];
    }
    std::vector<ClassShare> out;
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double pct = 100.0 * static_cast<double>(counts[c]) / static_cast<double>(corpus.size());
        out.push_back({categories.name(c), counts[c], std::round(pct * 100.0) / 100.0});
    }
    return out;
}

std::string render_distribution(const std::vector<ClassShare>& shares) {
    std::ostringstream os;
    std::size_t width = 7;
    for (const auto& s : shares) width = std::max(width, s.category.size());
    std::size_t total = 0;
    os << std::string("Classes") << std::string(width - 7 + 2, ' ') << "   Count  Distribution\n";
    for (const auto& s : shares) {
        std::string count = std::to_string(s.count);
        std::string pct = detail::fixed(s.percent, 2);
        os << s.category << std::string(width - s.category.size() + 2, ' ') << std::string(8 - count.size(), ' ')
           << count << std::string(14 - pct.size(), ' ') << pct << '\n';
        total += s.count;
    }
    std::string t = std::to_string(total);
    os << "Total" << std::string(width - 5 + 2, ' ') << std::string(8 - t.size(), ' ') << t << '\n';
    return os.str();
}

const std::vector<NamedLocation>& default_locations() {
    static const std::vector<NamedLocation> locations = {
        {"Islamabad", 33.6844, 73.0479},  {"Rawalpindi", 33.5651, 73.0169}, {"Lahore", 31.5204, 74.3587},
        {"Karachi", 24.8607, 67.0011},    {"Peshawar", 34.0151, 71.5249},   {"Quetta", 30.1798, 66.9750},
        {"Multan", 30.1575, 71.5249},     {"Faisalabad", 31.4504, 73.1350}, {"Gwadar", 25.1216, 62.3254},
        {"Hyderabad", 25.3960, 68.3578},
    };
    return locations;
}

std::vector<NamedLocation> load_locations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open locations file '" + path.string() + "'");
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || header->fields != std::vector<std::string>{"name", "lat", "lon"}) {
        throw DataError(path.string() + ": header must be 'name,lat,lon'");
    }
    std::vector<NamedLocation> out;
    while (auto rec = reader.next()) {
        if (rec->fields.size() != 3) fail(rec->line, "name", "expected 3 fields");
        if (rec->fields[0].empty()) fail(rec->line, "name", "must not be empty");
        out.push_back({rec->fields[0], parse_coordinate(rec->line, "lat", rec->fields[1], 90.0),
                       parse_coordinate(rec->line, "lon", rec->fields[2], 180.0)});
    }
    if (out.empty()) throw DataError(path.string() + ": no locations");
    return out;
}

std::string keyword_token(std::string_view category, std::size_t j) {
    return category_slug(category) + "kw" + std::to_string(j);
}

std::string noise_token(std::size_t j) { return "noise" + std::to_string(j); }

Corpus synthesize_corpus(const DistributionSpec& spec, const SynthOptions& o) {
    if (spec.total() == 0) throw DataError("distribution spec has zero documents");
    if (!(o.signal_prob >= 0.0 && o.signal_prob <= 1.0)) throw DataError("signal_prob must be in [0, 1]");
    if (o.keyword_pool_size == 0 || o.noise_pool_size == 0) throw DataError("token pools must be nonempty");
    if (o.min_len > o.max_len) throw DataError("min_len must not exceed max_len");
    {
        std::set<std::string> slugs;
        for (const auto& row : spec.rows()) {
            if (!slugs.insert(category_slug(row.category)).second) {
                throw DataError("categories '" + row.category + "' collide in keyword space");
            }
        }
    }

    Rng rng(o.seed);
    Corpus docs;
    docs.reserve(spec.total());
    for (std::size_t r = 0; r < spec.rows().size(); ++r) {
        const auto& category = spec.rows()[r].category;
        for (std::size_t i = 0; i < spec.count(r); ++i) {
            const auto len = o.min_len + static_cast<std::size_t>(rng.below(o.max_len - o.min_len + 1));
            std::string text;
            for (std::size_t t = 0; t < len; ++t) {
                if (t) text += ' ';
                if (rng.uniform() < o.signal_prob) {
                    text += keyword_token(category, static_cast<std::size_t>(rng.below(o.keyword_pool_size)));
                } else {
                    text += noise_token(static_cast<std::size_t>(rng.below(o.noise_pool_size)));
                }
            }
            Document d;
            d.text = std::move(text);
            d.label = category;
            if (!o.locations.empty()) {
                const auto& loc = o.locations[static_cast<std::size_t>(rng.below(o.locations.size()))];
                d.geotag = Geotag{loc.lat, loc.lon, loc.name};
            }
            docs.push_back(std::move(d));
        }
    }
    rng.shuffle(std::span<Document>(docs));

    const auto digits = std::to_string(docs.size()).size();
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::string n = std::to_string(i + 1);
        docs[i].id = "syn-" + std::string(digits - n.size(), '0') + n;
    }
    return docs;
}

}  // namespace negclass
