#include "negclass/geomap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "negclass/error.hpp"
#include "text_format.hpp"

namespace negclass {

namespace {

using json = nlohmann::ordered_json;

struct Group {
    std::vector<double> lats;
    std::vector<double> lons;
    std::vector<std::uint64_t> counts;
    double cell_lat = 0.0;
    double cell_lon = 0.0;
};

// Order-independent mean, exact when all values are equal.
double sorted_mean(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double offset = 0.0;
    for (double x : v) offset += x - v.front();
    return v.front() + offset / static_cast<double>(v.size());
}

void finish(GeoAggregate& a) {
    a.total = 0;
    for (auto c : a.counts) a.total += c;
    a.dominant = 0;
    for (std::size_t c = 1; c < a.counts.size(); ++c) {
        if (a.counts[c] > a.counts[a.dominant]) a.dominant = c;
    }
    a.dominant_share = static_cast<double>(a.counts[a.dominant]) / static_cast<double>(a.total);
}

std::string grid_key(long long i, long long j) { return "cell:" + std::to_string(i) + "," + std::to_string(j); }

}  // namespace

GeoAggregation aggregate_by_location(const Corpus& docs, const CategorySet& categories, const Grouping& grouping) {
    const auto* grid = std::get_if<GridGrouping>(&grouping);
    if (grid && !(grid->cell_deg > 0.0 && std::isfinite(grid->cell_deg))) {
        throw DataError("grid cell size must be positive");
    }

    GeoAggregation out;
    std::map<std::string, Group> groups;
    for (const auto& doc : docs) {
        if (!doc.geotag || (!grid && !doc.geotag->location_name)) {
            ++out.skipped;
            continue;
        }
        if (!doc.label) throw DataError("document '" + doc.id + "' has no label to map");
        const auto c = categories.index_of(*doc.label);

        std::string key;
        double cell_lat = 0.0, cell_lon = 0.0;
        if (grid) {
            const auto i = static_cast<long long>(std::floor(doc.geotag->lat / grid->cell_deg));
            const auto j = static_cast<long long>(std::floor(doc.geotag->lon / grid->cell_deg));
            key = grid_key(i, j);
            cell_lat = std::clamp((static_cast<double>(i) + 0.5) * grid->cell_deg, -90.0, 90.0);
            cell_lon = std::clamp((static_cast<double>(j) + 0.5) * grid->cell_deg, -180.0, 180.0);
        } else {
            key = *doc.geotag->location_name;
        }
        auto& g = groups[key];
        if (g.counts.empty()) g.counts.assign(categories.size(), 0);
        ++g.counts[c];
        g.lats.push_back(doc.geotag->lat);
        g.lons.push_back(doc.geotag->lon);
        g.cell_lat = cell_lat;
        g.cell_lon = cell_lon;
    }
    if (groups.empty()) throw DataError("no geotagged documents to aggregate");

    for (auto& [key, g] : groups) {
        GeoAggregate a;
        a.key = key;
        if (grid) {
            a.lat = g.cell_lat;
            a.lon = g.cell_lon;
        } else {
            a.lat = sorted_mean(std::move(g.lats));
            a.lon = sorted_mean(std::move(g.lons));
        }
        a.counts = std::move(g.counts);
        finish(a);
        out.aggregates.push_back(std::move(a));
    }
    return out;
}

double location_name_coverage(const Corpus& docs) {
    std::size_t tagged = 0, named = 0;
    for (const auto& d : docs) {
        if (!d.geotag) continue;
        ++tagged;
        if (d.geotag->location_name) ++named;
    }
    return tagged ? static_cast<double>(named) / static_cast<double>(tagged) : 0.0;
}

std::string to_geojson(const std::vector<GeoAggregate>& aggregates, const CategorySet& categories) {
    std::vector<const GeoAggregate*> sorted;
    for (const auto& a : aggregates) sorted.push_back(&a);
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->key < b->key; });

    json features = json::array();
    for (const auto* a : sorted) {
        if (a->counts.size() != categories.size()) throw DataError("aggregate '" + a->key + "' has the wrong category count");
        json counts = json::object();
        for (std::size_t c = 0; c < categories.size(); ++c) counts[categories.name(c)] = a->counts[c];
        features.push_back(json{{"type", "Feature"},
                                {"geometry", json{{"type", "Point"}, {"coordinates", json::array({a->lon, a->lat})}}},
                                {"properties", json{{"key", a->key},
                                                    {"total", a->total},
                                                    {"counts", std::move(counts)},
                                                    {"dominant_class", categories.name(a->dominant)},
                                                    {"dominant_share", a->dominant_share}}}});
    }
    json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump(2) + "\n";
}

std::vector<GeoAggregate> parse_geojson(std::string_view text, const CategorySet& categories) {
    auto bad = [](const std::string& what) -> DataError { return DataError("invalid GeoJSON: " + what); };
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw bad(e.what());
    }
    try {
        if (doc.at("type") != "FeatureCollection") throw bad("top-level type must be FeatureCollection");
        std::vector<GeoAggregate> out;
        for (const auto& f : doc.at("features")) {
            if (f.at("type") != "Feature") throw bad("feature type must be Feature");
            const auto& geom = f.at("geometry");
            if (geom.at("type") != "Point") throw bad("geometry must be a Point");
            const auto& coords = geom.at("coordinates");
            if (!coords.is_array() || coords.size() != 2) throw bad("Point needs [lon, lat]");
            GeoAggregate a;
            a.lon = coords[0].get<double>();
            a.lat = coords[1].get<double>();
            if (a.lon < -180.0 || a.lon > 180.0 || a.lat < -90.0 || a.lat > 90.0) throw bad("coordinates out of range");

            const auto& p = f.at("properties");
            a.key = p.at("key").get<std::string>();
            a.total = p.at("total").get<std::uint64_t>();
            const auto& counts = p.at("counts");
            if (counts.size() != categories.size()) throw bad("feature '" + a.key + "' has the wrong category count");
            a.counts.assign(categories.size(), 0);
            for (std::size_t c = 0; c < categories.size(); ++c) a.counts[c] = counts.at(categories.name(c)).get<std::uint64_t>();
            a.dominant = categories.index_of(p.at("dominant_class").get<std::string>());
            a.dominant_share = p.at("dominant_share").get<double>();

            if (a.total == 0) throw bad("feature '" + a.key + "' has zero total");
            GeoAggregate check = a;
            finish(check);
            if (check.total != a.total) throw bad("feature '" + a.key + "' total differs from its counts");
            if (check.dominant != a.dominant || check.dominant_share != a.dominant_share) {
                throw bad("feature '" + a.key + "' dominant class is inconsistent with its counts");
            }
            out.push_back(std::move(a));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw bad(e.what());
    }
}

void emit_geojson(const std::vector<GeoAggregate>& aggregates, const CategorySet& categories,
                  const std::filesystem::path& path) {
    if (aggregates.empty()) throw DataError("no aggregates to emit");
    const auto text = to_geojson(aggregates, categories);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write GeoJSON file '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace negclass
