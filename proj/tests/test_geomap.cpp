#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "negclass/error.hpp"
#include "negclass/geomap.hpp"
#include "negclass/random.hpp"
#include "test_support.hpp"

using namespace negclass;

namespace {

Document placed(std::string id, std::string label, double lat, double lon,
                std::optional<std::string> name = std::nullopt) {
    Document d;
    d.id = std::move(id);
    d.text = "t";
    d.label = std::move(label);
    d.geotag = Geotag{lat, lon, std::move(name)};
    return d;
}

Document unplaced(std::string id, std::string label) {
    Document d;
    d.id = std::move(id);
    d.text = "t";
    d.label = std::move(label);
    return d;
}

const CategorySet& cats() { return CategorySet::negativity(); }

Corpus random_geo_corpus(Rng& rng, std::size_t n) {
    const auto& names = cats().names();
    const char* cities[] = {"Lahore", "Karachi", "Quetta"};
    Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        const auto label = names[rng.below(names.size())];
        const auto roll = rng.below(10);
        if (roll == 0) {
            c.push_back(unplaced(std::to_string(i), label));
        } else if (roll == 1) {
            c.push_back(placed(std::to_string(i), label, rng.uniform(-89, 89), rng.uniform(-179, 179)));
        } else {
            const auto city = rng.below(3);
            c.push_back(placed(std::to_string(i), label, 25.0 + 3.0 * static_cast<double>(city), 67.0 + static_cast<double>(city),
                               cities[city]));
        }
    }
    return c;
}

}  // namespace

TEST_CASE("named grouping examples") {
    const Corpus c = {placed("1", "Politics", 31.5, 74.3, "Lahore"), placed("2", "Politics", 31.6, 74.4, "Lahore"),
                      placed("3", "Crime", 31.4, 74.2, "Lahore")};
    const auto g = aggregate_by_location(c, cats(), NamedGrouping{});
    REQUIRE(g.aggregates.size() == 1);
    const auto& a = g.aggregates[0];
    CHECK(a.key == "Lahore");
    CHECK(a.total == 3);
    CHECK(cats().name(a.dominant) == "Politics");
    CHECK(a.dominant_share == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(a.lat == doctest::Approx(31.5).epsilon(1e-12));
    CHECK(a.lon == doctest::Approx(74.3).epsilon(1e-12));
    CHECK(a.counts[cats().index_of("Crime")] == 1);

    const auto single = aggregate_by_location({placed("x", "Failure", 1, 2, "Here")}, cats(), NamedGrouping{});
    REQUIRE(single.aggregates.size() == 1);
    CHECK(single.aggregates[0].dominant_share == 1.0);
    CHECK(single.aggregates[0].lat == 1.0);
}

TEST_CASE("ties go to the lowest category index") {
    const Corpus c = {placed("1", "Corruption", 0, 0, "A"), placed("2", "Injustice", 0, 0, "A")};
    const auto a = aggregate_by_location(c, cats(), NamedGrouping{}).aggregates.at(0);
    CHECK(cats().name(a.dominant) == "Injustice");
    CHECK(a.dominant_share == 0.5);
}

TEST_CASE("grid grouping") {
    const Corpus c = {placed("1", "Crime", 33.6, 73.0), placed("2", "Crime", 33.2, 73.9), placed("3", "Failure", -0.1, -0.1)};
    const auto g = aggregate_by_location(c, cats(), GridGrouping{1.0});
    REQUIRE(g.aggregates.size() == 2);
    const auto it = std::find_if(g.aggregates.begin(), g.aggregates.end(), [](const auto& a) { return a.total == 2; });
    REQUIRE(it != g.aggregates.end());
    CHECK(it->key == "cell:33,73");
    CHECK(it->lat == 33.5);
    CHECK(it->lon == 73.5);
    const auto neg = std::find_if(g.aggregates.begin(), g.aggregates.end(), [](const auto& a) { return a.total == 1; });
    CHECK(neg->key == "cell:-1,-1");

    CHECK_THROWS_AS(aggregate_by_location(c, cats(), GridGrouping{0.0}), DataError);
    CHECK_THROWS_AS(aggregate_by_location(c, cats(), GridGrouping{-1.0}), DataError);
}

TEST_CASE("skipped documents and errors") {
    const Corpus c = {placed("1", "Crime", 10, 10, "Town"), placed("2", "Crime", 10, 10), unplaced("3", "Crime")};
    const auto named = aggregate_by_location(c, cats(), NamedGrouping{});
    CHECK(named.skipped == 2);
    const auto grid = aggregate_by_location(c, cats(), GridGrouping{});
    CHECK(grid.skipped == 1);
    CHECK(location_name_coverage(c) == 0.5);
    CHECK(location_name_coverage({unplaced("a", "Crime")}) == 0.0);

    CHECK_THROWS_AS(aggregate_by_location({unplaced("a", "Crime")}, cats(), GridGrouping{}), DataError);
    auto unlabeled = placed("u", "Crime", 1, 1, "X");
    unlabeled.label.reset();
    CHECK_THROWS_AS(aggregate_by_location({unlabeled}, cats(), NamedGrouping{}), DataError);
}

TEST_CASE("aggregation invariants") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto corpus = random_geo_corpus(rng, 20 + rng.below(200));
        for (const Grouping g : {Grouping{NamedGrouping{}}, Grouping{GridGrouping{0.5}}, Grouping{GridGrouping{7.0}}}) {
            const auto agg = aggregate_by_location(corpus, cats(), g);
            std::uint64_t placed_total = 0;
            for (const auto& a : agg.aggregates) {
                std::uint64_t sum = 0;
                for (auto n : a.counts) sum += n;
                REQUIRE(sum == a.total);
                REQUIRE(a.counts[a.dominant] * a.total > 0);
                for (std::size_t k = 0; k < a.counts.size(); ++k) {
                    REQUIRE(a.counts[k] <= a.counts[a.dominant]);
                    if (k < a.dominant) REQUIRE(a.counts[k] < a.counts[a.dominant]);
                }
                REQUIRE(a.dominant_share == static_cast<double>(a.counts[a.dominant]) / static_cast<double>(a.total));
                REQUIRE(a.lat >= -90.0);
                REQUIRE(a.lat <= 90.0);
                REQUIRE(a.lon >= -180.0);
                REQUIRE(a.lon <= 180.0);
                placed_total += a.total;
            }
            REQUIRE(placed_total + agg.skipped == corpus.size());

            auto shuffled = corpus;
            rng.shuffle(std::span<Document>(shuffled));
            REQUIRE(aggregate_by_location(shuffled, cats(), g).aggregates == agg.aggregates);
        }
    }
}

TEST_CASE("GeoJSON emission") {
    SUBCASE("one aggregate") {
        const auto agg = aggregate_by_location({placed("1", "Economic", 24.86, 67.01, "Karachi")}, cats(), NamedGrouping{});
        const auto j = nlohmann::json::parse(to_geojson(agg.aggregates, cats()));
        CHECK(j["type"] == "FeatureCollection");
        REQUIRE(j["features"].size() == 1);
        const auto& f = j["features"][0];
        CHECK(f["type"] == "Feature");
        CHECK(f["geometry"]["type"] == "Point");
        CHECK(f["geometry"]["coordinates"][0] == 67.01);
        CHECK(f["geometry"]["coordinates"][1] == 24.86);
        const auto& p = f["properties"];
        CHECK(p["key"] == "Karachi");
        CHECK(p["total"] == 1);
        CHECK(p["dominant_class"] == "Economic");
        CHECK(p["dominant_share"] == 1.0);
        CHECK(p["counts"].size() == 8);
        CHECK(p["counts"]["Economic"] == 1);
    }
    SUBCASE("eight locations each dominated by a different category") {
        Corpus c;
        const auto& names = cats().names();
        for (std::size_t k = 0; k < names.size(); ++k) {
            const std::string city = "city" + std::to_string(k);
            for (int i = 0; i < 3; ++i) c.push_back(placed(city + "-" + std::to_string(i), names[k], 10.0 + k, 60.0 + k, city));
            c.push_back(placed(city + "-x", names[(k + 1) % names.size()], 10.0 + k, 60.0 + k, city));
        }
        const auto agg = aggregate_by_location(c, cats(), NamedGrouping{});
        const auto j = nlohmann::json::parse(to_geojson(agg.aggregates, cats()));
        REQUIRE(j["features"].size() == 8);
        std::set<std::string> dominant;
        for (const auto& f : j["features"]) dominant.insert(f["properties"]["dominant_class"].get<std::string>());
        CHECK(dominant == std::set<std::string>(names.begin(), names.end()));
    }
    SUBCASE("emit, parse, emit is byte-identical") {
        Rng rng(6);
        const auto corpus = random_geo_corpus(rng, 300);
        const auto agg = aggregate_by_location(corpus, cats(), GridGrouping{0.5});
        const auto text = to_geojson(agg.aggregates, cats());
        const auto parsed = parse_geojson(text, cats());
        CHECK(parsed == agg.aggregates);
        CHECK(to_geojson(parsed, cats()) == text);

        testing::TempDir dir;
        emit_geojson(agg.aggregates, cats(), dir / "map.geojson");
        CHECK(testing::read_file(dir / "map.geojson") == text);
        CHECK_THROWS(emit_geojson(agg.aggregates, cats(), dir / "missing" / "map.geojson"));
    }
    SUBCASE("parse rejects inconsistent documents") {
        const auto agg = aggregate_by_location({placed("1", "Crime", 1, 2, "P")}, cats(), NamedGrouping{});
        auto j = nlohmann::json::parse(to_geojson(agg.aggregates, cats()));
        auto bad_total = j;
        bad_total["features"][0]["properties"]["total"] = 5;
        CHECK_THROWS_AS(parse_geojson(bad_total.dump(), cats()), DataError);
        auto bad_lon = j;
        bad_lon["features"][0]["geometry"]["coordinates"][0] = 200.0;
        CHECK_THROWS_AS(parse_geojson(bad_lon.dump(), cats()), DataError);
        auto bad_class = j;
        bad_class["features"][0]["properties"]["dominant_class"] = "Politics";
        CHECK_THROWS_AS(parse_geojson(bad_class.dump(), cats()), DataError);
        CHECK_THROWS_AS(parse_geojson("{\"type\":\"Feature\"}", cats()), DataError);
        CHECK_THROWS_AS(parse_geojson("not json", cats()), DataError);
    }
}
