#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "negclass/category.hpp"
#include "negclass/corpus.hpp"

namespace negclass {

// Per-location tally of (predicted) categories.
struct GeoAggregate {
    std::string key;
    double lat = 0.0;  // centroid
    double lon = 0.0;
    std::vector<std::uint64_t> counts;  // indexed like the CategorySet
    std::uint64_t total = 0;
    std::size_t dominant = 0;  // argmax of counts, lowest index on ties
    double dominant_share = 0.0;

    friend bool operator==(const GeoAggregate&, const GeoAggregate&) = default;
};

// Groups by location name; the centroid is the mean member coordinate.
struct NamedGrouping {};
// Groups by cell (floor(lat / cell_deg), floor(lon / cell_deg)); the centroid
// is the cell center.
struct GridGrouping {
    double cell_deg = 0.5;
};
using Grouping = std::variant<NamedGrouping, GridGrouping>;

struct GeoAggregation {
    std::vector<GeoAggregate> aggregates;  // sorted by key
    std::size_t skipped = 0;               // documents that could not be placed
};

// Uses each document's `label` as its category. Documents without a geotag
// (or, in named mode, without a location name) are counted as skipped.
// Throws DataError when nothing could be placed, on unlabeled placeable
// documents, or on a non-positive cell size.
GeoAggregation aggregate_by_location(const Corpus& docs, const CategorySet& categories, const Grouping& grouping);

// Share of geotagged documents that carry a location name; 0 if none are
// geotagged.
double location_name_coverage(const Corpus& docs);

// RFC 7946 FeatureCollection of Point features ([lon, lat]) with properties
// key, total, counts, dominant_class and dominant_share, sorted by key.
std::string to_geojson(const std::vector<GeoAggregate>& aggregates, const CategorySet& categories);
// Parses and validates output of to_geojson. Throws DataError.
std::vector<GeoAggregate> parse_geojson(std::string_view text, const CategorySet& categories);
void emit_geojson(const std::vector<GeoAggregate>& aggregates, const CategorySet& categories,
                  const std::filesystem::path& path);

}  // namespace negclass
