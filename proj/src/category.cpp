#include "negclass/category.hpp"

#include <algorithm>
#include <set>

#include "negclass/error.hpp"

namespace negclass {

CategorySet::CategorySet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw DataError("category set needs at least 2 names");
    std::set<std::string_view> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw DataError("category name must not be empty");
        if (!seen.insert(n).second) throw DataError("duplicate category name '" + n + "'");
    }
}

const CategorySet& CategorySet::negativity() {
    static const CategorySet set({"Politics", "Injustice", "Crime", "Economic", "Failure",
                                  "Terrorism", "Social Aspects", "Corruption"});
    return set;
}

std::optional<std::size_t> CategorySet::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t CategorySet::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw DataError("unknown category '" + std::string(name) + "'");
}

}  // namespace negclass
