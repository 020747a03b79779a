#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace negclass {

// Ordered list of class names. The order is the class index used by every
// model, report and geo aggregate, and is persisted alongside them.
class CategorySet {
public:
    CategorySet() = default;
    // Throws DataError on fewer than 2 names, empty names or duplicates.
    explicit CategorySet(std::vector<std::string> names);

    // The eight negativity categories in canonical order (descending
    // training frequency in the reference dataset).
    static const CategorySet& negativity();

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t index) const { return names_.at(index); }

    std::optional<std::size_t> find(std::string_view name) const;
    // Throws DataError naming the unknown category.
    std::size_t index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name).has_value(); }

    friend bool operator==(const CategorySet&, const CategorySet&) = default;

private:
    std::vector<std::string> names_;
};

}  // namespace negclass
