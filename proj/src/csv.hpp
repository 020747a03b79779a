#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace negclass::csv {

struct Record {
    std::size_t line = 0;  // 1-based line on which the record starts
    std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks. CRLF endings are accepted.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}
    std::optional<Record> next();

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace negclass::csv
