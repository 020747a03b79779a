#include "csv.hpp"

#include <istream>
#include <ostream>

#include "negclass/error.hpp"

namespace negclass::csv {

std::optional<Record> Reader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) break;
    }
    if (line.empty()) return std::nullopt;

    Record rec;
    rec.line = line_;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    for (;;) {
        if (i == line.size()) {
            if (!quoted) break;
            // Quoted field continues on the next physical line.
            if (!std::getline(in_, line)) {
                throw DataError("line " + std::to_string(rec.line) + ": unterminated quoted field");
            }
            ++line_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            field += '\n';
            i = 0;
            continue;
        }
        const char c = line[i++];
        if (quoted) {
            if (c == '"') {
                if (i < line.size() && line[i] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            rec.fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    rec.fields.push_back(std::move(field));
    return rec;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace negclass::csv
