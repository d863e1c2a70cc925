#pragma once

// Line-record text format shared by the network files: one comma-separated
// record per line, first field is the record type. Blank lines and lines
// starting with '#' are skipped.

#include "resilsim/network.hpp"

#include <charconv>
#include <istream>
#include <string>
#include <vector>

namespace resilsim {

struct Record {
    std::string label;
    std::size_t line = 0;
    std::vector<std::string> fields;

    const std::string& tag() const { return fields.front(); }

    void expect_fields(std::size_t n) const {
        if (fields.size() != n) {
            throw ParseError(label, line,
                             "'" + tag() + "' record needs " + std::to_string(n) + " fields, got " +
                                 std::to_string(fields.size()));
        }
    }

    const std::string& text(std::size_t i) const {
        if (fields.at(i).empty()) throw ParseError(label, line, "empty field " + std::to_string(i + 1));
        return fields[i];
    }

    double number(std::size_t i) const {
        const std::string& s = text(i);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ParseError(label, line, "field " + std::to_string(i + 1) + " is not a number: '" + s + "'");
        }
        return value;
    }
};

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class Fn>
void for_each_record(std::istream& in, const std::string& label, Fn&& fn) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#') continue;
        Record r{label, line_no, split_fields(raw)};
        fn(static_cast<const Record&>(r));
    }
}

}  // namespace resilsim
