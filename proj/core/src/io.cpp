// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blockcorr/errors.hpp"

namespace blockcorr {

std::string format_significant(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

double round_significant(double value, int digits) {
    return std::stod(format_significant(value, digits));
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        std::size_t lo = 0, hi = field.size();
        while (lo < hi && std::isspace(static_cast<unsigned char>(field[lo]))) ++lo;
        while (hi > lo && std::isspace(static_cast<unsigned char>(field[hi - 1]))) --hi;
        if (hi - lo >= 2 && field[lo] == '"' && field[hi - 1] == '"') {
            ++lo;
            --hi;
        }
        fields.push_back(field.substr(lo, hi - lo));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

namespace {

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

NumericCsv read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open " + path);

    NumericCsv out;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);

        if (first_content_line) {
            first_content_line = false;
            bool all_numeric = true;
            for (const auto& f : fields)
                if (!parse_double(f)) {
                    all_numeric = false;
                    break;
                }
            if (!all_numeric) {
                out.header = fields;
                width = fields.size();
                continue;
            }
        }

        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw InvalidInputError(path + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(width) + " fields, got " +
                                    std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_double(fields[c]);
            if (!v)
                throw InvalidInputError(path + ":" + std::to_string(line_no) + ": column " +
                                        std::to_string(c + 1) + " is not a number: '" +
                                        fields[c] + "'");
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw InvalidInputError(path + ": no data rows");
    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return out;
}

}  // namespace blockcorr
