#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mip/errors.hpp"

namespace mip {

struct CsvTable {
    std::vector<std::string> header;  // empty if the file had none
    Eigen::MatrixXd values;
    bool had_header = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

/** Locale-independent full-token double parse ('.' decimal separator). */
inline bool parse_double(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace detail

/** Comma-separated numeric table.  An optional single header row is
 *  auto-detected: if any field of the first row fails to parse as a number,
 *  that row is taken as column names.  Rows must all have the same width;
 *  non-numeric fields elsewhere are an error. */
inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> fields = detail::split_comma(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!detail::parse_double(fields[i], row[i])) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (rows.empty() && !t.had_header) {
                t.header = fields;
                t.had_header = true;
                width = fields.size();
                continue;
            }
            throw invalid_input("line " + std::to_string(line_no) +
                                ": non-numeric field outside the header row");
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw invalid_input("line " + std::to_string(line_no) + ": expected " +
                                std::to_string(width) + " fields, got " +
                                std::to_string(fields.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw invalid_input("no data rows in CSV input");
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file: " + path);
    return read_csv(in);
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const Eigen::MatrixXd& m,
                      std::span<const std::string> header = {}) {
    if (!header.empty()) {
        if (static_cast<Eigen::Index>(header.size()) != m.cols())
            throw invalid_input("header width does not match column count");
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << '\n';
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << (c ? "," : "") << format_double(m(r, c));
        out << '\n';
    }
}

inline void write_csv_file(const std::string& path, const Eigen::MatrixXd& m,
                           std::span<const std::string> header = {}) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot open file for writing: " + path);
    write_csv(out, m, header);
}

}  // namespace mip
