#include "cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace potrec::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return f;
}

} // namespace

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view field, const std::string& name, int line) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw ParseError(name, line, "not a number: '" + std::string(field) + "'");
    if (!std::isfinite(v)) throw ParseError(name, line, "non-finite value");
    return v;
}

CoeffMatrix<double> read_coeffs(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (auto f : split_fields(line)) row.push_back(parse_double(f, name, lineno));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(name, lineno, "expected " + std::to_string(rows.front().size()) + " columns, got " +
                                               std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(name, 0, "empty coefficient matrix");
    CoeffMatrix<double> c(static_cast<int>(rows.size()) - 1, static_cast<int>(rows.front().size()) - 1);
    for (int k = 0; k <= c.m; ++k)
        for (int j = 0; j <= c.n; ++j) c(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    return c;
}

CoeffMatrix<double> read_coeffs_file(const std::string& path) {
    auto f = open_or_throw(path);
    return read_coeffs(f, path);
}

std::vector<Point> read_points(std::istream& in, const std::string& name) {
    std::string line;
    int lineno = 0;
    bool header = false;
    std::vector<Point> pts;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split_fields(line);
        if (!header) {
            if (f.size() != 2 || f[0] != "x" || f[1] != "y") throw ParseError(name, lineno, "expected header 'x,y'");
            header = true;
            continue;
        }
        if (f.size() != 2) throw ParseError(name, lineno, "expected 2 columns");
        pts.push_back({parse_double(f[0], name, lineno), parse_double(f[1], name, lineno)});
    }
    if (!header) throw ParseError(name, 0, "missing header 'x,y'");
    return pts;
}

std::vector<Point> read_points_file(const std::string& path) {
    auto f = open_or_throw(path);
    return read_points(f, path);
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

} // namespace potrec::cli
