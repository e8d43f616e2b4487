#pragma once

// CSV input and output for the command line.

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "potrec/square2d.hpp"

namespace potrec::cli {

/// Malformed input; line is 1-based, 0 when the file as a whole is at fault.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Coefficient matrix: row index k, column index j, no header.
CoeffMatrix<double> read_coeffs(std::istream& in, const std::string& name = "coeffs");
CoeffMatrix<double> read_coeffs_file(const std::string& path);

/// Points with header "x,y".
std::vector<Point> read_points(std::istream& in, const std::string& name = "points");
std::vector<Point> read_points_file(const std::string& path);

/// Shortest decimal that round-trips to the same double.
std::string fmt(double v);

/// Comma-joined fields terminated by a newline.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

std::vector<std::string_view> split_fields(std::string_view line);
double parse_double(std::string_view field, const std::string& name, int line);

} // namespace potrec::cli
