#pragma once

// Field file format: a two-line header followed by row-major samples.
//   line 1: n,length,periodic,origin_re,origin_im   (values; periodic is 0/1)
//   line 2: re,im                                   (column names)
//   then n*n lines "re,im".
// All doubles are written with 17 significant digits so the decimal text
// round-trips bit-exactly.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "beurlab/field.hpp"

namespace beurlab {

/// Shortest-exact decimal form of a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_field(const ComplexField& f, std::ostream& os) {
    const GridSpec& g = f.grid();
    os << g.n << ',' << format_double(g.length) << ',' << (g.periodic ? 1 : 0) << ','
       << format_double(g.origin.real()) << ',' << format_double(g.origin.imag()) << '\n';
    os << "re,im\n";
    for (long i = 0; i < f.size(); ++i)
        os << format_double(f[i].real()) << ',' << format_double(f[i].imag()) << '\n';
}

inline void write_field(const ComplexField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open field file for writing: " + path);
    write_field(f, os);
}

namespace io_detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw Error("field file: malformed number '" + s + "'");
    return v;
}

} // namespace io_detail

inline ComplexField read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error("field file: missing header line");
    auto head = io_detail::split_csv(line);
    if (head.size() != 5) throw Error("field file: header must have 5 entries");
    const long n = std::strtol(head[0].c_str(), nullptr, 10);
    const double length = io_detail::parse_double(head[1]);
    const int periodic = static_cast<int>(std::strtol(head[2].c_str(), nullptr, 10));
    const Complex origin(io_detail::parse_double(head[3]), io_detail::parse_double(head[4]));
    if (periodic != 0 && periodic != 1) throw Error("field file: periodic flag must be 0 or 1");
    GridSpec grid = make_grid(static_cast<int>(n), length, periodic == 1, origin);

    if (!std::getline(is, line)) throw Error("field file: missing column header");
    if (io_detail::split_csv(line) != std::vector<std::string>{"re", "im"})
        throw Error("field file: column header must be 're,im'");

    std::vector<Complex> samples;
    samples.reserve(grid.count());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cols = io_detail::split_csv(line);
        if (cols.size() != 2) throw Error("field file: sample rows must have 2 entries");
        samples.emplace_back(io_detail::parse_double(cols[0]), io_detail::parse_double(cols[1]));
    }
    if (static_cast<long>(samples.size()) != grid.count())
        throw Error("field file: sample count does not match grid");
    return ComplexField(grid, std::move(samples));
}

inline ComplexField read_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open field file for reading: " + path);
    return read_field(is);
}

} // namespace beurlab
