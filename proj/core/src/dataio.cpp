#include "cubedac/dataio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cubedac {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, int line) {
    const std::string s = strip(field);
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw CsvError("expected a number, got '" + s + "'", line);
    }
    if (used != s.size()) throw CsvError("trailing junk after number '" + s + "'", line);
    if (!std::isfinite(v)) throw CsvError("non-finite value '" + s + "'", line);
    return v;
}

// Opens the file, checks the header, and hands each data line's fields to
// the row callback with its line number.
template <class RowFn>
void read_csv(const std::string& path, const std::string& header, std::size_t ncols,
              RowFn&& row) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open input file: " + path, 0);
    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty file: " + path, 0);
    if (strip(line) != header)
        throw CsvError("expected header '" + header + "', got '" + strip(line) + "'", 1);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != ncols)
            throw CsvError("expected " + std::to_string(ncols) + " fields, got " +
                               std::to_string(fields.size()),
                           line_no);
        row(fields, line_no);
    }
}

}  // namespace

std::vector<double> read_location_csv(const std::string& path) {
    std::vector<double> out;
    read_csv(path, "x", 1, [&](const std::vector<std::string>& f, int line) {
        out.push_back(parse_double(f[0], line));
    });
    return out;
}

std::vector<RegressionSample> read_maxscore_csv(const std::string& path) {
    std::vector<RegressionSample> out;
    read_csv(path, "x1,x2,y", 3, [&](const std::vector<std::string>& f, int line) {
        RegressionSample s;
        s.x = {parse_double(f[0], line), parse_double(f[1], line)};
        s.y = parse_double(f[2], line);
        out.push_back(std::move(s));
    });
    return out;
}

std::vector<TreatmentSample> read_valuesearch_csv(const std::string& path) {
    std::vector<TreatmentSample> out;
    read_csv(path, "x,a,y,pi", 4, [&](const std::vector<std::string>& f, int line) {
        TreatmentSample s;
        s.x = parse_double(f[0], line);
        const double a = parse_double(f[1], line);
        if (a != 0.0 && a != 1.0) throw CsvError("treatment a must be 0 or 1", line);
        s.a = static_cast<int>(a);
        s.y = parse_double(f[2], line);
        s.pi = parse_double(f[3], line);
        if (!(s.pi > 0.0 && s.pi < 1.0)) throw CsvError("pi must lie in (0,1)", line);
        out.push_back(s);
    });
    return out;
}

}  // namespace cubedac
