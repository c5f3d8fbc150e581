#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cubedac/estimators.hpp"

namespace cubedac {

// Input-file problem with the 1-based line it was found on (0 for
// file-level errors such as a missing file).
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& message, int line)
        : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Headers are required and checked verbatim:
//   location:    x
//   maxscore:    x1,x2,y
//   valuesearch: x,a,y,pi
std::vector<double> read_location_csv(const std::string& path);
std::vector<RegressionSample> read_maxscore_csv(const std::string& path);
std::vector<TreatmentSample> read_valuesearch_csv(const std::string& path);

}  // namespace cubedac
