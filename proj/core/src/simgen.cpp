#include "cubedac/simgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cubedac {

const char* example_name(ExampleKind kind) {
    switch (kind) {
        case ExampleKind::location: return "location";
        case ExampleKind::maxscore: return "maxscore";
        case ExampleKind::valuesearch: return "valuesearch";
    }
    return "unknown";
}

ExampleKind example_from_name(std::string_view name) {
    if (name == "location") return ExampleKind::location;
    if (name == "maxscore") return ExampleKind::maxscore;
    if (name == "valuesearch") return ExampleKind::valuesearch;
    throw std::invalid_argument("unknown example: " + std::string(name));
}

TruthSpec default_truth(ExampleKind kind) {
    switch (kind) {
        case ExampleKind::location:
            return {{0.0}};
        case ExampleKind::maxscore: {
            // (1.5, -1.5) scaled onto the unit circle, where the estimator
            // lives
            const double r = std::sqrt(0.5);
            return {{r, -r}};
        }
        case ExampleKind::valuesearch:
            return {{2.0}};
    }
    throw std::logic_error("unreachable");
}

}  // namespace cubedac
