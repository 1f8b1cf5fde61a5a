#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtd {

// Input whose shape does not match the model or the dataset geometry.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parameter outside its allowed range, or a requested split that cannot be built.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Zero-norm vector where a direction is required.
struct DegenerateVectorError : std::domain_error {
    using std::domain_error::domain_error;
};

// Malformed feature file. `record` is the 1-based data record, 0 for the header.
struct ParseError : std::runtime_error {
    ParseError(std::size_t record_, const std::string& detail)
        : std::runtime_error(record_ == 0 ? "header: " + detail
                                          : "record " + std::to_string(record_) + ": " + detail),
          record(record_) {}

    std::size_t record;
};

}  // namespace mtd
