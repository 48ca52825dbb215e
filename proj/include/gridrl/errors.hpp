#pragma once

#include <stdexcept>
#include <string>

namespace gridrl {

// Contract / argument violations. CLI maps these to exit code 2.
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// NaN/Inf aborts and violated numeric invariants. CLI maps these to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures. CLI maps these to exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridrl
