#pragma once

#include <stdexcept>
#include <string>

namespace deepspread {

// Exception hierarchy, grouped by how the CLI maps failures to exit codes:
//   ValidationError -> 2, DataError -> 3, NumericError -> 4.

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeError : public ValidationError {
public:
    explicit ShapeError(const std::string& msg) : ValidationError(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input that cannot be interpreted at all (e.g. a CSV header
// missing required columns).
class FormatError : public DataError {
public:
    explicit FormatError(const std::string& msg) : DataError(msg) {}
};

class EmptyInputError : public DataError {
public:
    explicit EmptyInputError(const std::string& msg) : DataError(msg) {}
};

class InsufficientDataError : public DataError {
public:
    explicit InsufficientDataError(const std::string& msg) : DataError(msg) {}
};

class SplitError : public DataError {
public:
    explicit SplitError(const std::string& msg) : DataError(msg) {}
};

// Inputs that are syntactically fine but statistically unusable
// (constant series, zero variance).
class DegenerateDataError : public DataError {
public:
    explicit DegenerateDataError(const std::string& msg) : DataError(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training produced a non-finite parameter or objective.
class DivergenceError : public NumericError {
public:
    explicit DivergenceError(const std::string& msg) : NumericError(msg) {}
};

// An iterative solver hit its iteration cap before reaching tolerance.
class ConvergenceError : public NumericError {
public:
    explicit ConvergenceError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace deepspread
