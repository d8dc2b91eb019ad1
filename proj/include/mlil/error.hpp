#ifndef MLIL_ERROR_HPP
#define MLIL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mlil {

/// Base class for all library errors. `what()` always names the offending
/// file, label, column or flag where one exists.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. Carries a 1-based line number when known (0 otherwise).
class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t line = 0)
        : error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid input that violates a contract (empty label space,
/// zero-positive label, k out of range, ...).
class data_error : public error {
public:
    using error::error;
};

} // namespace mlil

#endif
