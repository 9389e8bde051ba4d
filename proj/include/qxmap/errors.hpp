#pragma once

#include <stdexcept>
#include <string>

namespace qxmap {

// Input text could not be parsed; line/col are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line_(line),
          col_(col) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    int line_;
    int col_;
};

// A configured wall-clock budget was exhausted before the search finished.
class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An enumeration-based routine was asked for more states than its cap allows.
class CapExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qxmap
