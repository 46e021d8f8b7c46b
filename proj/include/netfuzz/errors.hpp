#pragma once

#include <stdexcept>
#include <string>

namespace netfuzz {

/// Syntax error in any of the text formats (Verilog subset, Liberty subset,
/// VCD, function strings). Line/column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) +
                                            ", col " + std::to_string(column) + ")"
                                      : message),
          line_(line), column_(column)
    {
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

} // namespace netfuzz
