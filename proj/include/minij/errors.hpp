#pragma once

#include <stdexcept>
#include <string>

namespace minij {

/// Raised by the lexer or parser on malformed source text.
struct ParseError : std::runtime_error {
    std::string file;
    int line = 0;
    int col = 0;

    ParseError(std::string file_, int line_, int col_, const std::string& what_)
        : std::runtime_error(file_ + ":" + std::to_string(line_) + ":" + std::to_string(col_) +
                             ": " + what_),
          file(std::move(file_)),
          line(line_),
          col(col_) {}
};

/// Raised by the static checker on ill-typed programs.
struct TypeError : std::runtime_error {
    std::string file;
    int line = 0;
    int col = 0;

    TypeError(std::string file_, int line_, int col_, const std::string& what_)
        : std::runtime_error(file_ + ":" + std::to_string(line_) + ":" + std::to_string(col_) +
                             ": " + what_),
          file(std::move(file_)),
          line(line_),
          col(col_) {}
};

/// Raised when a test selection names a test that does not exist.
struct UnknownTest : std::runtime_error {
    explicit UnknownTest(const std::string& name)
        : std::runtime_error("unknown test: " + name) {}
};

}  // namespace minij
