#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minij/ast.hpp"

namespace minij {

enum class TokKind {
    Ident,
    Keyword,
    IntLit,
    FloatLit,
    StringLit,
    Punct,
    Eof,
};

struct Token {
    TokKind kind = TokKind::Eof;
    std::string text;       // identifier / keyword / punctuator spelling, or literal lexeme
    std::string str_value;  // decoded value for StringLit
    std::int64_t int_value = 0;
    double float_value = 0.0;
    Span span;
};

/// Tokenizes MiniJ source. Comments (`//` and `/* */`) and whitespace are
/// skipped. Throws ParseError on malformed input.
std::vector<Token> lex(const std::string& text, const std::string& filename);

bool is_minij_keyword(const std::string& word);

}  // namespace minij
