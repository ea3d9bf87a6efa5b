#include "minij/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

#include "minij/errors.hpp"

namespace minij {

namespace {

const std::array<const char*, 15> kKeywords = {
    "int", "float", "bool", "string", "void", "if",   "else", "while",
    "return", "throw", "try", "catch", "true", "false", "new",
};

// Multi-character punctuators first so maximal munch picks them over prefixes.
const std::array<const char*, 34> kPuncts = {
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "+",  "-",  "*",  "/",  "%",  "<",
    ">",  "=",  "!",  "&",  "|",  "^",  "(",  ")",  "{",  "}",
    "[",  "]",  ",",  ";",
};

struct Cursor {
    const std::string& text;
    const std::string& file;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file, line, col, msg); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void skip_trivia(Cursor& c) {
    while (!c.done()) {
        char ch = c.peek();
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            c.advance();
        } else if (ch == '/' && c.peek(1) == '/') {
            while (!c.done() && c.peek() != '\n') c.advance();
        } else if (ch == '/' && c.peek(1) == '*') {
            int at_line = c.line, at_col = c.col;
            c.advance();
            c.advance();
            while (!(c.peek() == '*' && c.peek(1) == '/')) {
                if (c.done()) throw ParseError(c.file, at_line, at_col, "unterminated block comment");
                c.advance();
            }
            c.advance();
            c.advance();
        } else {
            return;
        }
    }
}

Token lex_number(Cursor& c) {
    Token t;
    t.span.start_line = c.line;
    t.span.start_col = c.col;
    t.span.begin = c.pos;
    std::string lexeme;
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        lexeme += c.peek();
        c.advance();
    }
    bool is_float = false;
    if (c.peek() == '.' && std::isdigit(static_cast<unsigned char>(c.peek(1)))) {
        is_float = true;
        lexeme += '.';
        c.advance();
        while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            lexeme += c.peek();
            c.advance();
        }
    }
    if (c.peek() == 'd' || c.peek() == 'D') {
        is_float = true;
        lexeme += c.peek();
        c.advance();
    }
    if (ident_part(c.peek()) || c.peek() == '.') c.fail("malformed numeric literal");
    t.span.end_line = c.line;
    t.span.end_col = c.col;
    t.span.end = c.pos;
    t.text = lexeme;
    if (is_float) {
        t.kind = TokKind::FloatLit;
        std::string digits = lexeme;
        if (digits.back() == 'd' || digits.back() == 'D') digits.pop_back();
        t.float_value = std::stod(digits);
    } else {
        t.kind = TokKind::IntLit;
        try {
            t.int_value = std::stoll(lexeme);
        } catch (const std::out_of_range&) {
            throw ParseError(c.file, t.span.start_line, t.span.start_col,
                             "integer literal out of range");
        }
    }
    return t;
}

Token lex_string(Cursor& c) {
    Token t;
    t.kind = TokKind::StringLit;
    t.span.start_line = c.line;
    t.span.start_col = c.col;
    t.span.begin = c.pos;
    c.advance();  // opening quote
    std::string value;
    while (true) {
        if (c.done() || c.peek() == '\n')
            throw ParseError(c.file, t.span.start_line, t.span.start_col, "unterminated string literal");
        char ch = c.peek();
        if (ch == '"') {
            c.advance();
            break;
        }
        if (ch == '\\') {
            c.advance();
            char esc = c.peek();
            switch (esc) {
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case '\\': value += '\\'; break;
                case '"': value += '"'; break;
                default: c.fail("unknown escape sequence");
            }
            c.advance();
        } else {
            value += ch;
            c.advance();
        }
    }
    t.span.end_line = c.line;
    t.span.end_col = c.col;
    t.span.end = c.pos;
    t.str_value = value;
    t.text = c.text.substr(t.span.begin, t.span.end - t.span.begin);
    return t;
}

}  // namespace

bool is_minij_keyword(const std::string& word) {
    for (const char* kw : kKeywords)
        if (word == kw) return true;
    return false;
}

std::vector<Token> lex(const std::string& text, const std::string& filename) {
    Cursor c{text, filename};
    std::vector<Token> out;
    while (true) {
        skip_trivia(c);
        if (c.done()) break;
        char ch = c.peek();
        if (ident_start(ch)) {
            Token t;
            t.span.start_line = c.line;
            t.span.start_col = c.col;
            t.span.begin = c.pos;
            std::string word;
            while (ident_part(c.peek())) {
                word += c.peek();
                c.advance();
            }
            t.span.end_line = c.line;
            t.span.end_col = c.col;
            t.span.end = c.pos;
            t.text = word;
            t.kind = is_minij_keyword(word) ? TokKind::Keyword : TokKind::Ident;
            out.push_back(std::move(t));
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            out.push_back(lex_number(c));
        } else if (ch == '"') {
            out.push_back(lex_string(c));
        } else {
            bool matched = false;
            for (const char* p : kPuncts) {
                std::size_t n = std::char_traits<char>::length(p);
                if (c.text.compare(c.pos, n, p) == 0) {
                    Token t;
                    t.kind = TokKind::Punct;
                    t.text = p;
                    t.span.start_line = c.line;
                    t.span.start_col = c.col;
                    t.span.begin = c.pos;
                    for (std::size_t i = 0; i < n; ++i) c.advance();
                    t.span.end_line = c.line;
                    t.span.end_col = c.col;
                    t.span.end = c.pos;
                    out.push_back(std::move(t));
                    matched = true;
                    break;
                }
            }
            if (!matched) c.fail(std::string("unexpected character '") + ch + "'");
        }
    }
    Token eof;
    eof.kind = TokKind::Eof;
    eof.span.start_line = c.line;
    eof.span.start_col = c.col;
    eof.span.begin = c.pos;
    eof.span.end_line = c.line;
    eof.span.end_col = c.col;
    eof.span.end = c.pos;
    out.push_back(std::move(eof));
    return out;
}

}  // namespace minij
