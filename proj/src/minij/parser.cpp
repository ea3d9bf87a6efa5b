#include "minij/parser.hpp"

#include <initializer_list>

#include "minij/errors.hpp"
#include "minij/lexer.hpp"

namespace minij {

namespace {

constexpr int kMaxNesting = 200;

struct Parser {
    std::vector<Token> toks;
    std::string file;
    std::size_t pos = 0;
    int depth = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& advance() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(file, t.span.start_line, t.span.start_col, msg);
    }

    bool at_punct(const char* p) const {
        return peek().kind == TokKind::Punct && peek().text == p;
    }
    bool at_keyword(const char* k) const {
        return peek().kind == TokKind::Keyword && peek().text == k;
    }
    bool at_any_keyword(std::initializer_list<const char*> ks) const {
        if (peek().kind != TokKind::Keyword) return false;
        for (const char* k : ks)
            if (peek().text == k) return true;
        return false;
    }

    Token expect_punct(const char* p) {
        if (!at_punct(p)) fail(std::string("expected '") + p + "'");
        return advance();
    }
    Token expect_keyword(const char* k) {
        if (!at_keyword(k)) fail(std::string("expected '") + k + "'");
        return advance();
    }
    Token expect_ident() {
        if (peek().kind != TokKind::Ident) fail("expected identifier");
        return advance();
    }

    struct NestGuard {
        Parser& p;
        explicit NestGuard(Parser& p_) : p(p_) {
            if (++p.depth > kMaxNesting) p.fail("nesting too deep");
        }
        ~NestGuard() { --p.depth; }
    };

    static Span join(const Span& a, const Span& b) {
        Span s = a;
        s.end_line = b.end_line;
        s.end_col = b.end_col;
        s.end = b.end;
        return s;
    }

    bool at_type_keyword() const {
        return at_any_keyword({"int", "float", "bool", "string", "void"});
    }

    Type parse_type() {
        if (!at_type_keyword()) fail("expected type");
        std::string w = advance().text;
        Type t;
        if (w == "int") t.base = BaseType::Int;
        else if (w == "float") t.base = BaseType::Float;
        else if (w == "bool") t.base = BaseType::Bool;
        else if (w == "string") t.base = BaseType::String;
        else t.base = BaseType::Void;
        if (at_punct("[")) {
            advance();
            expect_punct("]");
            if (t.base == BaseType::Void) fail("void cannot be an array element type");
            t.is_array = true;
        }
        return t;
    }

    Node parse_program() {
        Node prog;
        prog.kind = NodeKind::Program;
        prog.span = peek().span;
        while (peek().kind != TokKind::Eof) {
            if (!at_type_keyword()) fail("expected declaration");
            // type IDENT '(' starts a function; otherwise a global variable.
            Span start = peek().span;
            Type t = parse_type();
            Token name = expect_ident();
            if (at_punct("(")) {
                prog.children.push_back(parse_func_rest(t, name, start));
            } else {
                prog.children.push_back(parse_var_decl_rest(t, name, start));
            }
        }
        if (!prog.children.empty())
            prog.span = join(prog.children.front().span, prog.children.back().span);
        return prog;
    }

    Node parse_func_rest(Type ret, const Token& name, const Span& start) {
        Node fn;
        fn.kind = NodeKind::FuncDecl;
        fn.name = name.text;
        fn.decl_type = ret;
        expect_punct("(");
        if (!at_punct(")")) {
            while (true) {
                Node p;
                p.kind = NodeKind::Param;
                Span pstart = peek().span;
                p.decl_type = parse_type();
                if (p.decl_type.is_void()) fail("parameter cannot have void type");
                Token pname = expect_ident();
                p.name = pname.text;
                p.span = join(pstart, pname.span);
                fn.children.push_back(std::move(p));
                if (at_punct(",")) {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        fn.children.push_back(parse_block());
        fn.span = join(start, fn.children.back().span);
        return fn;
    }

    Node parse_var_decl_rest(Type t, const Token& name, const Span& start) {
        if (t.is_void()) fail("variable cannot have void type");
        Node d;
        d.kind = NodeKind::VarDeclStmt;
        d.name = name.text;
        d.decl_type = t;
        if (at_punct("=")) {
            advance();
            d.children.push_back(parse_expr());
        }
        Token semi = expect_punct(";");
        d.span = join(start, semi.span);
        return d;
    }

    Node parse_block() {
        NestGuard guard(*this);
        Node blk;
        blk.kind = NodeKind::BlockStmt;
        Span start = expect_punct("{").span;
        while (!at_punct("}")) {
            if (peek().kind == TokKind::Eof) fail("unterminated block");
            blk.children.push_back(parse_statement());
        }
        Span end = expect_punct("}").span;
        blk.span = join(start, end);
        return blk;
    }

    Node parse_statement() {
        NestGuard guard(*this);
        if (at_type_keyword()) {
            Span start = peek().span;
            Type t = parse_type();
            Token name = expect_ident();
            return parse_var_decl_rest(t, name, start);
        }
        if (at_keyword("if")) return parse_if();
        if (at_keyword("while")) return parse_while();
        if (at_keyword("return")) return parse_return();
        if (at_keyword("throw")) return parse_throw();
        if (at_keyword("try")) return parse_try();
        if (at_punct("{")) return parse_block();
        if (at_punct(";")) {
            Node e;
            e.kind = NodeKind::EmptyStmt;
            e.span = advance().span;
            return e;
        }
        return parse_expr_or_assign();
    }

    Node parse_if() {
        Node s;
        s.kind = NodeKind::IfStmt;
        Span start = expect_keyword("if").span;
        expect_punct("(");
        s.children.push_back(parse_expr());
        expect_punct(")");
        s.children.push_back(parse_block());
        if (at_keyword("else")) {
            advance();
            if (at_keyword("if")) {
                s.children.push_back(parse_if());
            } else {
                s.children.push_back(parse_block());
            }
        }
        s.span = join(start, s.children.back().span);
        return s;
    }

    Node parse_while() {
        Node s;
        s.kind = NodeKind::WhileStmt;
        Span start = expect_keyword("while").span;
        expect_punct("(");
        s.children.push_back(parse_expr());
        expect_punct(")");
        s.children.push_back(parse_block());
        s.span = join(start, s.children.back().span);
        return s;
    }

    Node parse_return() {
        Node s;
        s.kind = NodeKind::ReturnStmt;
        Span start = expect_keyword("return").span;
        if (!at_punct(";")) s.children.push_back(parse_expr());
        Span end = expect_punct(";").span;
        s.span = join(start, end);
        return s;
    }

    Node parse_throw() {
        Node s;
        s.kind = NodeKind::ThrowStmt;
        Span start = expect_keyword("throw").span;
        s.children.push_back(parse_expr());
        Span end = expect_punct(";").span;
        s.span = join(start, end);
        return s;
    }

    Node parse_try() {
        Node s;
        s.kind = NodeKind::TryStmt;
        Span start = expect_keyword("try").span;
        s.children.push_back(parse_block());
        expect_keyword("catch");
        expect_punct("(");
        s.name = expect_ident().text;
        expect_punct(")");
        s.children.push_back(parse_block());
        s.span = join(start, s.children.back().span);
        return s;
    }

    bool at_assign_op() const {
        return peek().kind == TokKind::Punct &&
               (peek().text == "=" || peek().text == "+=" || peek().text == "-=" ||
                peek().text == "*=" || peek().text == "/=");
    }

    Node parse_expr_or_assign() {
        Span start = peek().span;
        Node e = parse_expr();
        if (at_assign_op()) {
            if (e.kind != NodeKind::NameExpr && e.kind != NodeKind::IndexExpr)
                fail("invalid assignment target");
            Node s;
            s.kind = NodeKind::AssignStmt;
            s.op = advance().text;
            s.children.push_back(std::move(e));
            s.children.push_back(parse_expr());
            Span end = expect_punct(";").span;
            s.span = join(start, end);
            return s;
        }
        bool is_call = e.kind == NodeKind::CallExpr;
        bool is_incdec =
            e.kind == NodeKind::UnaryExpr && (e.op == "++" || e.op == "--");
        if (!is_call && !is_incdec)
            fail("only calls, increments, decrements and assignments can stand alone");
        Node s;
        s.kind = NodeKind::ExprStmt;
        s.children.push_back(std::move(e));
        Span end = expect_punct(";").span;
        s.span = join(start, end);
        return s;
    }

    // Binary precedence climbing, lowest first; all operators left-associative.
    static int binary_prec(const std::string& op) {
        if (op == "||") return 0;
        if (op == "&&") return 1;
        if (op == "|") return 2;
        if (op == "^") return 3;
        if (op == "&") return 4;
        if (op == "==" || op == "!=") return 5;
        if (op == "<" || op == "<=" || op == ">" || op == ">=") return 6;
        if (op == "<<" || op == ">>") return 7;
        if (op == "+" || op == "-") return 8;
        if (op == "*" || op == "/" || op == "%") return 9;
        return -1;
    }

    Node parse_expr() { return parse_binary(0); }

    Node parse_binary(int min_prec) {
        NestGuard guard(*this);
        Node lhs = parse_unary();
        while (peek().kind == TokKind::Punct) {
            int prec = binary_prec(peek().text);
            if (prec < min_prec) break;
            Node bin;
            bin.kind = NodeKind::BinaryExpr;
            bin.op = advance().text;
            Node rhs = parse_binary(prec + 1);
            bin.span = join(lhs.span, rhs.span);
            bin.children.push_back(std::move(lhs));
            bin.children.push_back(std::move(rhs));
            lhs = std::move(bin);
        }
        return lhs;
    }

    bool at_cast() const {
        return at_punct("(") && peek(1).kind == TokKind::Keyword &&
               (peek(1).text == "int" || peek(1).text == "float") &&
               peek(2).kind == TokKind::Punct && peek(2).text == ")";
    }

    Node parse_unary() {
        NestGuard guard(*this);
        if (at_punct("-") || at_punct("!")) {
            Node u;
            u.kind = NodeKind::UnaryExpr;
            Span start = peek().span;
            u.op = advance().text;
            u.children.push_back(parse_unary());
            u.span = join(start, u.children.back().span);
            return u;
        }
        if (at_cast()) {
            Node c;
            c.kind = NodeKind::CastExpr;
            Span start = advance().span;  // '('
            c.decl_type = peek().text == "int" ? Type::int_t() : Type::float_t();
            advance();
            advance();  // ')'
            c.children.push_back(parse_unary());
            c.span = join(start, c.children.back().span);
            return c;
        }
        return parse_postfix();
    }

    Node parse_postfix() {
        Node e = parse_primary();
        while (true) {
            if (at_punct("[")) {
                Node ix;
                ix.kind = NodeKind::IndexExpr;
                advance();
                Node index = parse_expr();
                Span end = expect_punct("]").span;
                ix.span = join(e.span, end);
                ix.children.push_back(std::move(e));
                ix.children.push_back(std::move(index));
                e = std::move(ix);
            } else if (at_punct("++") || at_punct("--")) {
                Node u;
                u.kind = NodeKind::UnaryExpr;
                u.op = peek().text;
                Span end = advance().span;
                u.span = join(e.span, end);
                u.children.push_back(std::move(e));
                // ++/-- are statement-level; nothing may follow them postfix.
                return u;
            } else {
                break;
            }
        }
        return e;
    }

    Node parse_primary() {
        NestGuard guard(*this);
        const Token& t = peek();
        switch (t.kind) {
            case TokKind::IntLit: {
                Node n = make_int_lit(t.int_value);
                n.span = t.span;
                advance();
                return n;
            }
            case TokKind::FloatLit: {
                Node n = make_float_lit(t.float_value, t.text);
                n.span = t.span;
                advance();
                return n;
            }
            case TokKind::StringLit: {
                Node n = make_string_lit(t.str_value);
                n.span = t.span;
                advance();
                return n;
            }
            case TokKind::Keyword: {
                if (t.text == "true" || t.text == "false") {
                    Node n = make_bool_lit(t.text == "true");
                    n.span = t.span;
                    advance();
                    return n;
                }
                if (t.text == "new") {
                    Node n;
                    n.kind = NodeKind::NewArrayExpr;
                    Span start = advance().span;
                    if (!at_any_keyword({"int", "float", "bool", "string"}))
                        fail("expected element type after 'new'");
                    std::string w = advance().text;
                    Type et;  // bare element type: the '[' belongs to the length
                    if (w == "int") et.base = BaseType::Int;
                    else if (w == "float") et.base = BaseType::Float;
                    else if (w == "bool") et.base = BaseType::Bool;
                    else et.base = BaseType::String;
                    n.decl_type = et;
                    expect_punct("[");
                    n.children.push_back(parse_expr());
                    Span end = expect_punct("]").span;
                    n.span = join(start, end);
                    return n;
                }
                fail("unexpected keyword '" + t.text + "'");
            }
            case TokKind::Ident: {
                Token name = advance();
                if (at_punct("(")) {
                    Node call;
                    call.kind = NodeKind::CallExpr;
                    call.name = name.text;
                    advance();
                    if (!at_punct(")")) {
                        while (true) {
                            call.children.push_back(parse_expr());
                            if (at_punct(",")) {
                                advance();
                                continue;
                            }
                            break;
                        }
                    }
                    Span end = expect_punct(")").span;
                    call.span = join(name.span, end);
                    return call;
                }
                Node n = make_name(name.text);
                n.span = name.span;
                return n;
            }
            case TokKind::Punct: {
                if (t.text == "(") {
                    advance();
                    Node e = parse_expr();
                    expect_punct(")");
                    return e;
                }
                fail("unexpected '" + t.text + "'");
            }
            default:
                fail("unexpected end of input");
        }
    }
};

}  // namespace

Node parse(const std::string& text, const std::string& filename) {
    Parser p{lex(text, filename), filename};
    return p.parse_program();
}

}  // namespace minij
