#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "minij/ast.hpp"
#include "minij/errors.hpp"
#include "minij/interp.hpp"
#include "minij/lexer.hpp"
#include "minij/parser.hpp"
#include "minij/printer.hpp"
#include "minij/typecheck.hpp"

using namespace minij;

namespace {

Node parse1(const std::string& src) { return parse(src, "t.mj"); }

std::vector<SourceFile> make_files(std::initializer_list<std::string> sources) {
    std::vector<SourceFile> files;
    int i = 0;
    for (const std::string& s : sources) {
        files.push_back({"f" + std::to_string(i++) + ".mj", parse1(s)});
    }
    return files;
}

void tc(std::initializer_list<std::string> sources) {
    auto files = make_files(sources);
    typecheck_program(files);
}

Outcome run_one(const std::string& src, const std::string& test_name,
                long budget = 1'000'000) {
    auto files = make_files({src});
    typecheck_program(files);
    auto verdicts = run_tests(files, {test_name}, StepBudget{budget});
    REQUIRE(verdicts.size() == 1);
    return verdicts[0].outcome;
}

}  // namespace

TEST_CASE("lexer basics") {
    auto toks = lex("int x = 42; // comment\nfloat y = 1.5; /* block */ y <<= 1;", "t.mj");
    // "<<=" is not an operator: maximal munch yields "<<" then "=".
    std::vector<std::string> texts;
    for (const auto& t : toks)
        if (t.kind != minij::TokKind::Eof) texts.push_back(t.text);
    std::vector<std::string> expect = {"int", "x", "=",  "42", ";", "float", "y",
                                       "=",   "1.5", ";", "y",  "<<", "=",    "1", ";"};
    CHECK(texts == expect);
    CHECK(toks[3].int_value == 42);
    CHECK(toks[8].float_value == doctest::Approx(1.5));

    CHECK_THROWS_AS(lex("int x = 1..2;", "t.mj"), ParseError);
    CHECK_THROWS_AS(lex("string s = \"open;", "t.mj"), ParseError);
    CHECK_THROWS_AS(lex("int x = @;", "t.mj"), ParseError);
    CHECK_THROWS_AS(lex("/* never closed", "t.mj"), ParseError);
    CHECK_THROWS_AS(lex("int big = 99999999999999999999;", "t.mj"), ParseError);
}

TEST_CASE("parse of a simple function") {
    Node p = parse1("int f(int x) { return x + 1; }");
    REQUIRE(p.children.size() == 1);
    const Node& fn = p.children[0];
    CHECK(fn.kind == NodeKind::FuncDecl);
    CHECK(fn.name == "f");
    CHECK(fn.decl_type == Type::int_t());
    REQUIRE(fn.children.size() == 2);
    CHECK(fn.children[0].kind == NodeKind::Param);
    const Node& body = fn.children[1];
    REQUIRE(body.children.size() == 1);
    CHECK(body.children[0].kind == NodeKind::ReturnStmt);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse1("int f( {"), ParseError);
    CHECK_THROWS_AS(parse1("int f() { a + b = c; }"), ParseError);
    CHECK_THROWS_AS(parse1("int f() { 1 + 2; }"), ParseError);
    CHECK_THROWS_AS(parse1("int x = 5"), ParseError);
    CHECK_THROWS_AS(parse1("void x;"), ParseError);
    CHECK_THROWS_AS(parse1("int f() { if (true) return 1; }"), ParseError);  // braces required
    try {
        parse1("int f() {\n  return $;\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("canonical unparse") {
    std::string src =
        "int g = 10;\n"
        "\n"
        "int f(int x, float y) {\n"
        "    int acc = 0;\n"
        "    while (x > 0) {\n"
        "        acc += x;\n"
        "        x--;\n"
        "    }\n"
        "    if (acc > 100) {\n"
        "        return acc;\n"
        "    } else if (acc > 10) {\n"
        "        return acc * 2;\n"
        "    } else {\n"
        "        return (int) y;\n"
        "    }\n"
        "}\n";
    CHECK(unparse(parse1(src)) == src);
}

TEST_CASE("unparse drops redundant parentheses and keeps needed ones") {
    CHECK(unparse(parse1("int f() { return ((1 + 2)) * 3; }")) ==
          "int f() {\n    return (1 + 2) * 3;\n}\n");
    CHECK(unparse(parse1("int f() { return 1 + (2 * 3); }")) ==
          "int f() {\n    return 1 + 2 * 3;\n}\n");
    CHECK(unparse(parse1("int f(int a) { return -(-a); }")) ==
          "int f(int a) {\n    return -(-a);\n}\n");
    CHECK(unparse(parse1("bool f(bool a, bool b, bool c) { return a && (b || c); }")) ==
          "bool f(bool a, bool b, bool c) {\n    return a && (b || c);\n}\n");
    CHECK(unparse(parse1("int f(int[] a, int i) { return a[i + 1]; }")) ==
          "int f(int[] a, int i) {\n    return a[i + 1];\n}\n");
}

TEST_CASE("float literal lexemes survive the round trip") {
    std::string src = "float f() {\n    return 10d + 1.0 + 2.50;\n}\n";
    CHECK(unparse(parse1(src)) == src);
}

TEST_CASE("string escapes survive the round trip") {
    std::string src = "string f() {\n    return \"a\\\"b\\\\c\\n\\td\";\n}\n";
    Node p = parse1(src);
    CHECK(unparse(p) == src);
    CHECK(p.children[0].children.back().children[0].children[0].str_val == "a\"b\\c\n\td");
}

TEST_CASE("unparse-parse structural fixpoint on assorted sources") {
    std::vector<std::string> sources = {
        "int f(int x) { return x + 1; }",
        "void t() { int[] a = new int[3]; a[0] = 1; a[1] += 2; print(len(a)); }",
        "void t() { try { throw \"boom\"; } catch (e) { print(e); } }",
        "bool near(float a, float b) { float d = a - b; if (d < 0.0) { d = -d; } return d < 0.0001; }",
        "int h(int a, int b) { return a << 2 | b & 7 ^ 3; }",
        "void t() { int i = 0; while (i < 10) { i++; } ; }",
        "float q(float x) { return (float) ((int) x); }",
    };
    for (const std::string& s : sources) {
        Node first = parse1(s);
        std::string text = unparse(first);
        Node second = parse(text, "t.mj");
        CHECK_MESSAGE(same_structure(first, second), "source: " << s);
        CHECK(unparse(second) == text);  // idempotent
    }
}

// ---------------------------------------------------------------------------
// Random structurally-valid ASTs: unparse then parse must reproduce the tree.
// ---------------------------------------------------------------------------

namespace {

struct Gen {
    std::mt19937_64 eng{0xC0FFEEULL};

    std::size_t pick(std::size_t n) { return eng() % n; }

    std::string ident() {
        static const char* pool[] = {"a", "b", "c", "x", "y", "foo", "bar", "v0", "n1"};
        return pool[pick(9)];
    }

    Type scalar_type() {
        static const Type pool[] = {Type::int_t(), Type::float_t(), Type::bool_t(),
                                    Type::string_t()};
        return pool[pick(4)];
    }

    Type any_var_type() {
        Type t = scalar_type();
        if (pick(4) == 0) t.is_array = true;
        return t;
    }

    Node lvalue() {
        if (pick(3) == 0) {
            Node ix;
            ix.kind = NodeKind::IndexExpr;
            ix.children.push_back(make_name(ident()));
            ix.children.push_back(expr(1));
            return ix;
        }
        return make_name(ident());
    }

    Node call(int depth) {
        Node c;
        c.kind = NodeKind::CallExpr;
        c.name = ident();
        std::size_t nargs = pick(3);
        for (std::size_t i = 0; i < nargs; ++i) c.children.push_back(expr(depth - 1));
        return c;
    }

    Node expr(int depth) {
        if (depth <= 0) {
            switch (pick(5)) {
                case 0: return make_int_lit(static_cast<std::int64_t>(pick(100)));
                case 1: {
                    static const char* lex[] = {"0.0", "1.5", "10d", "3.25", "2.0d", "0.5"};
                    std::size_t i = pick(6);
                    return make_float_lit(0.0, lex[i]);
                }
                case 2: return make_bool_lit(pick(2) == 0);
                case 3: {
                    static const char* strs[] = {"", "abc", "a\"b", "x\\y", "t\tn\n"};
                    return make_string_lit(strs[pick(5)]);
                }
                default: return make_name(ident());
            }
        }
        switch (pick(8)) {
            case 0: {
                Node b;
                b.kind = NodeKind::BinaryExpr;
                static const char* ops[] = {"+",  "-", "*",  "/",  "%",  "<",  "<=", ">",
                                            ">=", "==", "!=", "&&", "||", "&",  "|",  "^",
                                            "<<", ">>"};
                b.op = ops[pick(18)];
                b.children.push_back(expr(depth - 1));
                b.children.push_back(expr(depth - 1));
                return b;
            }
            case 1: {
                Node u;
                u.kind = NodeKind::UnaryExpr;
                u.op = pick(2) == 0 ? "-" : "!";
                u.children.push_back(expr(depth - 1));
                return u;
            }
            case 2: {
                Node c;
                c.kind = NodeKind::CastExpr;
                c.decl_type = pick(2) == 0 ? Type::int_t() : Type::float_t();
                c.children.push_back(expr(depth - 1));
                return c;
            }
            case 3: return call(depth);
            case 4: {
                Node ix;
                ix.kind = NodeKind::IndexExpr;
                ix.children.push_back(expr(depth - 1));
                ix.children.push_back(expr(depth - 1));
                return ix;
            }
            case 5: {
                Node n;
                n.kind = NodeKind::NewArrayExpr;
                n.decl_type = scalar_type();
                n.children.push_back(expr(depth - 1));
                return n;
            }
            default: return expr(0);
        }
    }

    Node block(int depth) {
        Node b;
        b.kind = NodeKind::BlockStmt;
        std::size_t n = pick(4);
        for (std::size_t i = 0; i < n; ++i) b.children.push_back(stmt(depth - 1));
        return b;
    }

    Node stmt(int depth) {
        if (depth <= 0) {
            Node e;
            e.kind = NodeKind::EmptyStmt;
            return e;
        }
        switch (pick(10)) {
            case 0: {
                Node d;
                d.kind = NodeKind::VarDeclStmt;
                d.name = ident();
                d.decl_type = any_var_type();
                if (pick(2) == 0) d.children.push_back(expr(depth - 1));
                return d;
            }
            case 1: {
                Node a;
                a.kind = NodeKind::AssignStmt;
                static const char* ops[] = {"=", "+=", "-=", "*=", "/="};
                a.op = ops[pick(5)];
                a.children.push_back(lvalue());
                a.children.push_back(expr(depth - 1));
                return a;
            }
            case 2: {
                Node s;
                s.kind = NodeKind::ExprStmt;
                if (pick(3) == 0) {
                    Node u;
                    u.kind = NodeKind::UnaryExpr;
                    u.op = pick(2) == 0 ? "++" : "--";
                    u.children.push_back(lvalue());
                    s.children.push_back(std::move(u));
                } else {
                    s.children.push_back(call(depth));
                }
                return s;
            }
            case 3: {
                Node s;
                s.kind = NodeKind::IfStmt;
                s.children.push_back(expr(depth - 1));
                s.children.push_back(block(depth));
                std::size_t kind = pick(3);
                if (kind == 1) {
                    s.children.push_back(block(depth));
                } else if (kind == 2 && depth >= 2) {
                    Node elif;
                    elif.kind = NodeKind::IfStmt;
                    elif.children.push_back(expr(depth - 2));
                    elif.children.push_back(block(depth - 1));
                    if (pick(2) == 0) elif.children.push_back(block(depth - 1));
                    s.children.push_back(std::move(elif));
                }
                return s;
            }
            case 4: {
                Node s;
                s.kind = NodeKind::WhileStmt;
                s.children.push_back(expr(depth - 1));
                s.children.push_back(block(depth));
                return s;
            }
            case 5: {
                Node s;
                s.kind = NodeKind::ReturnStmt;
                if (pick(2) == 0) s.children.push_back(expr(depth - 1));
                return s;
            }
            case 6: {
                Node s;
                s.kind = NodeKind::ThrowStmt;
                s.children.push_back(expr(depth - 1));
                return s;
            }
            case 7: {
                Node s;
                s.kind = NodeKind::TryStmt;
                s.name = ident();
                s.children.push_back(block(depth));
                s.children.push_back(block(depth));
                return s;
            }
            case 8: return block(depth);
            default: {
                Node e;
                e.kind = NodeKind::EmptyStmt;
                return e;
            }
        }
    }

    Node program() {
        Node p;
        p.kind = NodeKind::Program;
        std::size_t nglobals = pick(3);
        for (std::size_t i = 0; i < nglobals; ++i) {
            Node d;
            d.kind = NodeKind::VarDeclStmt;
            d.name = ident();
            d.decl_type = any_var_type();
            if (pick(2) == 0) d.children.push_back(expr(1));
            p.children.push_back(std::move(d));
        }
        std::size_t nfuncs = 1 + pick(3);
        for (std::size_t i = 0; i < nfuncs; ++i) {
            Node fn;
            fn.kind = NodeKind::FuncDecl;
            fn.name = ident() + std::to_string(i);
            Type ret = scalar_type();
            if (pick(4) == 0) ret = Type::void_t();
            fn.decl_type = ret;
            std::size_t nparams = pick(3);
            for (std::size_t j = 0; j < nparams; ++j) {
                Node par;
                par.kind = NodeKind::Param;
                par.name = ident() + "p" + std::to_string(j);
                par.decl_type = any_var_type();
                fn.children.push_back(std::move(par));
            }
            fn.children.push_back(block(3));
            p.children.push_back(std::move(fn));
        }
        return p;
    }
};

}  // namespace

TEST_CASE("random ASTs survive unparse then parse unchanged") {
    Gen gen;
    for (int i = 0; i < 400; ++i) {
        Node original = gen.program();
        std::string text = unparse(original);
        Node reparsed;
        try {
            reparsed = parse(text, "gen.mj");
        } catch (const ParseError& e) {
            FAIL("iteration " << i << ": " << e.what() << "\n" << text);
        }
        CHECK_MESSAGE(same_structure(original, reparsed), "iteration " << i << "\n" << text);
    }
}

// ---------------------------------------------------------------------------
// Type checker
// ---------------------------------------------------------------------------

TEST_CASE("well-typed programs pass the checker") {
    CHECK_NOTHROW(tc({"bool b = 1 < 2;"}));
    CHECK_NOTHROW(tc({"float f(int x) { return x; }"}));  // int widens to float
    CHECK_NOTHROW(tc({"int f(int x) { return x; } int f(int x, int y) { return x + y; }"}));
    CHECK_NOTHROW(tc({"void t() { string s = \"a\" + \"b\"; assert(s == \"ab\"); }"}));
    CHECK_NOTHROW(tc({"void t() { float x = 1.0; x += 2; x *= 3; }"}));
    CHECK_NOTHROW(tc({"int g = 3;", "int use() { return g; }"}));  // cross-file global
}

TEST_CASE("ill-typed programs are rejected") {
    CHECK_THROWS_AS(tc({"int x = \"s\";"}), TypeError);
    CHECK_THROWS_AS(tc({"void t() { int x = 1.0; }"}), TypeError);  // no narrowing
    CHECK_THROWS_AS(tc({"void t() { bool b = 1 + true; }"}), TypeError);
    CHECK_THROWS_AS(tc({"void t() { if (1) { } }"}), TypeError);
    CHECK_THROWS_AS(tc({"void t() { int x = 0; int x = 1; }"}), TypeError);  // redeclaration
    CHECK_THROWS_AS(tc({"int g = 0;", "void t() { int g = 1; }"}), TypeError);  // shadowing
    CHECK_THROWS_AS(tc({"void t() { y = 1; }"}), TypeError);  // undeclared
    CHECK_THROWS_AS(tc({"int f() { return 1; } int f() { return 2; }"}), TypeError);
    CHECK_THROWS_AS(tc({"void t() { int i = 0; int x = i++; }"}), TypeError);  // ++ not an expr
    CHECK_THROWS_AS(tc({"void t() { throw 42; }"}), TypeError);
    CHECK_THROWS_AS(tc({"void t() { string s = \"x\"; s -= \"y\"; }"}), TypeError);
    CHECK_THROWS_AS(tc({"void t() { int[] a = new int[2]; float[] b = a; }"}), TypeError);
    CHECK_THROWS_AS(tc({"int f() { return 1; } int g = f();"}), TypeError);  // call in global init
    CHECK_THROWS_AS(tc({"int assert(int x) { return x; }"}), TypeError);  // reserved
    CHECK_THROWS_AS(tc({"void test_bad(int x) { }"}), TypeError);  // test signature
    CHECK_THROWS_AS(tc({"void t() { f(1); }"}), TypeError);  // unknown function
    CHECK_THROWS_AS(tc({"int f(int x) { return x; } void t() { f(true); }"}), TypeError);
    CHECK_THROWS_AS(tc({"void v() { } void t() { int x = v(); }"}), TypeError);  // void value
    CHECK_THROWS_AS(tc({"void t() { int r = \"ab\" % 2; }"}), TypeError);
}

TEST_CASE("checker annotates resolved expression types") {
    auto files = make_files({"float f(int x) { return x * 2.0; }"});
    typecheck_program(files);
    const Node& ret = files[0].ast.children[0].children.back().children[0];
    CHECK(ret.children[0].resolved == Type::float_t());
    CHECK(ret.children[0].children[0].resolved == Type::int_t());
}

TEST_CASE("typecheck is stable across an unparse-parse cycle") {
    std::string src =
        "int g = 2;\n"
        "float scale(int x, float k) { if (x > g) { return x * k; } return k; }\n";
    auto a = make_files({src});
    typecheck_program(a);
    std::string text = unparse(a[0].ast);
    std::vector<SourceFile> b = {{"f0.mj", parse(text, "f0.mj")}};
    CHECK_NOTHROW(typecheck_program(b));
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

TEST_CASE("basic verdicts") {
    CHECK(run_one("int f(int x) { return x + 1; } void test_f() { assert(f(1) == 2); }",
                  "test_f") == Outcome::Pass);
    CHECK(run_one("int f(int x) { return x - 1; } void test_f() { assert(f(1) == 2); }",
                  "test_f") == Outcome::FailAssert);
    CHECK(run_one("void test_loop() { while (true) { } }", "test_loop") ==
          Outcome::FailTimeout);
}

TEST_CASE("runtime errors") {
    CHECK(run_one("void test_div() { int x = 0; int y = 1 / x; print(y); }", "test_div") ==
          Outcome::FailError);
    CHECK(run_one("void test_mod() { int x = 0; int y = 1 % x; print(y); }", "test_mod") ==
          Outcome::FailError);
    CHECK(run_one("void test_oob() { int[] a = new int[2]; print(a[2]); }", "test_oob") ==
          Outcome::FailError);
    CHECK(run_one("void test_neg() { int n = -1; int[] a = new int[n]; print(len(a)); }",
                  "test_neg") == Outcome::FailError);
    CHECK(run_one("void test_throw() { throw \"boom\"; }", "test_throw") == Outcome::FailError);
    CHECK(run_one("int f(int x) { if (x > 0) { return 1; } } "
                  "void test_missing() { assert(f(-1) == 1); }",
                  "test_missing") == Outcome::FailError);
    CHECK(run_one("void test_shift() { int k = 64; int x = 1 << k; print(x); }",
                  "test_shift") == Outcome::FailError);
    CHECK(run_one("int f(int n) { return f(n + 1); } void test_deep() { print(f(0)); }",
                  "test_deep") == Outcome::FailError);  // call depth cap
}

TEST_CASE("try/catch semantics") {
    CHECK(run_one("void test_catch() { try { throw \"x\"; } catch (e) { assert(e == \"x\"); } }",
                  "test_catch") == Outcome::Pass);
    // Runtime errors are catchable strings.
    CHECK(run_one("void test_catch_div() { int z = 0; try { int y = 1 / z; print(y); } "
                  "catch (e) { assert(e == \"division by zero\"); } }",
                  "test_catch_div") == Outcome::Pass);
    // Assertion failures are not catchable.
    CHECK(run_one("void test_nocatch() { try { assert(false); } catch (e) { print(e); } }",
                  "test_nocatch") == Outcome::FailAssert);
    // Budget exhaustion is not catchable.
    CHECK(run_one("void test_budget() { try { while (true) { } } catch (e) { print(e); } }",
                  "test_budget") == Outcome::FailTimeout);
}

TEST_CASE("arithmetic semantics") {
    CHECK(run_one("void test_t() { assert(-7 / 2 == -3); assert(-7 % 2 == -1); }", "test_t") ==
          Outcome::Pass);
    CHECK(run_one("void test_w() { assert(9223372036854775807 + 1 < 0); }", "test_w") ==
          Outcome::Pass);
    CHECK(run_one("void test_fdiv() { float inf = 1.0 / 0.0; assert(inf > 100000000.0); }",
                  "test_fdiv") == Outcome::Pass);
    CHECK(run_one("void test_cast() { assert((int) 3.9 == 3); assert((int) -3.9 == -3); "
                  "assert((float) 7 / 2.0 == 3.5); }",
                  "test_cast") == Outcome::Pass);
    CHECK(run_one("void test_mix() { assert(1 + 0.5 == 1.5); assert(7 / 2 == 3); "
                  "assert(7 / 2.0 == 3.5); }",
                  "test_mix") == Outcome::Pass);
    CHECK(run_one("void test_bits() { assert((5 & 3) == 1); assert((5 | 3) == 7); "
                  "assert((5 ^ 3) == 6); assert(1 << 3 == 8); assert(-8 >> 1 == -4); }",
                  "test_bits") == Outcome::Pass);
    CHECK(run_one("void test_str() { string s = \"ab\"; s += \"cd\"; assert(s == \"abcd\"); "
                  "assert(len(s) == 4); assert(s != \"abce\"); }",
                  "test_str") == Outcome::Pass);
}

TEST_CASE("arrays have value semantics") {
    CHECK(run_one("void test_copy() { int[] a = new int[2]; int[] b = a; b[0] = 5; "
                  "assert(a[0] == 0); assert(b[0] == 5); }",
                  "test_copy") == Outcome::Pass);
    CHECK(run_one("void bump(int[] a) { a[0] = 9; } "
                  "void test_arg() { int[] a = new int[1]; bump(a); assert(a[0] == 0); }",
                  "test_arg") == Outcome::Pass);
    CHECK(run_one("void test_default() { int[] a; assert(len(a) == 0); }", "test_default") ==
          Outcome::Pass);
}

TEST_CASE("globals are reset between tests") {
    std::string src =
        "int counter = 0;\n"
        "void test_a() { counter += 1; assert(counter == 1); }\n"
        "void test_b() { assert(counter == 0); counter += 5; assert(counter == 5); }\n";
    auto files = make_files({src});
    typecheck_program(files);
    auto verdicts = run_tests(files, {}, StepBudget{});
    REQUIRE(verdicts.size() == 2);
    CHECK(verdicts[0].outcome == Outcome::Pass);
    CHECK(verdicts[1].outcome == Outcome::Pass);
}

TEST_CASE("global initializers run in file then declaration order") {
    std::vector<SourceFile> files = {
        {"a.mj", parse1("int first = 10; int second = first + 1;")},
        {"b.mj", parse1("int third = second * 2; void test_g() { assert(third == 22); }")},
    };
    typecheck_program(files);
    auto verdicts = run_tests(files, {"test_g"}, StepBudget{});
    CHECK(verdicts[0].outcome == Outcome::Pass);
    // A forward reference reads the default value, not the initializer result.
    std::vector<SourceFile> fwd = {
        {"a.mj", parse1("int early = late + 1; int late = 5; "
                        "void test_f() { assert(early == 1); assert(late == 5); }")},
    };
    typecheck_program(fwd);
    CHECK(run_tests(fwd, {"test_f"}, StepBudget{})[0].outcome == Outcome::Pass);
}

TEST_CASE("verdicts are deterministic across repeated runs") {
    std::string src =
        "int fib(int n) { if (n < 2) { return n; } return fib(n - 1) + fib(n - 2); }\n"
        "void test_fib() { assert(fib(18) == 2584); }\n"
        "void test_slow() { int i = 0; while (i < 100000) { i++; } assert(i == 100000); }\n";
    auto files = make_files({src});
    typecheck_program(files);
    auto first = run_tests(files, {}, StepBudget{});
    for (int round = 0; round < 3; ++round) {
        auto again = run_tests(files, {}, StepBudget{});
        REQUIRE(again.size() == first.size());
        for (std::size_t i = 0; i < first.size(); ++i) {
            CHECK(again[i].test_name == first[i].test_name);
            CHECK(again[i].outcome == first[i].outcome);
        }
    }
    // A tight budget flips the slow test to fail_timeout, deterministically.
    auto tight = run_tests(files, {"test_slow"}, StepBudget{1000});
    CHECK(tight[0].outcome == Outcome::FailTimeout);
}

TEST_CASE("test listing and selection") {
    std::string src =
        "void test_b() { }\nvoid helper() { }\nvoid test_a() { }\n";
    auto files = make_files({src});
    typecheck_program(files);
    auto names = list_tests(files);
    REQUIRE(names.size() == 2);
    CHECK(names[0] == "test_b");  // declaration order
    CHECK(names[1] == "test_a");
    CHECK_THROWS_AS(run_tests(files, {"test_missing"}, StepBudget{}), UnknownTest);
}

TEST_CASE("outcome names") {
    CHECK(std::string(outcome_name(Outcome::Pass)) == "pass");
    CHECK(std::string(outcome_name(Outcome::FailAssert)) == "fail_assert");
    CHECK(std::string(outcome_name(Outcome::FailError)) == "fail_error");
    CHECK(std::string(outcome_name(Outcome::FailTimeout)) == "fail_timeout");
}
