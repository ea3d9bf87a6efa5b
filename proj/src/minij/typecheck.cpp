#include "minij/typecheck.hpp"

#include <map>
#include <string>

#include "minij/errors.hpp"

namespace minij {

namespace {

bool is_builtin_name(const std::string& n) {
    return n == "assert" || n == "print" || n == "len";
}

struct FuncSig {
    Type ret;
    std::vector<Type> params;
};

struct Checker {
    // (name, arity) -> signature
    std::map<std::pair<std::string, int>, FuncSig> funcs;
    std::map<std::string, Type> globals;
    std::vector<std::map<std::string, Type>> scopes;
    const std::string* cur_file = nullptr;
    Type cur_ret;
    bool in_global_init = false;

    [[noreturn]] void fail(const Node& at, const std::string& msg) const {
        throw TypeError(*cur_file, at.span.start_line, at.span.start_col, msg);
    }

    bool visible(const std::string& name) const {
        for (const auto& s : scopes)
            if (s.count(name)) return true;
        return globals.count(name) > 0;
    }

    const Type* lookup(const std::string& name) const {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        auto g = globals.find(name);
        return g != globals.end() ? &g->second : nullptr;
    }

    void declare(const Node& at, const std::string& name, Type t) {
        if (visible(name)) fail(at, "redeclaration of '" + name + "'");
        scopes.back()[name] = t;
    }

    static bool assignable(const Type& to, const Type& from) {
        return minij::assignable(to, from);
    }

    static bool numeric(const Type& t) { return t.is_numeric(); }

    Type check_expr(Node& e, bool stmt_top = false) {
        Type t = check_expr_inner(e, stmt_top);
        e.resolved = t;
        return t;
    }

    Type check_expr_inner(Node& e, bool stmt_top) {
        switch (e.kind) {
            case NodeKind::IntLit: return Type::int_t();
            case NodeKind::FloatLit: return Type::float_t();
            case NodeKind::BoolLit: return Type::bool_t();
            case NodeKind::StringLit: return Type::string_t();
            case NodeKind::NameExpr: {
                const Type* t = lookup(e.name);
                if (!t) fail(e, "use of undeclared variable '" + e.name + "'");
                return *t;
            }
            case NodeKind::BinaryExpr: {
                Type l = check_expr(e.children[0]);
                Type r = check_expr(e.children[1]);
                const std::string& op = e.op;
                if (op == "+") {
                    if (l == Type::string_t() && r == Type::string_t()) return Type::string_t();
                    if (numeric(l) && numeric(r))
                        return (l == Type::float_t() || r == Type::float_t()) ? Type::float_t()
                                                                              : Type::int_t();
                    fail(e, "operator '+' needs two numbers or two strings");
                }
                if (op == "-" || op == "*" || op == "/") {
                    if (numeric(l) && numeric(r))
                        return (l == Type::float_t() || r == Type::float_t()) ? Type::float_t()
                                                                              : Type::int_t();
                    fail(e, "operator '" + op + "' needs numeric operands");
                }
                if (op == "%" || op == "&" || op == "|" || op == "^" || op == "<<" ||
                    op == ">>") {
                    if (l == Type::int_t() && r == Type::int_t()) return Type::int_t();
                    fail(e, "operator '" + op + "' needs int operands");
                }
                if (op == "<" || op == "<=" || op == ">" || op == ">=") {
                    if (numeric(l) && numeric(r)) return Type::bool_t();
                    fail(e, "operator '" + op + "' needs numeric operands");
                }
                if (op == "==" || op == "!=") {
                    if (numeric(l) && numeric(r)) return Type::bool_t();
                    if (l == r && !l.is_array) return Type::bool_t();
                    fail(e, "operator '" + op + "' needs comparable operands of one type");
                }
                if (op == "&&" || op == "||") {
                    if (l == Type::bool_t() && r == Type::bool_t()) return Type::bool_t();
                    fail(e, "operator '" + op + "' needs bool operands");
                }
                fail(e, "unknown operator '" + op + "'");
            }
            case NodeKind::UnaryExpr: {
                if (e.op == "++" || e.op == "--") {
                    if (!stmt_top)
                        fail(e, "'" + e.op + "' is only allowed as a standalone statement");
                    Node& target = e.children[0];
                    if (target.kind != NodeKind::NameExpr && target.kind != NodeKind::IndexExpr)
                        fail(e, "'" + e.op + "' needs a variable or array element");
                    if (target.kind == NodeKind::IndexExpr &&
                        target.children[0].kind != NodeKind::NameExpr)
                        fail(e, "'" + e.op + "' target must index a variable");
                    Type t = check_expr(target);
                    if (!numeric(t)) fail(e, "'" + e.op + "' needs a numeric target");
                    return t;
                }
                Type t = check_expr(e.children[0]);
                if (e.op == "-") {
                    if (!numeric(t)) fail(e, "unary '-' needs a numeric operand");
                    return t;
                }
                if (e.op == "!") {
                    if (t != Type::bool_t()) fail(e, "'!' needs a bool operand");
                    return Type::bool_t();
                }
                fail(e, "unknown unary operator '" + e.op + "'");
            }
            case NodeKind::CastExpr: {
                Type t = check_expr(e.children[0]);
                if (!numeric(t)) fail(e, "cast needs a numeric operand");
                return e.decl_type;
            }
            case NodeKind::CallExpr: {
                std::vector<Type> args;
                for (Node& a : e.children) args.push_back(check_expr(a));
                if (e.name == "assert") {
                    if (args.size() != 1 || args[0] != Type::bool_t())
                        fail(e, "assert takes one bool argument");
                    return Type::void_t();
                }
                if (e.name == "print") {
                    if (args.size() != 1 || args[0].is_array || args[0].is_void())
                        fail(e, "print takes one scalar argument");
                    return Type::void_t();
                }
                if (e.name == "len") {
                    if (args.size() != 1 || !(args[0].is_array || args[0] == Type::string_t()))
                        fail(e, "len takes one string or array argument");
                    return Type::int_t();
                }
                if (in_global_init) fail(e, "global initializer cannot call functions");
                auto it = funcs.find({e.name, static_cast<int>(args.size())});
                if (it == funcs.end())
                    fail(e, "no function '" + e.name + "' taking " +
                                std::to_string(args.size()) + " argument(s)");
                for (std::size_t i = 0; i < args.size(); ++i)
                    if (!assignable(it->second.params[i], args[i]))
                        fail(e.children[i], "argument " + std::to_string(i + 1) + " of '" +
                                                e.name + "': expected " +
                                                it->second.params[i].to_string() + ", got " +
                                                args[i].to_string());
                return it->second.ret;
            }
            case NodeKind::IndexExpr: {
                Type base = check_expr(e.children[0]);
                Type idx = check_expr(e.children[1]);
                if (!base.is_array) fail(e, "indexing a non-array value");
                if (idx != Type::int_t()) fail(e.children[1], "array index must be int");
                return Type{base.base, false};
            }
            case NodeKind::NewArrayExpr: {
                Type n = check_expr(e.children[0]);
                if (n != Type::int_t()) fail(e.children[0], "array length must be int");
                return Type::array_of(e.decl_type.base);
            }
            default:
                fail(e, "expected an expression");
        }
    }

    void check_stmt(Node& s) {
        switch (s.kind) {
            case NodeKind::VarDeclStmt: {
                if (!s.children.empty()) {
                    Type init = check_expr(s.children[0]);
                    if (!assignable(s.decl_type, init))
                        fail(s, "cannot initialize " + s.decl_type.to_string() + " '" + s.name +
                                    "' from " + init.to_string());
                }
                declare(s, s.name, s.decl_type);
                return;
            }
            case NodeKind::AssignStmt: {
                Node& lhs = s.children[0];
                if (lhs.kind == NodeKind::IndexExpr &&
                    lhs.children[0].kind != NodeKind::NameExpr)
                    fail(lhs, "assignment target must index a variable");
                Type lt = check_expr(lhs);
                Type rt = check_expr(s.children[1]);
                const std::string& op = s.op;
                if (op == "=") {
                    if (!assignable(lt, rt))
                        fail(s, "cannot assign " + rt.to_string() + " to " + lt.to_string());
                    return;
                }
                // Compound forms follow the corresponding binary operator.
                if (op == "+=") {
                    if (lt == Type::string_t() && rt == Type::string_t()) return;
                    if (numeric(lt) && numeric(rt) && assignable(lt, rt)) return;
                    fail(s, "'+=' needs matching numeric or string operands");
                }
                if (op == "-=" || op == "*=" || op == "/=") {
                    if (numeric(lt) && numeric(rt) && assignable(lt, rt)) return;
                    fail(s, "'" + op + "' needs numeric operands");
                }
                fail(s, "unknown assignment operator '" + op + "'");
            }
            case NodeKind::ExprStmt: {
                Node& e = s.children[0];
                if (e.kind != NodeKind::CallExpr &&
                    !(e.kind == NodeKind::UnaryExpr && (e.op == "++" || e.op == "--")))
                    fail(s, "only calls, increments and decrements can stand alone");
                check_expr(e, /*stmt_top=*/true);
                return;
            }
            case NodeKind::IfStmt: {
                if (check_expr(s.children[0]) != Type::bool_t())
                    fail(s.children[0], "if condition must be bool");
                check_stmt(s.children[1]);
                if (s.children.size() == 3) check_stmt(s.children[2]);
                return;
            }
            case NodeKind::WhileStmt: {
                if (check_expr(s.children[0]) != Type::bool_t())
                    fail(s.children[0], "while condition must be bool");
                check_stmt(s.children[1]);
                return;
            }
            case NodeKind::ReturnStmt: {
                if (cur_ret.is_void()) {
                    if (!s.children.empty()) fail(s, "void function cannot return a value");
                    return;
                }
                if (s.children.empty()) fail(s, "missing return value");
                Type t = check_expr(s.children[0]);
                if (!assignable(cur_ret, t))
                    fail(s, "cannot return " + t.to_string() + " from a function returning " +
                                cur_ret.to_string());
                return;
            }
            case NodeKind::ThrowStmt: {
                if (check_expr(s.children[0]) != Type::string_t())
                    fail(s, "throw needs a string payload");
                return;
            }
            case NodeKind::TryStmt: {
                check_stmt(s.children[0]);
                scopes.emplace_back();
                declare(s, s.name, Type::string_t());
                check_stmt(s.children[1]);
                scopes.pop_back();
                return;
            }
            case NodeKind::BlockStmt: {
                scopes.emplace_back();
                for (Node& c : s.children) check_stmt(c);
                scopes.pop_back();
                return;
            }
            case NodeKind::EmptyStmt:
                return;
            default:
                fail(s, "expected a statement");
        }
    }
};

}  // namespace

void typecheck_program(std::vector<SourceFile>& files) {
    Checker ck;

    // Pass 1: collect signatures and globals across all files.
    for (SourceFile& f : files) {
        ck.cur_file = &f.path;
        for (Node& d : f.ast.children) {
            if (d.kind == NodeKind::FuncDecl) {
                if (is_builtin_name(d.name))
                    ck.fail(d, "'" + d.name + "' is a reserved builtin name");
                FuncSig sig;
                sig.ret = d.decl_type;
                for (const Node& c : d.children)
                    if (c.kind == NodeKind::Param) sig.params.push_back(c.decl_type);
                int arity = static_cast<int>(sig.params.size());
                if (d.name.rfind("test_", 0) == 0 && (arity != 0 || !sig.ret.is_void()))
                    ck.fail(d, "test functions take no parameters and return void");
                if (!ck.funcs.emplace(std::make_pair(d.name, arity), sig).second)
                    ck.fail(d, "duplicate function '" + d.name + "' with " +
                                   std::to_string(arity) + " parameter(s)");
            } else if (d.kind == NodeKind::VarDeclStmt) {
                if (ck.globals.count(d.name))
                    ck.fail(d, "duplicate global variable '" + d.name + "'");
                ck.globals[d.name] = d.decl_type;
            }
        }
    }

    // Pass 2: check global initializers and function bodies.
    for (SourceFile& f : files) {
        ck.cur_file = &f.path;
        for (Node& d : f.ast.children) {
            if (d.kind == NodeKind::VarDeclStmt) {
                if (d.children.empty()) continue;
                ck.in_global_init = true;
                Type t = ck.check_expr(d.children[0]);
                ck.in_global_init = false;
                if (!Checker::assignable(d.decl_type, t))
                    ck.fail(d, "cannot initialize " + d.decl_type.to_string() + " '" + d.name +
                                   "' from " + t.to_string());
            } else if (d.kind == NodeKind::FuncDecl) {
                ck.cur_ret = d.decl_type;
                ck.scopes.clear();
                ck.scopes.emplace_back();
                for (Node& c : d.children)
                    if (c.kind == NodeKind::Param) ck.declare(c, c.name, c.decl_type);
                ck.check_stmt(d.children.back());
                ck.scopes.clear();
            }
        }
    }
}

bool assignable(const Type& to, const Type& from) {
    if (to == from) return true;
    return to == Type::float_t() && from == Type::int_t();
}

}  // namespace minij
