#include "minij/printer.hpp"

namespace minij {

namespace {

int binary_prec(const std::string& op) {
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

int expr_prec(const Node& e) {
    switch (e.kind) {
        case NodeKind::BinaryExpr:
            return binary_prec(e.op);
        case NodeKind::UnaryExpr:
            return (e.op == "++" || e.op == "--") ? 11 : 10;
        case NodeKind::CastExpr:
            return 10;
        default:
            return 11;  // postfix chains and primaries never need parens
    }
}

std::string escape_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

struct Writer {
    std::string out;

    void indent(int level) { out.append(static_cast<std::size_t>(level) * 4, ' '); }

    void expr(const Node& e, int min_prec) {
        bool parens = expr_prec(e) < min_prec;
        if (parens) out += '(';
        switch (e.kind) {
            case NodeKind::IntLit:
                out += std::to_string(e.int_val);
                break;
            case NodeKind::FloatLit:
                out += e.str_val;
                break;
            case NodeKind::BoolLit:
                out += e.bool_val ? "true" : "false";
                break;
            case NodeKind::StringLit:
                out += escape_string(e.str_val);
                break;
            case NodeKind::NameExpr:
                out += e.name;
                break;
            case NodeKind::BinaryExpr: {
                int p = binary_prec(e.op);
                expr(e.children[0], p);
                out += ' ';
                out += e.op;
                out += ' ';
                expr(e.children[1], p + 1);
                break;
            }
            case NodeKind::UnaryExpr: {
                if (e.op == "++" || e.op == "--") {
                    expr(e.children[0], 11);
                    out += e.op;
                } else {
                    out += e.op;
                    const Node& operand = e.children[0];
                    // "-(-x)": bare nesting would lex as the "--" token.
                    bool force = e.op == "-" && operand.kind == NodeKind::UnaryExpr &&
                                 operand.op == "-";
                    if (force) {
                        out += '(';
                        expr(operand, 0);
                        out += ')';
                    } else {
                        expr(operand, 10);
                    }
                }
                break;
            }
            case NodeKind::CastExpr:
                out += '(';
                out += e.decl_type.to_string();
                out += ") ";
                expr(e.children[0], 10);
                break;
            case NodeKind::CallExpr: {
                out += e.name;
                out += '(';
                for (std::size_t i = 0; i < e.children.size(); ++i) {
                    if (i) out += ", ";
                    expr(e.children[i], 0);
                }
                out += ')';
                break;
            }
            case NodeKind::IndexExpr:
                expr(e.children[0], 11);
                out += '[';
                expr(e.children[1], 0);
                out += ']';
                break;
            case NodeKind::NewArrayExpr:
                out += "new ";
                out += e.decl_type.to_string();
                out += '[';
                expr(e.children[0], 0);
                out += ']';
                break;
            default:
                out += "<?>";
                break;
        }
        if (parens) out += ')';
    }

    void block_body(const Node& blk, int level) {
        out += "{\n";
        for (const Node& s : blk.children) stmt(s, level + 1);
        indent(level);
        out += '}';
    }

    void stmt(const Node& s, int level) {
        indent(level);
        stmt_inline(s, level);
        out += '\n';
    }

    // Emits the statement starting at the current position; no trailing newline.
    void stmt_inline(const Node& s, int level) {
        switch (s.kind) {
            case NodeKind::VarDeclStmt:
                out += s.decl_type.to_string();
                out += ' ';
                out += s.name;
                if (!s.children.empty()) {
                    out += " = ";
                    expr(s.children[0], 0);
                }
                out += ';';
                break;
            case NodeKind::AssignStmt:
                expr(s.children[0], 11);
                out += ' ';
                out += s.op;
                out += ' ';
                expr(s.children[1], 0);
                out += ';';
                break;
            case NodeKind::ExprStmt:
                expr(s.children[0], 0);
                out += ';';
                break;
            case NodeKind::IfStmt:
                out += "if (";
                expr(s.children[0], 0);
                out += ") ";
                block_body(s.children[1], level);
                if (s.children.size() == 3) {
                    out += " else ";
                    if (s.children[2].kind == NodeKind::IfStmt) {
                        stmt_inline(s.children[2], level);
                    } else {
                        block_body(s.children[2], level);
                    }
                }
                break;
            case NodeKind::WhileStmt:
                out += "while (";
                expr(s.children[0], 0);
                out += ") ";
                block_body(s.children[1], level);
                break;
            case NodeKind::ReturnStmt:
                out += "return";
                if (!s.children.empty()) {
                    out += ' ';
                    expr(s.children[0], 0);
                }
                out += ';';
                break;
            case NodeKind::ThrowStmt:
                out += "throw ";
                expr(s.children[0], 0);
                out += ';';
                break;
            case NodeKind::TryStmt:
                out += "try ";
                block_body(s.children[0], level);
                out += " catch (";
                out += s.name;
                out += ") ";
                block_body(s.children[1], level);
                break;
            case NodeKind::BlockStmt:
                block_body(s, level);
                break;
            case NodeKind::EmptyStmt:
                out += ';';
                break;
            default:
                out += "<?>;";
                break;
        }
    }

    void func(const Node& fn) {
        out += fn.decl_type.to_string();
        out += ' ';
        out += fn.name;
        out += '(';
        bool first = true;
        for (const Node& c : fn.children) {
            if (c.kind != NodeKind::Param) continue;
            if (!first) out += ", ";
            first = false;
            out += c.decl_type.to_string();
            out += ' ';
            out += c.name;
        }
        out += ") ";
        block_body(fn.children.back(), 0);
        out += '\n';
    }

    void program(const Node& prog) {
        for (std::size_t i = 0; i < prog.children.size(); ++i) {
            if (i) out += '\n';
            const Node& d = prog.children[i];
            if (d.kind == NodeKind::FuncDecl) {
                func(d);
            } else {
                stmt(d, 0);
            }
        }
    }
};

}  // namespace

std::string unparse(const Node& node) {
    Writer w;
    switch (node.kind) {
        case NodeKind::Program:
            w.program(node);
            break;
        case NodeKind::FuncDecl:
            w.func(node);
            break;
        default:
            if (node.is_statement()) {
                w.stmt(node, 0);
            } else {
                w.expr(node, 0);
            }
            break;
    }
    return w.out;
}

std::string expr_text(const Node& expr) {
    Writer w;
    w.expr(expr, 0);
    return w.out;
}

std::string stmt_text(const Node& stmt) {
    Writer w;
    w.stmt_inline(stmt, 0);
    return w.out;
}

}  // namespace minij
