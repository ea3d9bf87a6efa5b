#include "minij/ast.hpp"

namespace minij {

std::string Type::to_string() const {
    const char* b = "void";
    switch (base) {
        case BaseType::Void: b = "void"; break;
        case BaseType::Int: b = "int"; break;
        case BaseType::Float: b = "float"; break;
        case BaseType::Bool: b = "bool"; break;
        case BaseType::String: b = "string"; break;
    }
    return is_array ? std::string(b) + "[]" : std::string(b);
}

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Program: return "Program";
        case NodeKind::FuncDecl: return "FuncDecl";
        case NodeKind::Param: return "Param";
        case NodeKind::VarDeclStmt: return "VarDeclStmt";
        case NodeKind::AssignStmt: return "AssignStmt";
        case NodeKind::ExprStmt: return "ExprStmt";
        case NodeKind::IfStmt: return "IfStmt";
        case NodeKind::WhileStmt: return "WhileStmt";
        case NodeKind::ReturnStmt: return "ReturnStmt";
        case NodeKind::ThrowStmt: return "ThrowStmt";
        case NodeKind::TryStmt: return "TryStmt";
        case NodeKind::BlockStmt: return "BlockStmt";
        case NodeKind::EmptyStmt: return "EmptyStmt";
        case NodeKind::BinaryExpr: return "BinaryExpr";
        case NodeKind::UnaryExpr: return "UnaryExpr";
        case NodeKind::CastExpr: return "CastExpr";
        case NodeKind::CallExpr: return "CallExpr";
        case NodeKind::IndexExpr: return "IndexExpr";
        case NodeKind::NameExpr: return "NameExpr";
        case NodeKind::NewArrayExpr: return "NewArrayExpr";
        case NodeKind::IntLit: return "IntLit";
        case NodeKind::FloatLit: return "FloatLit";
        case NodeKind::BoolLit: return "BoolLit";
        case NodeKind::StringLit: return "StringLit";
    }
    return "?";
}

bool Node::is_statement() const {
    switch (kind) {
        case NodeKind::VarDeclStmt:
        case NodeKind::AssignStmt:
        case NodeKind::ExprStmt:
        case NodeKind::IfStmt:
        case NodeKind::WhileStmt:
        case NodeKind::ReturnStmt:
        case NodeKind::ThrowStmt:
        case NodeKind::TryStmt:
        case NodeKind::BlockStmt:
        case NodeKind::EmptyStmt:
            return true;
        default:
            return false;
    }
}

bool Node::is_expression() const {
    switch (kind) {
        case NodeKind::BinaryExpr:
        case NodeKind::UnaryExpr:
        case NodeKind::CastExpr:
        case NodeKind::CallExpr:
        case NodeKind::IndexExpr:
        case NodeKind::NameExpr:
        case NodeKind::NewArrayExpr:
        case NodeKind::IntLit:
        case NodeKind::FloatLit:
        case NodeKind::BoolLit:
        case NodeKind::StringLit:
            return true;
        default:
            return false;
    }
}

bool same_structure(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.name != b.name || a.op != b.op) return false;
    if (a.decl_type != b.decl_type) return false;
    switch (a.kind) {
        case NodeKind::IntLit:
            if (a.int_val != b.int_val) return false;
            break;
        case NodeKind::FloatLit:
            // Lexeme-level comparison: "1.0" and "1.00" denote the same value
            // but unparse to different text, so they are distinct here.
            if (a.str_val != b.str_val) return false;
            break;
        case NodeKind::BoolLit:
            if (a.bool_val != b.bool_val) return false;
            break;
        case NodeKind::StringLit:
            if (a.str_val != b.str_val) return false;
            break;
        default:
            break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!same_structure(a.children[i], b.children[i])) return false;
    return true;
}

const Node* resolve_path(const Node& root, const std::vector<int>& path) {
    const Node* cur = &root;
    for (int idx : path) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= cur->children.size()) return nullptr;
        cur = &cur->children[idx];
    }
    return cur;
}

Node* resolve_path(Node& root, const std::vector<int>& path) {
    return const_cast<Node*>(resolve_path(static_cast<const Node&>(root), path));
}

namespace {

void collect_rec(const Node& n, std::vector<int>& path, std::vector<std::vector<int>>& out) {
    if (n.is_statement() && n.kind != NodeKind::BlockStmt) out.push_back(path);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_rec(n.children[i], path, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> collect_statement_paths(const Node& file_root) {
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    collect_rec(file_root, path, out);
    return out;
}

Node make_int_lit(std::int64_t v) {
    Node n;
    n.kind = NodeKind::IntLit;
    n.int_val = v;
    return n;
}

Node make_float_lit(double v, const std::string& lexeme) {
    Node n;
    n.kind = NodeKind::FloatLit;
    n.float_val = v;
    n.str_val = lexeme;
    return n;
}

Node make_bool_lit(bool v) {
    Node n;
    n.kind = NodeKind::BoolLit;
    n.bool_val = v;
    return n;
}

Node make_string_lit(const std::string& v) {
    Node n;
    n.kind = NodeKind::StringLit;
    n.str_val = v;
    return n;
}

Node make_name(const std::string& name) {
    Node n;
    n.kind = NodeKind::NameExpr;
    n.name = name;
    return n;
}

Node make_signed_int(std::int64_t v) {
    if (v >= 0) return make_int_lit(v);
    Node neg;
    neg.kind = NodeKind::UnaryExpr;
    neg.op = "-";
    neg.children.push_back(make_int_lit(-v));
    return neg;
}

}  // namespace minij
