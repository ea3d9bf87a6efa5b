#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace minij {

enum class BaseType { Void, Int, Float, Bool, String };

/// A MiniJ static type: a base type, optionally a one-dimensional array of it.
struct Type {
    BaseType base = BaseType::Void;
    bool is_array = false;

    bool operator==(const Type&) const = default;

    bool is_numeric() const { return !is_array && (base == BaseType::Int || base == BaseType::Float); }
    bool is_void() const { return base == BaseType::Void && !is_array; }

    static Type void_t() { return {BaseType::Void, false}; }
    static Type int_t() { return {BaseType::Int, false}; }
    static Type float_t() { return {BaseType::Float, false}; }
    static Type bool_t() { return {BaseType::Bool, false}; }
    static Type string_t() { return {BaseType::String, false}; }
    static Type array_of(BaseType b) { return {b, true}; }

    std::string to_string() const;
};

/// Half-open source range: [begin, end) byte offsets into the file text,
/// plus 1-based line/column of the first and one-past-last character.
struct Span {
    int start_line = 0;
    int start_col = 0;
    int end_line = 0;
    int end_col = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class NodeKind {
    Program,
    FuncDecl,
    Param,
    // statements
    VarDeclStmt,
    AssignStmt,
    ExprStmt,
    IfStmt,
    WhileStmt,
    ReturnStmt,
    ThrowStmt,
    TryStmt,
    BlockStmt,
    EmptyStmt,
    // expressions
    BinaryExpr,
    UnaryExpr,
    CastExpr,
    CallExpr,
    IndexExpr,
    NameExpr,
    NewArrayExpr,
    IntLit,
    FloatLit,
    BoolLit,
    StringLit,
};

const char* node_kind_name(NodeKind k);

/// Uniform AST node with value semantics; copying a node deep-copies its subtree.
///
/// Child layout by kind:
///   Program      children = top-level FuncDecl / VarDeclStmt in source order
///   FuncDecl     name, decl_type = return type; children = [Param..., BlockStmt body]
///   Param        name, decl_type
///   VarDeclStmt  name, decl_type; children = [initializer] or []
///   AssignStmt   op in {=,+=,-=,*=,/=}; children = [lvalue, rhs]
///   ExprStmt     children = [expr] (call or postfix ++/--)
///   IfStmt       children = [cond, then] or [cond, then, else]
///   WhileStmt    children = [cond, body]
///   ReturnStmt   children = [] or [expr]
///   ThrowStmt    children = [expr]
///   TryStmt      name = catch variable; children = [try block, catch block]
///   BlockStmt    children = statements
///   BinaryExpr   op; children = [lhs, rhs]
///   UnaryExpr    op in {-,!} prefix or {++,--} postfix; children = [operand]
///   CastExpr     decl_type = target; children = [operand]
///   CallExpr     name = callee; children = arguments
///   IndexExpr    children = [base, index]
///   NameExpr     name
///   NewArrayExpr decl_type = element type; children = [length]
///   FloatLit     float_val + str_val (the exact lexeme, e.g. "1.0" or "10d")
struct Node {
    NodeKind kind = NodeKind::EmptyStmt;
    Span span;
    std::string name;
    std::string op;
    std::int64_t int_val = 0;
    double float_val = 0.0;
    bool bool_val = false;
    std::string str_val;
    Type decl_type;
    Type resolved;
    std::vector<Node> children;

    bool is_statement() const;
    bool is_expression() const;
};

// Structural equality; spans and resolved types are ignored. Float literals
// compare by lexeme so that equality implies identical canonical text.
bool same_structure(const Node& a, const Node& b);

/// Follows a child-index path from `root`; nullptr if the path is invalid.
const Node* resolve_path(const Node& root, const std::vector<int>& path);
Node* resolve_path(Node& root, const std::vector<int>& path);

/// Paths (from the file root) of all indexed statements in source order.
/// Every statement node is indexed except BlockStmt, which is structural.
std::vector<std::vector<int>> collect_statement_paths(const Node& file_root);

// Literal constructors used when synthesizing replacement material.
Node make_int_lit(std::int64_t v);
Node make_float_lit(double v, const std::string& lexeme);
Node make_bool_lit(bool v);
Node make_string_lit(const std::string& v);
Node make_name(const std::string& n);
/// Negative integers are built as unary minus over a positive literal,
/// matching what the parser produces for "-1".
Node make_signed_int(std::int64_t v);

}  // namespace minij
