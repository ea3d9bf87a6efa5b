#include "ibir/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "ibir/errors.hpp"
#include "minij/printer.hpp"
#include "minij/typecheck.hpp"

namespace ibir {

namespace {

using minij::BaseType;
using minij::Node;
using minij::NodeKind;
using minij::Type;

constexpr int kDonorCap = 5;
// Declarations in other files sort after every same-file declaration.
constexpr long kOtherFileDistance = 1'000'000;

const std::vector<PatternInfo>& builtin_catalog() {
    static const std::vector<PatternInfo> rows = {
        {"insert_method_call", "insert_statement", 1, true},
        {"insert_return", "insert_statement", 2, true},
        {"wrap_try_catch", "insert_statement", 3, true},
        {"wrap_if", "insert_statement", 4, true},
        {"remove_conditional_expr", "conditional_expression", 5, true},
        {"insert_conditional_expr", "conditional_expression", 6, true},
        {"change_conditional_operator", "conditional_expression", 7, true},
        {"change_decl_type", "data_type", 8, true},
        {"change_cast_type", "data_type", 9, true},
        {"div_cast_removal_divisor", "float_division", 10, true},
        {"div_cast_removal_dividend", "float_division", 11, true},
        {"float_mult_to_int_div", "float_division", 12, true},
        {"literal_replacement", "literal_expression", 13, true},
        {"replace_method_call", "method_invocation", 14, true},
        {"replace_call_argument", "method_invocation", 15, true},
        {"remove_call_argument", "method_invocation", 16, true},
        {"add_call_argument", "method_invocation", 17, true},
        {"replace_return_expr", "return_statement", 18, true},
        {"replace_variable", "variable", 19, true},
        {"move_statement", "move_statement", 20, true},
        {"remove_statement", "remove_statement", 21, true},
        {"remove_method", "remove_statement", 22, true},
        {"op_arithmetic", "operators", 23, true},
        {"op_assignment", "operators", 24, true},
        {"op_relational", "operators", 25, true},
        {"op_conditional", "operators", 26, true},
        {"op_bitwise_shift", "operators", 27, true},
        {"op_unary", "operators", 28, true},
        {"op_operand_order", "operators", 29, true},
    };
    return rows;
}

bool is_arith_op(const std::string& op) {
    return op == "+" || op == "-" || op == "*" || op == "/" || op == "%";
}
bool is_rel_op(const std::string& op) {
    return op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" || op == "!=";
}
bool is_cond_op(const std::string& op) { return op == "&&" || op == "||"; }
bool is_bit_op(const std::string& op) {
    return op == "&" || op == "|" || op == "^" || op == "<<" || op == ">>";
}
bool is_builtin_callee(const std::string& name) {
    return name == "assert" || name == "print" || name == "len";
}

bool is_literal_kind(NodeKind k) {
    return k == NodeKind::IntLit || k == NodeKind::FloatLit || k == NodeKind::BoolLit ||
           k == NodeKind::StringLit;
}

// Default value expression for a type; nullopt for void.
std::optional<Node> default_value(const Type& t) {
    if (t.is_void()) return std::nullopt;
    if (t.is_array) {
        Node n;
        n.kind = NodeKind::NewArrayExpr;
        n.decl_type = Type{t.base, false};
        n.children.push_back(minij::make_int_lit(0));
        return n;
    }
    switch (t.base) {
        case BaseType::Int: return minij::make_int_lit(0);
        case BaseType::Float: return minij::make_float_lit(0.0, "0.0");
        case BaseType::Bool: return minij::make_bool_lit(false);
        case BaseType::String: return minij::make_string_lit("");
        case BaseType::Void: return std::nullopt;
    }
    return std::nullopt;
}

bool float_as_int(double v, std::int64_t& out) {
    if (!(std::floor(v) == v)) return false;
    if (v < 0 || v > 9.0e15) return false;
    out = static_cast<std::int64_t>(v);
    return true;
}

std::size_t func_arity(const Node& fn) {
    std::size_t n = 0;
    for (const Node& c : fn.children)
        if (c.kind == NodeKind::Param) ++n;
    return n;
}

struct VarDonor {
    std::string name;
    Type type;
    long dist = 0;
};

struct FnDonor {
    std::string name;
    std::vector<Type> params;
    Type ret;
    long dist = 0;
};

// Everything donor enumeration needs about the statement's surroundings.
struct StmtContext {
    const Project* proj = nullptr;
    const CorpusFile* file = nullptr;
    const StatementInfo* info = nullptr;
    const Node* stmt = nullptr;
    const Node* parent = nullptr;  // node owning the statement (block or program)
    const Node* func = nullptr;    // enclosing function, if any
    bool in_block = false;
    int block_pos = -1;  // index within the parent block
    int stmt_line = 0;
    std::string fingerprint;
    std::vector<VarDonor> vars;  // in scope, nearest first
    std::vector<FnDonor> funcs;  // donor pool: src functions, non-test
    std::map<std::pair<std::string, std::size_t>, FnDonor> sigs;  // all callables
    struct LitDonor {
        Node node;
        std::string text;
        Type type;
        long dist = 0;
    };
    std::vector<LitDonor> literals;  // same file, nearest first
};

void collect_literals(const Node& n, int stmt_line, std::vector<StmtContext::LitDonor>& out) {
    if (is_literal_kind(n.kind)) {
        Type t;
        switch (n.kind) {
            case NodeKind::IntLit: t = Type::int_t(); break;
            case NodeKind::FloatLit: t = Type::float_t(); break;
            case NodeKind::BoolLit: t = Type::bool_t(); break;
            default: t = Type::string_t(); break;
        }
        out.push_back({n, minij::expr_text(n), t, std::labs(n.span.start_line - stmt_line)});
    }
    for (const Node& c : n.children) collect_literals(c, stmt_line, out);
}

StmtContext build_context(const Project& project, const CorpusFile& file,
                          const StatementInfo& info) {
    StmtContext ctx;
    ctx.proj = &project;
    ctx.file = &file;
    ctx.info = &info;

    // Resolve the statement and its ancestry.
    const Node* cur = &file.ast;
    const Node* parent = nullptr;
    for (std::size_t step = 0; step < info.path.size(); ++step) {
        parent = cur;
        cur = &cur->children[static_cast<std::size_t>(info.path[step])];
    }
    ctx.stmt = cur;
    ctx.parent = parent;
    ctx.in_block = parent != nullptr && parent->kind == NodeKind::BlockStmt;
    ctx.block_pos = info.path.empty() ? -1 : info.path.back();
    ctx.stmt_line = cur->span.start_line;
    ctx.fingerprint = minij::stmt_text(*cur);

    auto var_dist = [&](const Node& decl, bool same_file) {
        return same_file ? std::labs(decl.span.start_line - ctx.stmt_line)
                         : kOtherFileDistance + decl.span.start_line;
    };

    // Globals from every src file; locals/params/catch vars along the path.
    for (const CorpusFile& f : project.files) {
        if (f.is_test) continue;
        bool same = &f == &file;
        for (const Node& d : f.ast.children)
            if (d.kind == NodeKind::VarDeclStmt)
                ctx.vars.push_back({d.name, d.decl_type, var_dist(d, same)});
    }
    cur = &file.ast;
    for (std::size_t step = 0; step < info.path.size(); ++step) {
        int idx = info.path[step];
        if (cur->kind == NodeKind::FuncDecl) {
            ctx.func = cur;
            for (const Node& p : cur->children)
                if (p.kind == NodeKind::Param)
                    ctx.vars.push_back({p.name, p.decl_type, var_dist(p, true)});
        } else if (cur->kind == NodeKind::BlockStmt) {
            for (int i = 0; i < idx; ++i) {
                const Node& s = cur->children[static_cast<std::size_t>(i)];
                if (s.kind == NodeKind::VarDeclStmt)
                    ctx.vars.push_back({s.name, s.decl_type, var_dist(s, true)});
            }
        } else if (cur->kind == NodeKind::TryStmt && idx == 1) {
            ctx.vars.push_back({cur->name, Type::string_t(), var_dist(*cur, true)});
        }
        cur = &cur->children[static_cast<std::size_t>(idx)];
    }
    if (cur->kind == NodeKind::FuncDecl) ctx.func = cur;  // statement cannot be one; safety
    std::stable_sort(ctx.vars.begin(), ctx.vars.end(), [](const VarDonor& a, const VarDonor& b) {
        return std::tie(a.dist, a.name) < std::tie(b.dist, b.name);
    });

    // Callable signatures (all files) and the donor pool (src, non-test names).
    for (const CorpusFile& f : project.files) {
        bool same = &f == &file;
        for (const Node& d : f.ast.children) {
            if (d.kind != NodeKind::FuncDecl) continue;
            FnDonor fn;
            fn.name = d.name;
            fn.ret = d.decl_type;
            for (const Node& p : d.children)
                if (p.kind == NodeKind::Param) fn.params.push_back(p.decl_type);
            fn.dist = same ? std::labs(d.span.start_line - ctx.stmt_line)
                           : kOtherFileDistance + d.span.start_line;
            ctx.sigs[{fn.name, fn.params.size()}] = fn;
            if (!f.is_test && fn.name.rfind("test_", 0) != 0) ctx.funcs.push_back(fn);
        }
    }
    std::stable_sort(ctx.funcs.begin(), ctx.funcs.end(), [](const FnDonor& a, const FnDonor& b) {
        std::size_t an = a.params.size();
        std::size_t bn = b.params.size();
        return std::tie(a.dist, a.name, an) < std::tie(b.dist, b.name, bn);
    });

    collect_literals(file.ast, ctx.stmt_line, ctx.literals);
    std::stable_sort(ctx.literals.begin(), ctx.literals.end(),
                     [](const StmtContext::LitDonor& a, const StmtContext::LitDonor& b) {
                         return std::tie(a.dist, a.text) < std::tie(b.dist, b.text);
                     });
    return ctx;
}

// Appends applications for one (node, pattern); enforces the donor cap.
struct Emitter {
    std::vector<PatternApplication>* out;
    const StmtContext* ctx;
    const PatternInfo* row;
    const std::vector<int>* rel_path;
    int bfs = 0;
    int count = 0;

    void emit(Donor donor, EditAction action, std::optional<Node> payload,
              const std::vector<int>* edit_path = nullptr) {
        if (count >= kDonorCap) return;
        PatternApplication app;
        app.statement = ctx->info->ref;
        app.node_path = edit_path != nullptr ? *edit_path : *rel_path;
        app.pattern_id = row->id;
        app.priority = row->priority;
        app.bfs_index = bfs;
        app.donor_index = count++;
        app.donor = std::move(donor);
        app.action = action;
        app.payload = std::move(payload);
        app.fingerprint = ctx->fingerprint;
        out->push_back(std::move(app));
    }
};

Node call_stmt(const std::string& callee, std::vector<Node> args) {
    Node call;
    call.kind = NodeKind::CallExpr;
    call.name = callee;
    call.children = std::move(args);
    Node stmt;
    stmt.kind = NodeKind::ExprStmt;
    stmt.children.push_back(std::move(call));
    return stmt;
}

// First in-scope variable compatible with `t`, else a default literal for
// scalars; nullopt when nothing fits (array parameters without an array var).
std::optional<Node> synthesize_value(const StmtContext& ctx, const Type& t) {
    for (const VarDonor& v : ctx.vars)
        if (minij::assignable(t, v.type)) return minij::make_name(v.name);
    if (!t.is_array) return default_value(t);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-pattern matchers. `node` is the BFS-visited node, `parent` its owner
// (the statement's own parent when node is the statement root).
// ---------------------------------------------------------------------------

void match_insert_method_call(Emitter& em, const Node& node, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block || ctx.func == nullptr) return;
    (void)node;
    for (const FnDonor& fn : ctx.funcs) {
        if (fn.name == ctx.func->name && fn.params.size() == func_arity(*ctx.func)) continue;
        std::vector<Node> args;
        bool ok = true;
        for (const Type& pt : fn.params) {
            auto arg = synthesize_value(ctx, pt);
            if (!arg) {
                ok = false;
                break;
            }
            args.push_back(std::move(*arg));
        }
        if (!ok) continue;
        Node stmt = call_stmt(fn.name, std::move(args));
        std::string text = minij::stmt_text(stmt);
        em.emit({"call", text, -1}, EditAction::InsertBefore, std::move(stmt));
    }
}

void match_insert_return(Emitter& em, const Node& /*node*/, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block || ctx.func == nullptr) return;
    Type ret = ctx.func->decl_type;
    auto make_return = [](std::optional<Node> expr) {
        Node r;
        r.kind = NodeKind::ReturnStmt;
        if (expr) r.children.push_back(std::move(*expr));
        return r;
    };
    if (ret.is_void()) {
        em.emit({"void", "return;", -1}, EditAction::InsertBefore, make_return(std::nullopt));
        return;
    }
    if (!ret.is_array) {
        Node d = *default_value(ret);
        std::string text = minij::expr_text(d);
        em.emit({"default", text, -1}, EditAction::InsertBefore, make_return(std::move(d)));
    }
    for (const VarDonor& v : ctx.vars)
        if (minij::assignable(ret, v.type))
            em.emit({"variable", v.name, -1}, EditAction::InsertBefore,
                    make_return(minij::make_name(v.name)));
}

void match_wrap_try_catch(Emitter& em, const Node& node, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block) return;
    Node wrapped;
    wrapped.kind = NodeKind::TryStmt;
    wrapped.name = "caught__";
    Node body;
    body.kind = NodeKind::BlockStmt;
    body.children.push_back(node);
    Node handler;
    handler.kind = NodeKind::BlockStmt;
    wrapped.children.push_back(std::move(body));
    wrapped.children.push_back(std::move(handler));
    em.emit({"", "", -1}, EditAction::ReplaceNode, std::move(wrapped));
}

void match_wrap_if(Emitter& em, const Node& node, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block) return;
    auto wrap = [&](Node cond, const std::string& text) {
        Node wrapped;
        wrapped.kind = NodeKind::IfStmt;
        Node body;
        body.kind = NodeKind::BlockStmt;
        body.children.push_back(node);
        wrapped.children.push_back(std::move(cond));
        wrapped.children.push_back(std::move(body));
        em.emit({"condition", text, -1}, EditAction::ReplaceNode, std::move(wrapped));
    };
    wrap(minij::make_bool_lit(false), "false");
    wrap(minij::make_bool_lit(true), "true");
    for (const VarDonor& v : ctx.vars)
        if (v.type == Type::bool_t()) wrap(minij::make_name(v.name), v.name);
}

void match_remove_conditional_expr(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::BinaryExpr || !is_cond_op(node.op)) return;
    em.emit({"keep", "left", -1}, EditAction::ReplaceNode, node.children[0]);
    em.emit({"keep", "right", -1}, EditAction::ReplaceNode, node.children[1]);
}

void match_insert_conditional_expr(Emitter& em, const Node& node, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    bool is_condition_slot =
        em.rel_path->size() == 1 && (*em.rel_path)[0] == 0 &&
        (ctx.stmt->kind == NodeKind::IfStmt || ctx.stmt->kind == NodeKind::WhileStmt);
    if (!is_condition_slot) return;
    for (const VarDonor& v : ctx.vars) {
        if (v.type != Type::bool_t()) continue;
        for (const char* op : {"&&", "||"}) {
            Node joined;
            joined.kind = NodeKind::BinaryExpr;
            joined.op = op;
            joined.children.push_back(node);
            joined.children.push_back(minij::make_name(v.name));
            em.emit({"condition", std::string(op) + " " + v.name, -1}, EditAction::ReplaceNode,
                    std::move(joined));
        }
    }
}

void swap_binary_op(Emitter& em, const Node& node, const std::string& new_op) {
    Node swapped = node;
    swapped.op = new_op;
    em.emit({"operator", new_op, -1}, EditAction::ReplaceNode, std::move(swapped));
}

void match_change_conditional_operator(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::BinaryExpr || !is_cond_op(node.op)) return;
    swap_binary_op(em, node, node.op == "&&" ? "||" : "&&");
}

void match_change_decl_type(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (!em.rel_path->empty() || node.kind != NodeKind::VarDeclStmt) return;
    if (node.decl_type != Type::int_t() && node.decl_type != Type::float_t()) return;
    Node changed = node;
    changed.decl_type = node.decl_type == Type::int_t() ? Type::float_t() : Type::int_t();
    em.emit({"type", changed.decl_type.to_string(), -1}, EditAction::ReplaceNode,
            std::move(changed));
}

void match_change_cast_type(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::CastExpr) return;
    Node changed = node;
    changed.decl_type = node.decl_type == Type::int_t() ? Type::float_t() : Type::int_t();
    em.emit({"type", changed.decl_type.to_string(), -1}, EditAction::ReplaceNode,
            std::move(changed));
}

void match_div_cast_removal(Emitter& em, const Node& node, const Node* parent, int operand) {
    if (parent == nullptr || parent->kind != NodeKind::BinaryExpr || parent->op != "/") return;
    if (em.rel_path->empty() || em.rel_path->back() != operand) return;
    if (node.kind == NodeKind::CastExpr && node.decl_type == Type::float_t()) {
        em.emit({"form", "cast", -1}, EditAction::ReplaceNode, node.children[0]);
    } else if (node.kind == NodeKind::FloatLit) {
        std::int64_t v = 0;
        if (float_as_int(node.float_val, v))
            em.emit({"form", "literal", -1}, EditAction::ReplaceNode, minij::make_int_lit(v));
    }
}

void match_div_cast_removal_divisor(Emitter& em, const Node& node, const Node* parent) {
    match_div_cast_removal(em, node, parent, 1);
}

void match_div_cast_removal_dividend(Emitter& em, const Node& node, const Node* parent) {
    match_div_cast_removal(em, node, parent, 0);
}

void match_float_mult_to_int_div(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::BinaryExpr || node.op != "*") return;
    auto division = [](const Node& dividend, const Node& divisor) {
        Node d;
        d.kind = NodeKind::BinaryExpr;
        d.op = "/";
        d.children.push_back(dividend);
        d.children.push_back(divisor);
        return d;
    };
    auto is_one_over = [](const Node& n) {
        return n.kind == NodeKind::BinaryExpr && n.op == "/" &&
               n.children[0].kind == NodeKind::FloatLit && n.children[0].float_val == 1.0;
    };
    const Node& lhs = node.children[0];
    const Node& rhs = node.children[1];
    if (is_one_over(lhs))
        em.emit({"form", "inverse_left", -1}, EditAction::ReplaceNode,
                division(rhs, lhs.children[1]));
    if (is_one_over(rhs))
        em.emit({"form", "inverse_right", -1}, EditAction::ReplaceNode,
                division(lhs, rhs.children[1]));
    auto reciprocal = [](const Node& n, std::int64_t& out) {
        if (n.kind != NodeKind::FloatLit || n.float_val <= 0.0) return false;
        double r = 1.0 / n.float_val;
        return std::floor(r) == r && r >= 2.0 && r <= 9.0e15 &&
               (out = static_cast<std::int64_t>(r), true);
    };
    std::int64_t r = 0;
    if (reciprocal(lhs, r))
        em.emit({"form", "reciprocal_left", -1}, EditAction::ReplaceNode,
                division(rhs, minij::make_int_lit(r)));
    if (reciprocal(rhs, r))
        em.emit({"form", "reciprocal_right", -1}, EditAction::ReplaceNode,
                division(lhs, minij::make_int_lit(r)));
}

void match_literal_replacement(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (!is_literal_kind(node.kind)) return;
    const StmtContext& ctx = *em.ctx;
    std::string cur = minij::expr_text(node);
    std::set<std::string> seen = {cur};
    auto offer = [&](Node payload) {
        std::string text = minij::expr_text(payload);
        if (!seen.insert(text).second) return;
        em.emit({"literal", text, -1}, EditAction::ReplaceNode, std::move(payload));
    };
    if (node.kind == NodeKind::BoolLit) {
        offer(minij::make_bool_lit(!node.bool_val));
        return;
    }
    Type want = node.kind == NodeKind::IntLit
                    ? Type::int_t()
                    : node.kind == NodeKind::FloatLit ? Type::float_t() : Type::string_t();
    for (const auto& lit : ctx.literals)
        if (lit.type == want) offer(lit.node);
    if (node.kind == NodeKind::IntLit) {
        offer(minij::make_int_lit(0));
        offer(minij::make_int_lit(1));
        offer(minij::make_signed_int(-1));
    } else if (node.kind == NodeKind::FloatLit) {
        offer(minij::make_float_lit(0.0, "0.0"));
        offer(minij::make_float_lit(1.0, "1.0"));
    } else {
        offer(minij::make_string_lit(""));
    }
}

// Resolved types of a call's arguments.
std::vector<Type> arg_types(const Node& call) {
    std::vector<Type> ts;
    for (const Node& a : call.children) ts.push_back(a.resolved);
    return ts;
}

void match_replace_method_call(Emitter& em, const Node& node, const Node* parent) {
    if (node.kind != NodeKind::CallExpr || is_builtin_callee(node.name)) return;
    const StmtContext& ctx = *em.ctx;
    bool value_context = !(parent != nullptr && parent->kind == NodeKind::ExprStmt);
    std::vector<Type> args = arg_types(node);
    for (const FnDonor& fn : ctx.funcs) {
        if (fn.name == node.name || fn.params.size() != args.size()) continue;
        if (value_context && fn.ret.is_void()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < args.size(); ++i)
            if (!minij::assignable(fn.params[i], args[i])) {
                ok = false;
                break;
            }
        if (!ok) continue;
        Node renamed = node;
        renamed.name = fn.name;
        em.emit({"function", fn.name, -1}, EditAction::ReplaceNode, std::move(renamed));
    }
}

void match_replace_call_argument(Emitter& em, const Node& node, const Node* parent) {
    if (parent == nullptr || parent->kind != NodeKind::CallExpr) return;
    const StmtContext& ctx = *em.ctx;
    int pos = em.rel_path->back();
    Type want;
    if (is_builtin_callee(parent->name)) {
        want = node.resolved;  // builtins accept what is already there
    } else {
        auto it = ctx.sigs.find({parent->name, parent->children.size()});
        if (it == ctx.sigs.end()) return;
        want = it->second.params[static_cast<std::size_t>(pos)];
    }
    std::string cur = minij::expr_text(node);
    for (const VarDonor& v : ctx.vars) {
        if (v.name == cur) continue;
        bool fits = is_builtin_callee(parent->name) ? v.type == want
                                                    : minij::assignable(want, v.type);
        if (fits)
            em.emit({"variable", v.name, pos}, EditAction::ReplaceNode, minij::make_name(v.name));
    }
}

void match_remove_call_argument(Emitter& em, const Node& node, const Node* parent) {
    if (node.kind != NodeKind::CallExpr || is_builtin_callee(node.name) ||
        node.children.empty())
        return;
    const StmtContext& ctx = *em.ctx;
    auto it = ctx.sigs.find({node.name, node.children.size() - 1});
    if (it == ctx.sigs.end()) return;
    bool value_context = !(parent != nullptr && parent->kind == NodeKind::ExprStmt);
    if (value_context && it->second.ret.is_void()) return;
    std::vector<Type> args = arg_types(node);
    for (std::size_t drop = 0; drop < args.size(); ++drop) {
        bool ok = true;
        std::size_t pi = 0;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i == drop) continue;
            if (!minij::assignable(it->second.params[pi++], args[i])) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Node trimmed = node;
        trimmed.children.erase(trimmed.children.begin() + static_cast<std::ptrdiff_t>(drop));
        em.emit({"position", std::to_string(drop), static_cast<int>(drop)},
                EditAction::ReplaceNode, std::move(trimmed));
    }
}

void match_add_call_argument(Emitter& em, const Node& node, const Node* parent) {
    if (node.kind != NodeKind::CallExpr || is_builtin_callee(node.name)) return;
    const StmtContext& ctx = *em.ctx;
    auto it = ctx.sigs.find({node.name, node.children.size() + 1});
    if (it == ctx.sigs.end()) return;
    bool value_context = !(parent != nullptr && parent->kind == NodeKind::ExprStmt);
    if (value_context && it->second.ret.is_void()) return;
    std::vector<Type> args = arg_types(node);
    for (std::size_t i = 0; i < args.size(); ++i)
        if (!minij::assignable(it->second.params[i], args[i])) return;
    Type extra = it->second.params.back();
    int pos = static_cast<int>(args.size());
    auto append = [&](Node arg, const std::string& kind, const std::string& text) {
        Node extended = node;
        extended.children.push_back(std::move(arg));
        em.emit({kind, text, pos}, EditAction::ReplaceNode, std::move(extended));
    };
    for (const VarDonor& v : ctx.vars)
        if (minij::assignable(extra, v.type)) append(minij::make_name(v.name), "variable", v.name);
    if (!extra.is_array) {
        Node d = *default_value(extra);
        std::string text = minij::expr_text(d);
        append(std::move(d), "default", text);
    }
}

void collect_expressions(const Node& n, std::vector<const Node*>& out) {
    if (n.is_expression()) out.push_back(&n);
    for (const Node& c : n.children) collect_expressions(c, out);
}

void collect_free_names(const Node& n, std::set<std::string>& out) {
    if (n.kind == NodeKind::NameExpr) out.insert(n.name);
    for (const Node& c : n.children) collect_free_names(c, out);
}

void match_replace_return_expr(Emitter& em, const Node& node, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || node.kind != NodeKind::ReturnStmt || node.children.empty() ||
        ctx.func == nullptr)
        return;
    Type ret = ctx.func->decl_type;
    std::string cur = minij::expr_text(node.children[0]);
    std::set<std::string> scope_names;
    for (const VarDonor& v : ctx.vars) scope_names.insert(v.name);

    std::vector<const Node*> body_exprs;
    collect_expressions(ctx.func->children.back(), body_exprs);
    struct Candidate {
        const Node* node;
        std::string text;
        long dist;
    };
    std::vector<Candidate> cands;
    std::set<std::string> seen = {cur};
    for (const Node* e : body_exprs) {
        if (!minij::assignable(ret, e->resolved)) continue;
        std::string text = minij::expr_text(*e);
        if (seen.count(text)) continue;
        std::set<std::string> frees;
        collect_free_names(*e, frees);
        bool in_scope = std::all_of(frees.begin(), frees.end(),
                                    [&](const std::string& n) { return scope_names.count(n); });
        if (!in_scope) continue;
        seen.insert(text);
        cands.push_back({e, text, std::labs(e->span.start_line - ctx.stmt_line)});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.dist, a.text) < std::tie(b.dist, b.text);
    });
    std::vector<int> expr_path = {0};
    for (const Candidate& c : cands)
        em.emit({"expression", c.text, -1}, EditAction::ReplaceNode, *c.node, &expr_path);
}

void match_replace_variable(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::NameExpr) return;
    for (const VarDonor& v : em.ctx->vars)
        if (v.name != node.name && v.type == node.resolved)
            em.emit({"variable", v.name, -1}, EditAction::ReplaceNode, minij::make_name(v.name));
}

void match_move_statement(Emitter& em, const Node& /*node*/, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block) return;
    if (static_cast<std::size_t>(ctx.block_pos) + 1 >= ctx.parent->children.size()) return;
    em.emit({"", "", -1}, EditAction::SwapWithNext, std::nullopt);
}

void match_remove_statement(Emitter& em, const Node& /*node*/, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block) return;
    em.emit({"", "", -1}, EditAction::RemoveStmt, std::nullopt);
}

void match_remove_method(Emitter& em, const Node& /*node*/, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    if (!em.rel_path->empty() || !ctx.in_block || ctx.func == nullptr) return;
    Node ret;
    ret.kind = NodeKind::ReturnStmt;
    if (auto d = default_value(ctx.func->decl_type)) ret.children.push_back(std::move(*d));
    std::string text = minij::stmt_text(ret);
    Node body;
    body.kind = NodeKind::BlockStmt;
    body.children.push_back(std::move(ret));
    if (minij::same_structure(ctx.func->children.back(), body)) return;  // already gutted
    em.emit({"body", text, -1}, EditAction::ReplaceFuncBody, std::move(body));
}

void match_op_arithmetic(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::BinaryExpr || !is_arith_op(node.op)) return;
    Type lt = node.children[0].resolved;
    Type rt = node.children[1].resolved;
    if (lt == Type::string_t() || rt == Type::string_t()) return;
    bool has_float = lt == Type::float_t() || rt == Type::float_t();
    for (const char* op : {"+", "-", "*", "/", "%"}) {
        if (op == node.op) continue;
        if (has_float && std::string(op) == "%") continue;
        swap_binary_op(em, node, op);
    }
}

void match_op_assignment(Emitter& em, const Node& node, const Node* /*parent*/) {
    const StmtContext& ctx = *em.ctx;
    (void)ctx;
    if (!em.rel_path->empty() || node.kind != NodeKind::AssignStmt) return;
    static const std::vector<std::string> family = {"+=", "-=", "*=", "/="};
    if (std::find(family.begin(), family.end(), node.op) == family.end()) return;
    if (node.children[0].resolved == Type::string_t()) return;  // strings support += only
    for (const std::string& op : family) {
        if (op == node.op) continue;
        Node swapped = node;
        swapped.op = op;
        em.emit({"operator", op, -1}, EditAction::ReplaceNode, std::move(swapped));
    }
}

void match_op_relational(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::BinaryExpr || !is_rel_op(node.op)) return;
    bool numeric = node.children[0].resolved.is_numeric() && node.children[1].resolved.is_numeric();
    for (const char* op : {"<", "<=", ">", ">=", "==", "!="}) {
        if (op == node.op) continue;
        if (!numeric && std::string(op) != "==" && std::string(op) != "!=") continue;
        swap_binary_op(em, node, op);
    }
}

void match_op_bitwise_shift(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::BinaryExpr || !is_bit_op(node.op)) return;
    for (const char* op : {"&", "|", "^", "<<", ">>"}) {
        if (op == node.op) continue;
        swap_binary_op(em, node, op);
    }
}

void match_op_unary(Emitter& em, const Node& node, const Node* /*parent*/) {
    if (node.kind != NodeKind::UnaryExpr) return;
    if (node.op == "++" || node.op == "--") {
        Node swapped = node;
        swapped.op = node.op == "++" ? "--" : "++";
        em.emit({"operator", swapped.op, -1}, EditAction::ReplaceNode, std::move(swapped));
    } else {
        em.emit({"operator", "drop", -1}, EditAction::ReplaceNode, node.children[0]);
    }
}

void collect_arith_leaves(const Node& n, std::vector<const Node*>& out) {
    if (n.kind == NodeKind::BinaryExpr && is_arith_op(n.op)) {
        collect_arith_leaves(n.children[0], out);
        collect_arith_leaves(n.children[1], out);
    } else {
        out.push_back(&n);
    }
}

void assign_arith_leaves(Node& n, const std::vector<Node>& leaves, std::size_t& next) {
    if (n.kind == NodeKind::BinaryExpr && is_arith_op(n.op)) {
        assign_arith_leaves(n.children[0], leaves, next);
        assign_arith_leaves(n.children[1], leaves, next);
    } else {
        n = leaves[next++];
    }
}

void match_op_operand_order(Emitter& em, const Node& node, const Node* parent) {
    if (node.kind != NodeKind::BinaryExpr || !is_arith_op(node.op)) return;
    // Only the outermost node of an arithmetic chain is mirrored.
    if (parent != nullptr && parent->kind == NodeKind::BinaryExpr && is_arith_op(parent->op))
        return;
    std::vector<const Node*> leaves;
    collect_arith_leaves(node, leaves);
    std::vector<Node> reversed;
    for (auto it = leaves.rbegin(); it != leaves.rend(); ++it) reversed.push_back(**it);
    bool palindrome = true;
    for (std::size_t i = 0; i < leaves.size(); ++i)
        if (minij::expr_text(*leaves[i]) != minij::expr_text(reversed[i])) {
            palindrome = false;
            break;
        }
    if (palindrome) return;
    Node mirrored = node;
    std::size_t next = 0;
    assign_arith_leaves(mirrored, reversed, next);
    em.emit({"order", "reversed", -1}, EditAction::ReplaceNode, std::move(mirrored));
}

using MatchFn = void (*)(Emitter&, const Node&, const Node*);

const std::map<std::string, MatchFn>& matchers() {
    static const std::map<std::string, MatchFn> table = {
        {"insert_method_call", match_insert_method_call},
        {"insert_return", match_insert_return},
        {"wrap_try_catch", match_wrap_try_catch},
        {"wrap_if", match_wrap_if},
        {"remove_conditional_expr", match_remove_conditional_expr},
        {"insert_conditional_expr", match_insert_conditional_expr},
        {"change_conditional_operator", match_change_conditional_operator},
        {"change_decl_type", match_change_decl_type},
        {"change_cast_type", match_change_cast_type},
        {"div_cast_removal_divisor", match_div_cast_removal_divisor},
        {"div_cast_removal_dividend", match_div_cast_removal_dividend},
        {"float_mult_to_int_div", match_float_mult_to_int_div},
        {"literal_replacement", match_literal_replacement},
        {"replace_method_call", match_replace_method_call},
        {"replace_call_argument", match_replace_call_argument},
        {"remove_call_argument", match_remove_call_argument},
        {"add_call_argument", match_add_call_argument},
        {"replace_return_expr", match_replace_return_expr},
        {"replace_variable", match_replace_variable},
        {"move_statement", match_move_statement},
        {"remove_statement", match_remove_statement},
        {"remove_method", match_remove_method},
        {"op_arithmetic", match_op_arithmetic},
        {"op_assignment", match_op_assignment},
        {"op_relational", match_op_relational},
        {"op_bitwise_shift", match_op_bitwise_shift},
        {"op_conditional", match_change_conditional_operator},
        {"op_unary", match_op_unary},
        {"op_operand_order", match_op_operand_order},
    };
    return table;
}

}  // namespace

std::vector<PatternInfo> default_catalog() { return builtin_catalog(); }

std::string catalog_to_string(const std::vector<PatternInfo>& catalog) {
    std::string out = "# Fault-pattern catalog: row order, priorities and enablement.\n";
    for (const PatternInfo& p : catalog) {
        out += "\n[[pattern]]\n";
        out += "id = \"" + p.id + "\"\n";
        out += "category = \"" + p.category + "\"\n";
        out += "priority = " + std::to_string(p.priority) + "\n";
        out += std::string("enabled = ") + (p.enabled ? "true" : "false") + "\n";
    }
    return out;
}

std::vector<PatternInfo> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaMismatch("cannot open pattern catalog: " + path);

    std::vector<PatternInfo> catalog = default_catalog();
    auto find_row = [&](const std::string& id) -> PatternInfo* {
        for (PatternInfo& p : catalog)
            if (p.id == id) return &p;
        return nullptr;
    };

    auto strip = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    auto unquote = [&](const std::string& v, int line) {
        if (v.size() < 2 || v.front() != '"' || v.back() != '"')
            throw SchemaMismatch("pattern catalog line " + std::to_string(line) +
                                 ": expected quoted string, got " + v);
        return v.substr(1, v.size() - 2);
    };

    PatternInfo* row = nullptr;
    std::string seen_id;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[[pattern]]") {
            row = nullptr;
            seen_id.clear();
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw SchemaMismatch("pattern catalog line " + std::to_string(lineno) +
                                 ": expected key = value, got " + t);
        std::string key = strip(t.substr(0, eq));
        std::string val = strip(t.substr(eq + 1));
        if (key == "id") {
            seen_id = unquote(val, lineno);
            row = find_row(seen_id);
            if (row == nullptr)
                throw SchemaMismatch("pattern catalog: unknown pattern id \"" + seen_id + "\"");
        } else if (row == nullptr) {
            throw SchemaMismatch("pattern catalog line " + std::to_string(lineno) +
                                 ": key \"" + key + "\" before id");
        } else if (key == "category") {
            if (unquote(val, lineno) != row->category)
                throw SchemaMismatch("pattern catalog: category mismatch for \"" + row->id + "\"");
        } else if (key == "priority") {
            char* end = nullptr;
            long p = std::strtol(val.c_str(), &end, 10);
            if (end == val.c_str() || *end != '\0' || p < 1)
                throw SchemaMismatch("pattern catalog: bad priority for \"" + row->id + "\"");
            row->priority = static_cast<int>(p);
        } else if (key == "enabled") {
            if (val != "true" && val != "false")
                throw SchemaMismatch("pattern catalog: bad enabled flag for \"" + row->id + "\"");
            row->enabled = val == "true";
        } else {
            throw SchemaMismatch("pattern catalog line " + std::to_string(lineno) +
                                 ": unknown key \"" + key + "\"");
        }
    }
    std::stable_sort(catalog.begin(), catalog.end(),
                     [](const PatternInfo& a, const PatternInfo& b) { return a.priority < b.priority; });
    return catalog;
}

std::vector<PatternApplication> match_patterns(const Project& project, const StatementRef& stmt,
                                               const std::vector<PatternInfo>& catalog) {
    const CorpusFile* file = project.find_file(stmt.file_path);
    const StatementInfo* info = project.find_statement(stmt);
    if (file == nullptr || info == nullptr)
        throw StaleApplication("no such statement: " + stmt.file_path + "#" +
                               std::to_string(stmt.index));
    StmtContext ctx = build_context(project, *file, *info);

    std::vector<PatternInfo> rows = catalog;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PatternInfo& a, const PatternInfo& b) { return a.priority < b.priority; });

    std::vector<PatternApplication> out;
    struct QueueEntry {
        const Node* node;
        const Node* parent;
        std::vector<int> rel_path;
    };
    std::deque<QueueEntry> queue;
    queue.push_back({ctx.stmt, ctx.parent, {}});
    int bfs = 0;
    while (!queue.empty()) {
        QueueEntry entry = std::move(queue.front());
        queue.pop_front();
        for (const PatternInfo& row : rows) {
            if (!row.enabled) continue;
            auto it = matchers().find(row.id);
            if (it == matchers().end()) continue;
            Emitter em{&out, &ctx, &row, &entry.rel_path, bfs, 0};
            it->second(em, *entry.node, entry.parent);
        }
        for (std::size_t i = 0; i < entry.node->children.size(); ++i) {
            const Node& child = entry.node->children[i];
            if (child.is_statement()) continue;  // nested statements rank separately
            std::vector<int> child_path = entry.rel_path;
            child_path.push_back(static_cast<int>(i));
            queue.push_back({&child, entry.node, std::move(child_path)});
        }
        ++bfs;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const PatternApplication& a, const PatternApplication& b) {
                         return std::tie(a.bfs_index, a.priority, a.donor_index) <
                                std::tie(b.bfs_index, b.priority, b.donor_index);
                     });
    return out;
}

minij::Node apply_pattern(const minij::Node& file_ast, const PatternApplication& app) {
    std::vector<std::vector<int>> paths = minij::collect_statement_paths(file_ast);
    if (app.statement.index < 0 || static_cast<std::size_t>(app.statement.index) >= paths.size())
        throw StaleApplication("statement index " + std::to_string(app.statement.index) +
                               " out of range");
    const std::vector<int>& stmt_path = paths[static_cast<std::size_t>(app.statement.index)];

    Node mutated = file_ast;
    Node* stmt = minij::resolve_path(mutated, stmt_path);
    if (stmt == nullptr) throw StaleApplication("statement path no longer resolves");
    if (minij::stmt_text(*stmt) != app.fingerprint)
        throw StaleApplication("statement text changed since matching: " + app.fingerprint);

    auto payload = [&]() -> const Node& {
        if (!app.payload) throw StaleApplication("application carries no payload");
        return *app.payload;
    };
    auto parent_block = [&]() -> Node* {
        if (stmt_path.empty()) throw StaleApplication("statement has no parent block");
        std::vector<int> pp(stmt_path.begin(), stmt_path.end() - 1);
        Node* parent = minij::resolve_path(mutated, pp);
        if (parent == nullptr || parent->kind != NodeKind::BlockStmt)
            throw StaleApplication("statement is not inside a block");
        return parent;
    };

    switch (app.action) {
        case EditAction::ReplaceNode: {
            Node* target = minij::resolve_path(*stmt, app.node_path);
            if (target == nullptr) throw StaleApplication("edit path no longer resolves");
            *target = payload();
            break;
        }
        case EditAction::InsertBefore: {
            Node* parent = parent_block();
            parent->children.insert(parent->children.begin() + stmt_path.back(), payload());
            break;
        }
        case EditAction::RemoveStmt: {
            Node* parent = parent_block();
            parent->children.erase(parent->children.begin() + stmt_path.back());
            break;
        }
        case EditAction::SwapWithNext: {
            Node* parent = parent_block();
            std::size_t pos = static_cast<std::size_t>(stmt_path.back());
            if (pos + 1 >= parent->children.size())
                throw StaleApplication("statement no longer has a successor");
            std::swap(parent->children[pos], parent->children[pos + 1]);
            break;
        }
        case EditAction::ReplaceFuncBody: {
            Node* fn = nullptr;
            Node* cur = &mutated;
            for (int idx : stmt_path) {
                if (cur->kind == NodeKind::FuncDecl) fn = cur;
                cur = &cur->children[static_cast<std::size_t>(idx)];
            }
            if (fn == nullptr) throw StaleApplication("statement has no enclosing function");
            fn->children.back() = payload();
            break;
        }
    }

    if (minij::unparse(mutated) == minij::unparse(file_ast))
        throw NoOpMutant("edit reproduces the original text (" + app.pattern_id + " at " +
                         app.statement.file_path + "#" + std::to_string(app.statement.index) + ")");
    return mutated;
}

}  // namespace ibir
