#include "minij/interp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>

#include "minij/errors.hpp"

namespace minij {

namespace {

constexpr int kMaxCallDepth = 400;
constexpr std::int64_t kMaxArrayLength = 1'000'000;

struct Value {
    BaseType tag = BaseType::Int;
    bool is_array = false;
    std::int64_t i = 0;
    double f = 0.0;
    bool b = false;
    std::string s;
    std::shared_ptr<std::vector<Value>> arr;  // copied on write for value semantics

    static Value of_int(std::int64_t v) { return {BaseType::Int, false, v, 0, false, {}, {}}; }
    static Value of_float(double v) { return {BaseType::Float, false, 0, v, false, {}, {}}; }
    static Value of_bool(bool v) { return {BaseType::Bool, false, 0, 0, v, {}, {}}; }
    static Value of_string(std::string v) {
        return {BaseType::String, false, 0, 0, false, std::move(v), {}};
    }
};

Value default_value(const Type& t) {
    Value v;
    if (t.is_array) {
        v.tag = t.base;
        v.is_array = true;
        v.arr = std::make_shared<std::vector<Value>>();
        return v;
    }
    v.tag = t.base;
    if (t.base == BaseType::Float) return Value::of_float(0.0);
    if (t.base == BaseType::Bool) return Value::of_bool(false);
    if (t.base == BaseType::String) return Value::of_string("");
    return Value::of_int(0);
}

// In-language exception: `throw` payloads and catchable runtime errors.
struct MiniThrow {
    std::string payload;
};
// Uncatchable by in-language try/catch.
struct AssertFail {
    std::string where;
};
struct BudgetExhausted {};

enum class Flow { Normal, Returned };

struct FuncEntry {
    const Node* decl = nullptr;
};

struct Interp {
    const std::vector<SourceFile>& files;
    long max_steps;
    long steps = 0;
    int call_depth = 0;
    std::map<std::pair<std::string, int>, FuncEntry> funcs;
    std::map<std::string, Value> globals;
    std::string output;  // captured print stream

    // Per-call locals: a stack of block scopes.
    struct Frame {
        std::vector<std::map<std::string, Value>> scopes;
    };
    std::vector<Frame> frames;

    explicit Interp(const std::vector<SourceFile>& files_, long max_steps_)
        : files(files_), max_steps(max_steps_) {
        for (const SourceFile& f : files) {
            for (const Node& d : f.ast.children) {
                if (d.kind == NodeKind::FuncDecl) {
                    int arity = 0;
                    for (const Node& c : d.children)
                        if (c.kind == NodeKind::Param) ++arity;
                    funcs[{d.name, arity}] = FuncEntry{&d};
                }
            }
        }
    }

    void tick(long cost = 1) {
        steps += cost;
        if (steps > max_steps) throw BudgetExhausted{};
    }

    void init_globals() {
        globals.clear();
        // Defaults first so forward references read a defined value.
        for (const SourceFile& f : files)
            for (const Node& d : f.ast.children)
                if (d.kind == NodeKind::VarDeclStmt) globals[d.name] = default_value(d.decl_type);
        for (const SourceFile& f : files)
            for (const Node& d : f.ast.children)
                if (d.kind == NodeKind::VarDeclStmt && !d.children.empty()) {
                    tick();
                    globals[d.name] = coerce(eval(d.children[0]), d.decl_type.base);
                }
    }

    static Value coerce(Value v, BaseType target) {
        if (!v.is_array && target == BaseType::Float && v.tag == BaseType::Int)
            return Value::of_float(static_cast<double>(v.i));
        return v;
    }

    Value* find_var(const std::string& name) {
        if (!frames.empty()) {
            Frame& fr = frames.back();
            for (auto it = fr.scopes.rbegin(); it != fr.scopes.rend(); ++it) {
                auto f = it->find(name);
                if (f != it->end()) return &f->second;
            }
        }
        auto g = globals.find(name);
        return g != globals.end() ? &g->second : nullptr;
    }

    [[noreturn]] static void runtime_error(const std::string& msg) { throw MiniThrow{msg}; }

    static double as_double(const Value& v) {
        return v.tag == BaseType::Float ? v.f : static_cast<double>(v.i);
    }

    static std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                         static_cast<std::uint64_t>(b));
    }
    static std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                         static_cast<std::uint64_t>(b));
    }
    static std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                         static_cast<std::uint64_t>(b));
    }
    static std::int64_t wrap_neg(std::int64_t a) {
        return static_cast<std::int64_t>(0ull - static_cast<std::uint64_t>(a));
    }

    static std::int64_t int_div(std::int64_t a, std::int64_t b) {
        if (b == 0) runtime_error("division by zero");
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;  // wraps
        return a / b;
    }
    static std::int64_t int_mod(std::int64_t a, std::int64_t b) {
        if (b == 0) runtime_error("division by zero");
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return 0;
        return a % b;
    }

    Value binary(const std::string& op, const Value& l, const Value& r) {
        bool both_int = !l.is_array && !r.is_array && l.tag == BaseType::Int &&
                        r.tag == BaseType::Int;
        bool numeric = !l.is_array && !r.is_array &&
                       (l.tag == BaseType::Int || l.tag == BaseType::Float) &&
                       (r.tag == BaseType::Int || r.tag == BaseType::Float);
        if (op == "+") {
            if (l.tag == BaseType::String) return Value::of_string(l.s + r.s);
            if (both_int) return Value::of_int(wrap_add(l.i, r.i));
            return Value::of_float(as_double(l) + as_double(r));
        }
        if (op == "-") {
            if (both_int) return Value::of_int(wrap_sub(l.i, r.i));
            return Value::of_float(as_double(l) - as_double(r));
        }
        if (op == "*") {
            if (both_int) return Value::of_int(wrap_mul(l.i, r.i));
            return Value::of_float(as_double(l) * as_double(r));
        }
        if (op == "/") {
            if (both_int) return Value::of_int(int_div(l.i, r.i));
            return Value::of_float(as_double(l) / as_double(r));  // IEEE: /0 gives inf
        }
        if (op == "%") return Value::of_int(int_mod(l.i, r.i));
        if (op == "&") return Value::of_int(l.i & r.i);
        if (op == "|") return Value::of_int(l.i | r.i);
        if (op == "^") return Value::of_int(l.i ^ r.i);
        if (op == "<<" || op == ">>") {
            if (r.i < 0 || r.i > 63) runtime_error("shift out of range");
            if (op == "<<")
                return Value::of_int(static_cast<std::int64_t>(
                    static_cast<std::uint64_t>(l.i) << static_cast<std::uint64_t>(r.i)));
            return Value::of_int(l.i >> r.i);  // arithmetic shift
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            if (both_int) {
                if (op == "<") return Value::of_bool(l.i < r.i);
                if (op == "<=") return Value::of_bool(l.i <= r.i);
                if (op == ">") return Value::of_bool(l.i > r.i);
                return Value::of_bool(l.i >= r.i);
            }
            double a = as_double(l), b = as_double(r);
            if (op == "<") return Value::of_bool(a < b);
            if (op == "<=") return Value::of_bool(a <= b);
            if (op == ">") return Value::of_bool(a > b);
            return Value::of_bool(a >= b);
        }
        if (op == "==" || op == "!=") {
            bool eq;
            if (numeric) {
                eq = both_int ? l.i == r.i : as_double(l) == as_double(r);
            } else if (l.tag == BaseType::String) {
                eq = l.s == r.s;
            } else {
                eq = l.b == r.b;
            }
            return Value::of_bool(op == "==" ? eq : !eq);
        }
        runtime_error("bad operator '" + op + "'");
    }

    Value eval(const Node& e) {
        tick();
        switch (e.kind) {
            case NodeKind::IntLit: return Value::of_int(e.int_val);
            case NodeKind::FloatLit: return Value::of_float(e.float_val);
            case NodeKind::BoolLit: return Value::of_bool(e.bool_val);
            case NodeKind::StringLit: return Value::of_string(e.str_val);
            case NodeKind::NameExpr: {
                Value* v = find_var(e.name);
                if (!v) runtime_error("undefined variable '" + e.name + "'");
                return *v;
            }
            case NodeKind::BinaryExpr: {
                if (e.op == "&&") {
                    Value l = eval(e.children[0]);
                    if (!l.b) return Value::of_bool(false);
                    return Value::of_bool(eval(e.children[1]).b);
                }
                if (e.op == "||") {
                    Value l = eval(e.children[0]);
                    if (l.b) return Value::of_bool(true);
                    return Value::of_bool(eval(e.children[1]).b);
                }
                Value l = eval(e.children[0]);
                Value r = eval(e.children[1]);
                return binary(e.op, l, r);
            }
            case NodeKind::UnaryExpr: {
                if (e.op == "-") {
                    Value v = eval(e.children[0]);
                    if (v.tag == BaseType::Int) return Value::of_int(wrap_neg(v.i));
                    return Value::of_float(-v.f);
                }
                if (e.op == "!") return Value::of_bool(!eval(e.children[0]).b);
                runtime_error("'" + e.op + "' outside statement position");
            }
            case NodeKind::CastExpr: {
                Value v = eval(e.children[0]);
                if (e.decl_type == Type::float_t())
                    return Value::of_float(as_double(v));
                if (v.tag == BaseType::Int) return v;
                double d = v.f;
                if (std::isnan(d) || d >= 9223372036854775808.0 || d < -9223372036854775808.0)
                    runtime_error("float to int overflow");
                return Value::of_int(static_cast<std::int64_t>(d));  // truncates toward zero
            }
            case NodeKind::IndexExpr: {
                Value base = eval(e.children[0]);
                Value idx = eval(e.children[1]);
                if (!base.is_array) runtime_error("indexing a non-array value");
                if (idx.i < 0 || static_cast<std::size_t>(idx.i) >= base.arr->size())
                    runtime_error("array index out of bounds");
                return (*base.arr)[static_cast<std::size_t>(idx.i)];
            }
            case NodeKind::NewArrayExpr: {
                Value n = eval(e.children[0]);
                if (n.i < 0) runtime_error("negative array length");
                if (n.i > kMaxArrayLength) runtime_error("array too large");
                tick(n.i);
                Value v;
                v.tag = e.decl_type.base;
                v.is_array = true;
                v.arr = std::make_shared<std::vector<Value>>(
                    static_cast<std::size_t>(n.i), default_value(e.decl_type));
                return v;
            }
            case NodeKind::CallExpr: return call(e);
            default:
                runtime_error("bad expression node");
        }
    }

    void print_value(const Value& v) {
        switch (v.tag) {
            case BaseType::Int: output += std::to_string(v.i); break;
            case BaseType::Float: {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%g", v.f);
                output += buf;
                break;
            }
            case BaseType::Bool: output += v.b ? "true" : "false"; break;
            case BaseType::String: output += v.s; break;
            default: output += "?";
        }
        output += '\n';
    }

    Value call(const Node& e) {
        std::vector<Value> args;
        args.reserve(e.children.size());
        for (const Node& a : e.children) args.push_back(eval(a));
        if (e.name == "assert") {
            if (!args[0].b) {
                char where[64];
                std::snprintf(where, sizeof(where), "line %d", e.span.start_line);
                throw AssertFail{where};
            }
            return Value::of_int(0);
        }
        if (e.name == "print") {
            print_value(args[0]);
            return Value::of_int(0);
        }
        if (e.name == "len") {
            const Value& v = args[0];
            return Value::of_int(v.is_array ? static_cast<std::int64_t>(v.arr->size())
                                            : static_cast<std::int64_t>(v.s.size()));
        }
        auto it = funcs.find({e.name, static_cast<int>(args.size())});
        if (it == funcs.end())
            runtime_error("no function '" + e.name + "' taking " +
                          std::to_string(args.size()) + " argument(s)");
        const Node& decl = *it->second.decl;
        if (++call_depth > kMaxCallDepth) {
            --call_depth;
            runtime_error("call depth exceeded");
        }
        Frame frame;
        frame.scopes.emplace_back();
        std::size_t ai = 0;
        for (const Node& c : decl.children)
            if (c.kind == NodeKind::Param)
                frame.scopes.back()[c.name] = coerce(std::move(args[ai++]), c.decl_type.base);
        frames.push_back(std::move(frame));
        Value ret;
        Flow flow;
        try {
            flow = exec(decl.children.back(), ret);
        } catch (...) {
            frames.pop_back();
            --call_depth;
            throw;
        }
        frames.pop_back();
        --call_depth;
        if (flow == Flow::Normal) {
            if (!decl.decl_type.is_void()) runtime_error("missing return in '" + e.name + "'");
            return Value::of_int(0);
        }
        if (!decl.decl_type.is_void()) ret = coerce(std::move(ret), decl.decl_type.base);
        return ret;
    }

    // Deep copy so arrays keep value semantics across assignments and binds.
    static Value copy_value(const Value& v) {
        Value c = v;
        if (c.is_array && c.arr) c.arr = std::make_shared<std::vector<Value>>(*c.arr);
        return c;
    }

    void store(const Node& lvalue, Value v) {
        if (lvalue.kind == NodeKind::NameExpr) {
            Value* slot = find_var(lvalue.name);
            if (!slot) runtime_error("undefined variable '" + lvalue.name + "'");
            bool widen = slot->tag == BaseType::Float && !slot->is_array &&
                         v.tag == BaseType::Int && !v.is_array;
            *slot = widen ? Value::of_float(static_cast<double>(v.i)) : copy_value(v);
            return;
        }
        // IndexExpr over a variable (enforced statically).
        Value* slot = find_var(lvalue.children[0].name);
        if (!slot) runtime_error("undefined variable '" + lvalue.children[0].name + "'");
        Value idx = eval(lvalue.children[1]);
        if (!slot->is_array) runtime_error("indexing a non-array value");
        if (idx.i < 0 || static_cast<std::size_t>(idx.i) >= slot->arr->size())
            runtime_error("array index out of bounds");
        // Writing through a shared buffer must not alias other array values.
        if (slot->arr.use_count() > 1) slot->arr = std::make_shared<std::vector<Value>>(*slot->arr);
        Value coerced = slot->tag == BaseType::Float && v.tag == BaseType::Int
                            ? Value::of_float(static_cast<double>(v.i))
                            : std::move(v);
        (*slot->arr)[static_cast<std::size_t>(idx.i)] = std::move(coerced);
    }

    Flow exec(const Node& s, Value& ret) {
        tick();
        switch (s.kind) {
            case NodeKind::BlockStmt: {
                frames.back().scopes.emplace_back();
                Flow fl = Flow::Normal;
                try {
                    for (const Node& c : s.children) {
                        fl = exec(c, ret);
                        if (fl == Flow::Returned) break;
                    }
                } catch (...) {
                    frames.back().scopes.pop_back();
                    throw;
                }
                frames.back().scopes.pop_back();
                return fl;
            }
            case NodeKind::VarDeclStmt: {
                Value v = s.children.empty() ? default_value(s.decl_type)
                                             : copy_value(eval(s.children[0]));
                if (!s.decl_type.is_array) v = coerce(std::move(v), s.decl_type.base);
                frames.back().scopes.back()[s.name] = std::move(v);
                return Flow::Normal;
            }
            case NodeKind::AssignStmt: {
                const Node& lhs = s.children[0];
                if (s.op == "=") {
                    store(lhs, eval(s.children[1]));
                    return Flow::Normal;
                }
                Value cur = eval(lhs);
                Value rhs = eval(s.children[1]);
                std::string binop(1, s.op[0]);  // "+=" applies "+", etc.
                store(lhs, binary(binop, cur, rhs));
                return Flow::Normal;
            }
            case NodeKind::ExprStmt: {
                const Node& e = s.children[0];
                if (e.kind == NodeKind::UnaryExpr && (e.op == "++" || e.op == "--")) {
                    const Node& target = e.children[0];
                    Value cur = eval(target);
                    Value one = cur.tag == BaseType::Float ? Value::of_float(1.0)
                                                            : Value::of_int(1);
                    store(target, binary(e.op == "++" ? "+" : "-", cur, one));
                } else {
                    eval(e);
                }
                return Flow::Normal;
            }
            case NodeKind::IfStmt: {
                if (eval(s.children[0]).b) return exec(s.children[1], ret);
                if (s.children.size() == 3) return exec(s.children[2], ret);
                return Flow::Normal;
            }
            case NodeKind::WhileStmt: {
                while (eval(s.children[0]).b) {
                    Flow fl = exec(s.children[1], ret);
                    if (fl == Flow::Returned) return fl;
                }
                return Flow::Normal;
            }
            case NodeKind::ReturnStmt: {
                if (!s.children.empty()) ret = copy_value(eval(s.children[0]));
                return Flow::Returned;
            }
            case NodeKind::ThrowStmt:
                throw MiniThrow{eval(s.children[0]).s};
            case NodeKind::TryStmt: {
                try {
                    return exec(s.children[0], ret);
                } catch (const MiniThrow& t) {
                    Frame& fr = frames.back();
                    fr.scopes.emplace_back();
                    fr.scopes.back()[s.name] = Value::of_string(t.payload);
                    Flow fl;
                    try {
                        fl = exec(s.children[1], ret);
                    } catch (...) {
                        frames.back().scopes.pop_back();
                        throw;
                    }
                    frames.back().scopes.pop_back();
                    return fl;
                }
            }
            case NodeKind::EmptyStmt:
                return Flow::Normal;
            default:
                runtime_error("bad statement node");
        }
    }
};

}  // namespace

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::FailAssert: return "fail_assert";
        case Outcome::FailError: return "fail_error";
        case Outcome::FailTimeout: return "fail_timeout";
    }
    return "?";
}

std::vector<std::string> list_tests(const std::vector<SourceFile>& files) {
    std::vector<std::string> out;
    for (const SourceFile& f : files)
        for (const Node& d : f.ast.children)
            if (d.kind == NodeKind::FuncDecl && d.name.rfind("test_", 0) == 0)
                out.push_back(d.name);
    return out;
}

std::vector<TestVerdict> run_tests(const std::vector<SourceFile>& files,
                                   const std::vector<std::string>& selection,
                                   StepBudget budget) {
    std::vector<std::string> todo = selection.empty() ? list_tests(files) : selection;
    if (!selection.empty()) {
        std::vector<std::string> known = list_tests(files);
        for (const std::string& name : todo) {
            bool found = false;
            for (const std::string& k : known)
                if (k == name) {
                    found = true;
                    break;
                }
            if (!found) throw UnknownTest(name);
        }
    }

    std::vector<TestVerdict> out;
    out.reserve(todo.size());
    for (const std::string& name : todo) {
        Interp in(files, budget.max_steps);
        TestVerdict v;
        v.test_name = name;
        Node call_node;
        call_node.kind = NodeKind::CallExpr;
        call_node.name = name;
        try {
            in.init_globals();
            in.call(call_node);
            v.outcome = Outcome::Pass;
        } catch (const AssertFail& af) {
            v.outcome = Outcome::FailAssert;
            v.detail = "assertion failed at " + af.where;
        } catch (const MiniThrow& t) {
            v.outcome = Outcome::FailError;
            v.detail = t.payload;
        } catch (const BudgetExhausted&) {
            v.outcome = Outcome::FailTimeout;
            v.detail = "step budget exhausted";
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace minij
