#include "ibir/diff.hpp"

#include <algorithm>
#include <vector>

namespace ibir {

namespace {

struct Lines {
    std::vector<std::string> lines;
    bool missing_final_newline = false;
};

Lines split_lines(const std::string& text) {
    Lines out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            out.lines.push_back(text.substr(start));
            out.missing_final_newline = true;
            return out;
        }
        out.lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

enum class OpKind { Keep, Del, Add };

struct Op {
    OpKind kind;
    int a_index;  // consumed line in a (Keep/Del), else -1
    int b_index;  // consumed line in b (Keep/Add), else -1
};

// Longest-common-subsequence edit script. When a run of lines differs, the
// deletions are emitted before the additions, matching conventional diffs.
std::vector<Op> edit_script(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    // dp[i][j] = LCS length of a[i..] and b[j..]
    std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
    for (int i = n - 1; i >= 0; --i)
        for (int j = m - 1; j >= 0; --j)
            dp[i][j] = a[i] == b[j] ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);

    std::vector<Op> ops;
    int i = 0;
    int j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j]) {
            ops.push_back({OpKind::Keep, i++, j++});
        } else if (dp[i + 1][j] >= dp[i][j + 1]) {
            ops.push_back({OpKind::Del, i++, -1});
        } else {
            ops.push_back({OpKind::Add, -1, j++});
        }
    }
    while (i < n) ops.push_back({OpKind::Del, i++, -1});
    while (j < m) ops.push_back({OpKind::Add, -1, j++});
    return ops;
}

}  // namespace

std::string unified_diff(const std::string& a, const std::string& b,
                         const std::string& a_label, const std::string& b_label,
                         int context) {
    if (a == b) return "";
    Lines la = split_lines(a);
    Lines lb = split_lines(b);
    std::vector<Op> ops = edit_script(la.lines, lb.lines);
    const int n = static_cast<int>(ops.size());
    const int last_a = static_cast<int>(la.lines.size()) - 1;
    const int last_b = static_cast<int>(lb.lines.size()) - 1;

    std::string out = "--- " + a_label + "\n+++ " + b_label + "\n";

    auto emit_line = [&](const Op& op) {
        switch (op.kind) {
            case OpKind::Keep:
                out += ' ';
                out += la.lines[static_cast<std::size_t>(op.a_index)];
                break;
            case OpKind::Del:
                out += '-';
                out += la.lines[static_cast<std::size_t>(op.a_index)];
                break;
            case OpKind::Add:
                out += '+';
                out += lb.lines[static_cast<std::size_t>(op.b_index)];
                break;
        }
        out += '\n';
        bool at_a_end = op.a_index == last_a && la.missing_final_newline;
        bool at_b_end = op.b_index == last_b && lb.missing_final_newline;
        if ((op.kind != OpKind::Add && at_a_end) || (op.kind != OpKind::Del && at_b_end))
            out += "\\ No newline at end of file\n";
    };

    // Running source positions at each op boundary, for hunk headers.
    std::vector<int> a_pos(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> b_pos(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 0; k < n; ++k) {
        a_pos[static_cast<std::size_t>(k) + 1] =
            a_pos[static_cast<std::size_t>(k)] + (ops[static_cast<std::size_t>(k)].kind != OpKind::Add ? 1 : 0);
        b_pos[static_cast<std::size_t>(k) + 1] =
            b_pos[static_cast<std::size_t>(k)] + (ops[static_cast<std::size_t>(k)].kind != OpKind::Del ? 1 : 0);
    }

    int floor = 0;  // first op index not yet covered by a hunk
    int k = 0;
    while (k < n) {
        if (ops[static_cast<std::size_t>(k)].kind == OpKind::Keep) {
            ++k;
            continue;
        }
        // Extend over subsequent changes whose context windows touch this one.
        int last_change = k;
        int scan = k + 1;
        while (scan < n && scan - last_change <= 2 * context) {
            if (ops[static_cast<std::size_t>(scan)].kind != OpKind::Keep) last_change = scan;
            ++scan;
        }
        int start = std::max(floor, k - context);
        int end = std::min(n, last_change + context + 1);

        int a_count = 0;
        int b_count = 0;
        for (int t = start; t < end; ++t) {
            if (ops[static_cast<std::size_t>(t)].kind != OpKind::Add) ++a_count;
            if (ops[static_cast<std::size_t>(t)].kind != OpKind::Del) ++b_count;
        }
        int a_start = a_count == 0 ? a_pos[static_cast<std::size_t>(start)] : a_pos[static_cast<std::size_t>(start)] + 1;
        int b_start = b_count == 0 ? b_pos[static_cast<std::size_t>(start)] : b_pos[static_cast<std::size_t>(start)] + 1;
        out += "@@ -" + std::to_string(a_start) + "," + std::to_string(a_count) + " +" +
               std::to_string(b_start) + "," + std::to_string(b_count) + " @@\n";
        for (int t = start; t < end; ++t) emit_line(ops[static_cast<std::size_t>(t)]);
        floor = end;
        k = end;
    }
    return out;
}

}  // namespace ibir
