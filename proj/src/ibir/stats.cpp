#include "ibir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "ibir/errors.hpp"

namespace ibir {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b)
        throw LengthMismatch("columns differ in length: " + std::to_string(a) + " vs " +
                             std::to_string(b));
}

/// Midranks (1-based; tied values share the average of their rank block).
std::vector<double> midranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

/// Sum of t^3 - t over tie groups: the shared tie-correction term.
double tie_term(const std::vector<double>& v) {
    std::map<double, double> counts;
    for (double x : v) ++counts[x];
    double sum = 0.0;
    for (const auto& [value, t] : counts) sum += t * t * t - t;
    return sum;
}

/// Two-sided tail probability from the upper-tail survival function of the
/// standard normal: 2·(1 - Phi(|z|)).
double two_sided_normal(double z) {
    return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

/// Doubles the smaller exact tail, capped at 1.
double two_sided_exact(double below_or_equal, double above_or_equal) {
    return std::min(1.0, 2.0 * std::min(below_or_equal, above_or_equal));
}

double paired_signed_rank(std::vector<double> diffs, int exact_limit) {
    std::erase(diffs, 0.0);
    const std::size_t n = diffs.size();
    if (n == 0) throw DegenerateInput("all paired differences are zero");

    std::vector<double> magnitudes(n);
    for (std::size_t i = 0; i < n; ++i) magnitudes[i] = std::abs(diffs[i]);
    std::vector<double> ranks = midranks(magnitudes);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (diffs[i] > 0.0) w_plus += ranks[i];

    if (n <= static_cast<std::size_t>(exact_limit)) {
        // All 2^n sign assignments are equally likely under H0.
        const std::uint64_t total = std::uint64_t{1} << n;
        std::uint64_t le = 0, ge = 0;
        const double eps = 1e-9;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double w = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::uint64_t{1} << i)) w += ranks[i];
            if (w <= w_plus + eps) ++le;
            if (w >= w_plus - eps) ++ge;
        }
        double denom = static_cast<double>(total);
        return two_sided_exact(static_cast<double>(le) / denom,
                               static_cast<double>(ge) / denom);
    }

    double nd = static_cast<double>(n);
    double mean = nd * (nd + 1.0) / 4.0;
    double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term(magnitudes) / 48.0;
    if (var <= 0.0) throw DegenerateInput("signed-rank variance is zero");
    double z = (std::max(0.0, std::abs(w_plus - mean) - 0.5)) / std::sqrt(var);
    return two_sided_normal(z);
}

double rank_sum(const std::vector<double>& g1, const std::vector<double>& g2, int exact_limit) {
    if (g1.empty() || g2.empty()) throw DegenerateInput("rank-sum group is empty");
    const std::size_t n1 = g1.size(), n2 = g2.size(), total = n1 + n2;
    std::vector<double> pooled = g1;
    pooled.insert(pooled.end(), g2.begin(), g2.end());
    std::vector<double> ranks = midranks(pooled);
    double w = 0.0;
    for (std::size_t i = 0; i < n1; ++i) w += ranks[i];

    if (total <= static_cast<std::size_t>(exact_limit)) {
        // Enumerate all C(total, n1) assignments of the pooled ranks to g1.
        std::uint64_t le = 0, ge = 0, count = 0;
        const double eps = 1e-9;
        // prev_permutation from the all-true-first mask walks every subset.
        std::vector<bool> pick(total, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n1), true);
        do {
            double sum = 0.0;
            for (std::size_t i = 0; i < total; ++i)
                if (pick[i]) sum += ranks[i];
            ++count;
            if (sum <= w + eps) ++le;
            if (sum >= w - eps) ++ge;
        } while (std::prev_permutation(pick.begin(), pick.end()));
        double denom = static_cast<double>(count);
        return two_sided_exact(static_cast<double>(le) / denom,
                               static_cast<double>(ge) / denom);
    }

    double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2),
           dn = static_cast<double>(total);
    double mean = dn1 * (dn + 1.0) / 2.0;
    double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term(pooled) / (dn * (dn - 1.0)));
    if (var <= 0.0) return 1.0;  // every assignment yields the same statistic
    double z = (std::max(0.0, std::abs(w - mean) - 0.5)) / std::sqrt(var);
    return two_sided_normal(z);
}

}  // namespace

double ochiai(const std::vector<bool>& mutant_col, const std::vector<bool>& fault_col) {
    require_same_length(mutant_col.size(), fault_col.size());
    double m = 0.0, f = 0.0, both = 0.0;
    for (std::size_t i = 0; i < mutant_col.size(); ++i) {
        if (mutant_col[i]) ++m;
        if (fault_col[i]) ++f;
        if (mutant_col[i] && fault_col[i]) ++both;
    }
    if (m == 0.0 || f == 0.0) return 0.0;
    return both / std::sqrt(m * f);
}

bool is_coupled(const std::vector<bool>& mutant_col, const std::vector<bool>& fault_col) {
    require_same_length(mutant_col.size(), fault_col.size());
    bool any = false;
    for (std::size_t i = 0; i < mutant_col.size(); ++i) {
        if (mutant_col[i] && !fault_col[i]) return false;  // killed by a passing test
        any = any || mutant_col[i];
    }
    return any;
}

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    require_same_length(x.size(), y.size());
    const std::size_t n = x.size();
    if (n < 2) throw DegenerateInput("kendall needs at least two observations");

    double concordant = 0.0, discordant = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j], dy = y[i] - y[j];
            double prod = dx * dy;
            if (prod > 0.0) ++concordant;
            else if (prod < 0.0) ++discordant;
        }
    auto tied_pairs = [](const std::vector<double>& v) {
        std::map<double, double> counts;
        for (double e : v) ++counts[e];
        double sum = 0.0;
        for (const auto& [value, t] : counts) sum += t * (t - 1.0) / 2.0;
        return sum;
    };
    double nd = static_cast<double>(n);
    double n0 = nd * (nd - 1.0) / 2.0;
    double n1 = tied_pairs(x);
    double n2 = tied_pairs(y);
    double denom_sq = (n0 - n1) * (n0 - n2);
    if (denom_sq <= 0.0) throw DegenerateInput("kendall undefined for a constant vector");
    return (concordant - discordant) / std::sqrt(denom_sq);
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    require_same_length(x.size(), y.size());
    const std::size_t n = x.size();
    if (n < 2) throw DegenerateInput("pearson needs at least two observations");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DegenerateInput("pearson undefined at zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double vargha_delaney_a12(const std::vector<double>& g1, const std::vector<double>& g2) {
    if (g1.empty() || g2.empty()) throw EmptyGroup("effect size over an empty group");
    double wins = 0.0;
    for (double a : g1)
        for (double b : g2) {
            if (a > b) wins += 1.0;
            else if (a == b) wins += 0.5;
        }
    return wins / (static_cast<double>(g1.size()) * static_cast<double>(g2.size()));
}

double wilcoxon(const std::vector<double>& g1, const std::vector<double>& g2, WilcoxonMode mode,
                int exact_limit) {
    if (mode == WilcoxonMode::PairedSignedRank) {
        require_same_length(g1.size(), g2.size());
        std::vector<double> diffs(g1.size());
        for (std::size_t i = 0; i < g1.size(); ++i) diffs[i] = g1[i] - g2[i];
        return paired_signed_rank(std::move(diffs), exact_limit);
    }
    return rank_sum(g1, g2, exact_limit);
}

}  // namespace ibir
