#pragma once

#include <vector>

namespace ibir {

/// Ochiai similarity of two detection columns: |M∩F| / sqrt(|M|·|F|),
/// 0 when either column is all-false. Symmetric, in [0,1].
/// Throws LengthMismatch.
double ochiai(const std::vector<bool>& mutant_col, const std::vector<bool>& fault_col);

/// True iff the mutant is killed by at least one fault-detecting test and by
/// no fault-passing test: M ≠ ∅ and M ⊆ F. Throws LengthMismatch.
bool is_coupled(const std::vector<bool>& mutant_col, const std::vector<bool>& fault_col);

/// Kendall rank correlation with tie correction (tau-b). Throws
/// LengthMismatch; DegenerateInput when either vector is constant (the
/// denominator vanishes) or has fewer than two entries.
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

/// Product-moment correlation. Throws LengthMismatch; DegenerateInput on
/// zero variance or fewer than two entries.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

/// Vargha-Delaney effect size: P(a > b) + 0.5·P(a = b) over g1×g2.
/// Throws EmptyGroup.
double vargha_delaney_a12(const std::vector<double>& g1, const std::vector<double>& g2);

enum class WilcoxonMode { PairedSignedRank, RankSum };

/// Two-sided Wilcoxon p-value. Paired mode drops zero-difference pairs and
/// throws DegenerateInput when none remain (or on LengthMismatch for unequal
/// inputs); rank-sum mode throws DegenerateInput on an empty group. Exact
/// enumeration when the effective combined n is at most `exact_limit`;
/// otherwise a normal approximation with tie and continuity corrections.
double wilcoxon(const std::vector<double>& g1, const std::vector<double>& g2, WilcoxonMode mode,
                int exact_limit = 12);

}  // namespace ibir
