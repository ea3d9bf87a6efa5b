#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ibir/corpus.hpp"
#include "ibir/injector.hpp"

namespace ibir {

/// Detection table over one project: rows are tests that pass on the
/// original program, columns are subjects (mutants, then the ground-truth
/// fault), detect[t][s] = true iff test t's verdict on subject s is not pass.
struct KillMatrix {
    std::vector<std::string> tests;
    std::vector<std::string> subjects;
    std::vector<std::vector<bool>> detect;  // [test][subject]

    /// Detection column of one subject. Throws std::out_of_range for an
    /// unknown subject id.
    std::vector<bool> column(const std::string& subject_id) const;

    /// `test` first, then one 0/1 column per subject.
    std::string to_csv() const;
};

struct EvalConfig {
    int n_samples = 50;
    double band_lo = 0.1;
    double band_hi = 0.3;
    std::uint64_t seed = 0;
    int jobs = 1;             // mutant-execution workers
    long max_steps = 1'000'000;  // per-test interpreter budget
    int exact_limit = 12;     // wilcoxon exact-enumeration cutoff
};

/// Runs every project test against the original program and against the
/// first `budget` mutants. Tests failing on the original are excluded
/// entirely; the fault's column is its declared failing-test set. Mutants
/// must belong to the fault's project. Throws ExecutionError when the
/// interpreter itself fails (distinct from a test failing).
KillMatrix build_kill_matrix(const Corpus& corpus, const std::vector<Mutant>& mutants,
                             const GroundTruthFault& fault, int budget,
                             const EvalConfig& config = {});

struct SuiteSample {
    int sample_id = 0;                   // 1-based draw ordinal
    std::vector<std::string> test_subset;  // in draw order
    bool detects_fault = false;
    double detection_ratio = 0.0;  // fraction of matrix mutants killed by the subset
};

/// Draws n_samples test subsets from the matrix's test universe. Subset size
/// is uniform over [ceil(lo·T), floor(hi·T)] (BandEmpty when that interval
/// holds no integer), tests drawn without replacement. detects_fault checks
/// overlap with the fault's declared failing tests; detection_ratio is
/// measured against the matrix's mutant columns.
std::vector<SuiteSample> sample_suites(const KillMatrix& matrix, const GroundTruthFault& fault,
                                       int n_samples, double band_lo, double band_hi,
                                       std::uint64_t seed);

/// A statistic that can be undefined (degenerate input) without that being
/// an error — e.g. correlations when every sampled suite agrees.
struct MaybeStat {
    bool defined = false;
    double value = 0.0;
};

struct MutantEval {
    std::string mutant_id;
    double ochiai = 0.0;
    bool killed = false;
    bool coupled = false;
};

/// Everything measured for one (source, budget) cell.
struct SourceBudgetMetrics {
    int budget = 0;
    std::vector<MutantEval> mutants;
    double best_ochiai = 0.0;
    bool any_coupled = false;
    MaybeStat kendall;     // detection_ratio vs detects_fault over the suites
    MaybeStat pearson;
    MaybeStat rank_sum_p;  // detecting vs non-detecting suites' ratios
    MaybeStat a12;
    std::vector<SuiteSample> suites;
    KillMatrix matrix;  // backing data; not part of the JSON serialization
};

/// Metrics for one fault: source name -> budget -> metrics. Mutant lists are
/// prefix-sliced per budget (both injection modes emit rank-prefix-stable
/// lists), so one list at the largest budget serves all smaller ones.
std::map<std::string, std::map<int, SourceBudgetMetrics>> evaluate_target(
    const Corpus& corpus, const GroundTruthFault& fault,
    const std::map<std::string, std::vector<Mutant>>& mutants_by_source,
    const std::vector<int>& budgets, const EvalConfig& config);

/// Whole-corpus report: fault_id -> source -> budget -> metrics.
struct EvaluationReport {
    EvalConfig config;
    std::map<std::string, std::map<std::string, std::map<int, SourceBudgetMetrics>>> targets;
};

std::string report_to_json(const EvaluationReport& report);
/// Inverse of report_to_json. Throws SchemaMismatch on malformed input.
EvaluationReport report_from_json(const std::string& text);

}  // namespace ibir
