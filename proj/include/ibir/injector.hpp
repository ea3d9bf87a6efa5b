#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibir/corpus.hpp"
#include "ibir/patterns.hpp"
#include "minij/ast.hpp"

namespace ibir {

enum class MutantSource { Ibir, Baseline };

/// "ibir" / "baseline" — used in mutant ids and serialized metadata.
const char* mutant_source_name(MutantSource s);

enum class MutantStatus { Viable, Stillborn, Noop };

/// One emitted fault. Only viable mutants leave the injector; stillborn
/// (fails typecheck) and noop (identical text) candidates are consumed
/// internally.
struct Mutant {
    std::string mutant_id;  // "{source}-{seed}-{rank}"
    MutantSource source = MutantSource::Ibir;
    std::string project;    // owning project name ("." for single-project roots)
    PatternApplication application;
    int rank = 0;           // dense, 1-based emission rank
    minij::Node mutated_ast;  // the whole mutated file (Program node)
    std::string diff;       // canonical original vs canonical mutated
    MutantStatus status = MutantStatus::Viable;
};

struct InjectionConfig {
    int n_faults = 10;
    int top_files = 20;       // localization cutoff (file stage)
    int top_statements = 50;  // localization cutoff (statement stage)
    std::vector<std::string> scope;  // file allow-list; empty = everything
    std::uint64_t seed = 0;
    std::vector<PatternInfo> catalog = default_catalog();
    int jobs = 1;  // candidate-evaluation workers; output is order-defined
};

/// Report-guided injection: rank files (top_files) -> rank statements
/// (top_statements) -> match the catalog per statement -> walk applications
/// by (statement rank, pattern priority, BFS order, donor order), keeping
/// viable, non-duplicate mutants until n_faults or exhaustion. Returns fewer
/// than n_faults without error when the pool runs dry; throws NoViableMutants
/// only when nothing viable exists. Throws EmptyQuery on a tokenless report
/// and std::invalid_argument when the report is not part of the corpus.
std::vector<Mutant> inject(const Corpus& corpus, const BugReport& report,
                           const InjectionConfig& config);

/// Classical-mutation baseline: the candidate pool is every application of
/// the operator-replacement families (arithmetic, assignment, relational,
/// conditional, bitwise/shift, unary) plus statement removal over every src
/// statement in scope; the pool is sampled without replacement under
/// config.seed, discarding stillborn/noop/duplicate draws, until n_faults
/// viable mutants or exhaustion. Throws NoViableMutants when nothing viable.
std::vector<Mutant> inject_baseline(const Corpus& corpus, const InjectionConfig& config);

/// The catalog subset inject_baseline draws from.
std::vector<PatternInfo> baseline_catalog();

/// Writes one directory per mutant under `out_dir`: the mutated file at its
/// project-relative path, `diff.patch`, and `meta.json`.
void write_mutants(const std::string& out_dir, const std::vector<Mutant>& mutants);

}  // namespace ibir
