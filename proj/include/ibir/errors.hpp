#pragma once

#include <stdexcept>
#include <string>

namespace ibir {

/// Bug report or fault metadata violates the corpus schema.
struct MalformedReport : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A bug report's linked_fault_id names a fault that does not exist.
struct DanglingLink : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Index construction over a corpus with no documents.
struct EmptyCorpus : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Localization attempted with a query that has no tokens.
struct EmptyQuery : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A pattern application whose result unparses identically to the original.
struct NoOpMutant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A pattern application no longer resolves inside the target AST.
struct StaleApplication : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Injection produced no viable mutant at all.
struct NoViableMutants : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Boolean vectors of different lengths passed to a column metric.
struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Statistic undefined for the given input (constant vector, all-zero
/// differences, ...).
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Effect size over an empty group.
struct EmptyGroup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Suite sampling band contains no integer size.
struct BandEmpty : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal interpreter failure while building a kill matrix (distinct from
/// a test failing).
struct ExecutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Report JSON does not match the expected schema.
struct SchemaMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ibir
