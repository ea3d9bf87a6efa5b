#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ibir/corpus.hpp"
#include "minij/ast.hpp"

namespace ibir {

/// One row of the fault-pattern catalog. The matching contexts and recipes
/// are built in; the catalog controls ordering (priority, 1 = applied first)
/// and per-row enablement.
struct PatternInfo {
    std::string id;
    std::string category;
    int priority = 0;
    bool enabled = true;
};

/// All rows in priority order.
std::vector<PatternInfo> default_catalog();

/// Catalog with priority/enabled overrides loaded from a key-value data file
/// ([[pattern]] tables with id/category/priority/enabled keys). Unknown ids
/// raise SchemaMismatch; omitted rows keep their defaults.
std::vector<PatternInfo> load_catalog(const std::string& path);

/// Serialization of a catalog in the same format load_catalog reads.
std::string catalog_to_string(const std::vector<PatternInfo>& catalog);

/// Material a parameterized pattern consumes: a donor variable, literal,
/// callee, harvested expression, wrap condition, argument position, operator
/// alternative, or recipe form marker. `text` is canonical display text;
/// `aux` is a position index where one applies.
struct Donor {
    std::string kind;
    std::string text;
    int aux = -1;

    bool operator==(const Donor&) const = default;
};

/// How the prebuilt payload is grafted into the file when applying.
enum class EditAction {
    ReplaceNode,      // replace the node at node_path with payload
    InsertBefore,     // insert payload as a statement before this one
    RemoveStmt,       // delete the statement from its block
    SwapWithNext,     // exchange the statement with its successor
    ReplaceFuncBody,  // replace the enclosing function's body with payload
};

/// A concrete (location, pattern, donor) triple, self-contained: the payload
/// carries the synthesized replacement subtree, and the fingerprint pins the
/// statement text this application was matched against.
struct PatternApplication {
    StatementRef statement;
    std::vector<int> node_path;  // statement root -> target node
    std::string pattern_id;
    int priority = 0;
    int bfs_index = 0;   // breadth-first visit order of the target node
    int donor_index = 0; // ordinal within this (node, pattern)'s donor list
    Donor donor;
    EditAction action = EditAction::ReplaceNode;
    std::optional<minij::Node> payload;
    std::string fingerprint;  // canonical statement text at match time
};

/// All catalog applications for one statement. Traversal is breadth-first
/// from the statement root over the statement's own nodes (nested statements
/// inside blocks belong to their own entries in the statement universe).
/// Ordering: BFS node order, then pattern priority, then donor order. At most
/// 5 donors per (node, pattern), nearest declaration first, then name.
std::vector<PatternApplication> match_patterns(const Project& project, const StatementRef& stmt,
                                               const std::vector<PatternInfo>& catalog);

/// Applies one application to a copy of `file_ast` (a Program node) and
/// returns the mutated AST; the input is untouched. Throws StaleApplication
/// if the statement index or fingerprint no longer matches the AST, and
/// NoOpMutant if the edit reproduces the original text exactly.
minij::Node apply_pattern(const minij::Node& file_ast, const PatternApplication& app);

}  // namespace ibir
