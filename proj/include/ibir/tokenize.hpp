#pragma once

#include <map>
#include <string>
#include <vector>

namespace ibir {

enum class TokenizeMode { Report, Code };

/// Term multiset (term -> occurrence count) for IR indexing and queries.
using TermCounts = std::map<std::string, int>;

/// Normalizes free text or source code into weighted terms:
///   - words are maximal [A-Za-z0-9_] runs; everything else separates
///   - identifiers split at camelCase humps, underscores, and digits
///   - when a word splits into several fragments, the joined lowercase
///     compound is kept as an additional term alongside the fragments
///   - terms are lowercased; stop-words and MiniJ keywords are dropped
///     (before stemming); bare numbers are dropped
///   - surviving terms are Porter-stemmed
/// Both modes share this pipeline today; the mode is part of the interface
/// so report- and code-specific rules can diverge without call-site churn.
TermCounts tokenize(const std::string& text, TokenizeMode mode);

/// The fixed 100-word stop list (lowercase, sorted). The same list is
/// shipped at data/stopwords.txt; a test pins the two copies together.
const std::vector<std::string>& stopword_list();

}  // namespace ibir
