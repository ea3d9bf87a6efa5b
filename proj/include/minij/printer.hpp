#pragma once

#include <string>

#include "minij/ast.hpp"

namespace minij {

/// Canonical source text for an AST. For a Program node this is a full file:
/// four-space indent, one blank line between top-level declarations, trailing
/// newline. Parentheses are minimal: emitted only where precedence demands.
/// parse(unparse(parse(t))) is structurally equal to parse(t).
std::string unparse(const Node& node);

/// Single-line rendering of an expression (used in human-readable metadata).
std::string expr_text(const Node& expr);

/// Canonical text of a single statement at indent level zero, without the
/// trailing newline. Multi-line statements (if/while/try) keep their inner
/// indentation. Used as a stable fingerprint for edit targets.
std::string stmt_text(const Node& stmt);

}  // namespace minij
