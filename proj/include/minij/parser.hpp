#pragma once

#include <string>

#include "minij/ast.hpp"

namespace minij {

/// Parses one MiniJ source file into a Program node. Throws ParseError.
/// The grammar requires braced bodies for functions, if/else and while
/// (no dangling-else ambiguity); `else if` chains nest an IfStmt directly
/// in the else slot.
Node parse(const std::string& text, const std::string& filename);

}  // namespace minij
