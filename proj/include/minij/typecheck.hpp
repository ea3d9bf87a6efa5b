#pragma once

#include <vector>

#include "minij/program.hpp"

namespace minij {

/// Static checks for the union of `files` as one program:
///   - unique (name, arity) per function, unique global variable names
///   - assert/print/len are reserved builtins
///   - no shadowing: a declaration may not reuse any visible variable name
///   - operator/argument/return/assignment type consistency (int widens to
///     float; arrays are invariant)
///   - postfix ++/-- only in statement position, on a variable or element
///   - global initializers may not call user functions
///   - functions named test_* must take no parameters and return void
///
/// Annotates every expression node's `resolved` type in place.
/// Throws TypeError on the first violation.
void typecheck_program(std::vector<SourceFile>& files);

/// The assignment-compatibility rule: exact type match, or int widening to
/// float. Shared with code that synthesizes replacement material.
bool assignable(const Type& to, const Type& from);

}  // namespace minij
