#pragma once

#include <string>
#include <vector>

#include "minij/ast.hpp"

namespace minij {

/// One parsed source file; `path` is corpus-relative (e.g. "src/calc.mj").
struct SourceFile {
    std::string path;
    Node ast;  // kind == Program
};

}  // namespace minij
