#pragma once

#include <string>

namespace ibir {

/// Porter suffix-stripping stemmer (the classic five-step 1980 algorithm).
/// Input must be lowercase ASCII letters; words of length <= 2 are returned
/// unchanged, matching the reference implementation.
std::string porter_stem(const std::string& word);

}  // namespace ibir
