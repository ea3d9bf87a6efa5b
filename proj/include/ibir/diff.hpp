#pragma once

#include <string>

namespace ibir {

/// Unified diff between two texts, with `context` lines of context and hunks
/// merged when their context overlaps. Headers are `--- <a_label>` and
/// `+++ <b_label>`. Returns "" when the texts are equal. Inputs are treated
/// as newline-terminated line sequences; a missing final newline is noted
/// with the conventional `\ No newline at end of file` marker.
std::string unified_diff(const std::string& a, const std::string& b,
                         const std::string& a_label, const std::string& b_label,
                         int context = 3);

}  // namespace ibir
