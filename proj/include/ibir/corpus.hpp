#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minij/ast.hpp"
#include "minij/program.hpp"

namespace ibir {

enum class ReportStatus { Resolved, Fixed, Closed, Other };

const char* report_status_name(ReportStatus s);

struct BugReport {
    std::string id;
    std::string title;
    std::string description;
    ReportStatus status = ReportStatus::Other;
    std::string status_raw;
    std::optional<std::string> linked_fault_id;
};

/// Stable statement identity: project-relative file path + ordinal index.
struct StatementRef {
    std::string file_path;
    int index = 0;

    bool operator==(const StatementRef&) const = default;
    auto operator<=>(const StatementRef&) const = default;
};

struct StatementInfo {
    StatementRef ref;
    minij::Span span;
    std::vector<int> path;  // child-index path from the file's Program node
};

struct CorpusFile {
    std::string path;      // project-relative, forward slashes ("src/calc.mj")
    std::string raw_text;
    minij::Node ast;       // parsed and type-annotated
    std::vector<StatementInfo> statements;  // populated for src files only
    bool is_test = false;
};

struct GroundTruthFault {
    std::string fault_id;
    std::string bug_report_id;
    std::vector<StatementRef> fixed_statements;
    std::vector<std::string> failing_tests;
};

struct Project {
    std::string name;  // directory name; "." for a single-project root
    std::vector<CorpusFile> files;  // src files then test files, each path-sorted
    std::vector<BugReport> reports;
    std::vector<GroundTruthFault> faults;

    const CorpusFile* find_file(const std::string& path) const;
    const GroundTruthFault* find_fault(const std::string& fault_id) const;
    const BugReport* find_report(const std::string& report_id) const;
    /// Source text of a statement, sliced from the owning file.
    std::string statement_text(const StatementRef& ref) const;
    const StatementInfo* find_statement(const StatementRef& ref) const;
    /// All files as a runnable program (src then tests).
    std::vector<minij::SourceFile> program() const;
    std::vector<std::string> test_names() const;
};

struct Corpus {
    std::vector<Project> projects;  // sorted by name

    /// Project owning the report id, or nullptr. Report ids are unique
    /// corpus-wide (enforced at load).
    const Project* project_for_report(const std::string& report_id) const;
    const BugReport* find_report(const std::string& report_id) const;
};

/// Loads a corpus rooted at `root`. The root is either one project
/// (contains src/) or a directory of projects (each subdirectory with a
/// src/ is loaded; others are ignored). Layout per project:
///   src/**/*.mj  tests/**/*.mj  bugreports/*.json  faults/*.json
/// Throws MalformedReport (schema violation), minij::ParseError,
/// DanglingLink (report names a missing fault), minij::TypeError (sources
/// must compile — downstream stages rely on annotated types).
Corpus load_corpus(const std::string& root);

/// Reports whose status is in `statuses`, across all projects, in id order.
std::vector<const BugReport*> filter_reports(const Corpus& corpus,
                                             const std::vector<ReportStatus>& statuses);

}  // namespace ibir
