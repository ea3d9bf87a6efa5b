#include "ibir/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ibir/errors.hpp"
#include "minij/parser.hpp"
#include "minij/typecheck.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ibir {

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw MalformedReport("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Sorted project-relative paths (forward slashes) of *.mj files under dir.
std::vector<std::string> find_mj_files(const fs::path& project_root, const std::string& subdir) {
    std::vector<std::string> out;
    fs::path base = project_root / subdir;
    if (!fs::exists(base)) return out;
    for (const auto& entry : fs::recursive_directory_iterator(base)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".mj") continue;
        out.push_back(fs::relative(entry.path(), project_root).generic_string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> find_json_files(const fs::path& dir) {
    std::vector<std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
    if (!obj.contains(field) || !obj[field].is_string())
        throw MalformedReport(where + ": missing or non-string field \"" + field + "\"");
    return obj[field].get<std::string>();
}

ReportStatus parse_status(const std::string& s) {
    if (s == "resolved") return ReportStatus::Resolved;
    if (s == "fixed") return ReportStatus::Fixed;
    if (s == "closed") return ReportStatus::Closed;
    return ReportStatus::Other;
}

CorpusFile load_source(const fs::path& project_root, const std::string& rel, bool is_test) {
    CorpusFile f;
    f.path = rel;
    f.is_test = is_test;
    f.raw_text = read_file(project_root / rel);
    f.ast = minij::parse(f.raw_text, rel);
    if (!is_test) {
        auto paths = minij::collect_statement_paths(f.ast);
        int index = 0;
        for (auto& p : paths) {
            StatementInfo info;
            info.ref = {rel, index++};
            info.path = p;
            info.span = minij::resolve_path(f.ast, p)->span;
            f.statements.push_back(std::move(info));
        }
    }
    return f;
}

Project load_project(const fs::path& root, const std::string& name) {
    Project proj;
    proj.name = name;

    for (const std::string& rel : find_mj_files(root, "src"))
        proj.files.push_back(load_source(root, rel, false));
    std::size_t n_src = proj.files.size();
    for (const std::string& rel : find_mj_files(root, "tests"))
        proj.files.push_back(load_source(root, rel, true));

    // One program: annotate types in place (patterns need resolved types).
    {
        std::vector<minij::SourceFile> prog;
        prog.reserve(proj.files.size());
        for (const CorpusFile& f : proj.files) prog.push_back({f.path, f.ast});
        minij::typecheck_program(prog);
        for (std::size_t i = 0; i < proj.files.size(); ++i)
            proj.files[i].ast = std::move(prog[i].ast);
    }
    (void)n_src;

    std::set<std::string> tests;
    for (const std::string& t : proj.test_names()) tests.insert(t);

    for (const std::string& file : find_json_files(root / "bugreports")) {
        json obj;
        try {
            obj = json::parse(read_file(file));
        } catch (const json::parse_error& e) {
            throw MalformedReport(file + ": " + e.what());
        }
        if (!obj.is_object()) throw MalformedReport(file + ": expected a JSON object");
        BugReport r;
        r.id = require_string(obj, "id", file);
        if (r.id.empty()) throw MalformedReport(file + ": empty report id");
        r.title = require_string(obj, "title", file);
        r.description = require_string(obj, "description", file);
        r.status_raw = require_string(obj, "status", file);
        r.status = parse_status(r.status_raw);
        if (obj.contains("linked_fault_id") && !obj["linked_fault_id"].is_null()) {
            if (!obj["linked_fault_id"].is_string())
                throw MalformedReport(file + ": linked_fault_id must be a string");
            r.linked_fault_id = obj["linked_fault_id"].get<std::string>();
        }
        if (r.title.empty() && r.description.empty())
            throw MalformedReport(file + ": report " + r.id + " has empty title and description");
        for (const BugReport& prev : proj.reports)
            if (prev.id == r.id)
                throw MalformedReport(file + ": duplicate report id " + r.id);
        proj.reports.push_back(std::move(r));
    }

    for (const std::string& file : find_json_files(root / "faults")) {
        json obj;
        try {
            obj = json::parse(read_file(file));
        } catch (const json::parse_error& e) {
            throw MalformedReport(file + ": " + e.what());
        }
        if (!obj.is_object()) throw MalformedReport(file + ": expected a JSON object");
        GroundTruthFault f;
        f.fault_id = require_string(obj, "fault_id", file);
        f.bug_report_id = require_string(obj, "bug_report_id", file);
        if (!obj.contains("fixed_statements") || !obj["fixed_statements"].is_array())
            throw MalformedReport(file + ": missing fixed_statements array");
        for (const json& st : obj["fixed_statements"]) {
            if (!st.is_object() || !st.contains("path") || !st["path"].is_string() ||
                !st.contains("index") || !st["index"].is_number_integer())
                throw MalformedReport(file + ": fixed_statements entries need {path, index}");
            StatementRef ref{st["path"].get<std::string>(), st["index"].get<int>()};
            if (!proj.find_statement(ref))
                throw MalformedReport(file + ": fixed statement " + ref.file_path + "#" +
                                      std::to_string(ref.index) + " does not exist");
            f.fixed_statements.push_back(std::move(ref));
        }
        if (!obj.contains("failing_tests") || !obj["failing_tests"].is_array())
            throw MalformedReport(file + ": missing failing_tests array");
        for (const json& t : obj["failing_tests"]) {
            if (!t.is_string())
                throw MalformedReport(file + ": failing_tests entries must be strings");
            std::string name = t.get<std::string>();
            if (!tests.count(name))
                throw MalformedReport(file + ": failing test " + name + " is not in the suite");
            f.failing_tests.push_back(std::move(name));
        }
        if (f.failing_tests.empty())
            throw MalformedReport(file + ": fault " + f.fault_id + " has no failing tests");
        bool report_exists = false;
        for (const BugReport& r : proj.reports) report_exists |= r.id == f.bug_report_id;
        if (!report_exists)
            throw MalformedReport(file + ": fault " + f.fault_id +
                                  " names unknown bug report " + f.bug_report_id);
        for (const GroundTruthFault& prev : proj.faults)
            if (prev.fault_id == f.fault_id)
                throw MalformedReport(file + ": duplicate fault id " + f.fault_id);
        proj.faults.push_back(std::move(f));
    }

    for (const BugReport& r : proj.reports) {
        if (r.linked_fault_id && !proj.find_fault(*r.linked_fault_id))
            throw DanglingLink("report " + r.id + " links missing fault " + *r.linked_fault_id);
    }

    std::sort(proj.reports.begin(), proj.reports.end(),
              [](const BugReport& a, const BugReport& b) { return a.id < b.id; });
    std::sort(proj.faults.begin(), proj.faults.end(),
              [](const GroundTruthFault& a, const GroundTruthFault& b) {
                  return a.fault_id < b.fault_id;
              });
    return proj;
}

}  // namespace

const char* report_status_name(ReportStatus s) {
    switch (s) {
        case ReportStatus::Resolved: return "resolved";
        case ReportStatus::Fixed: return "fixed";
        case ReportStatus::Closed: return "closed";
        case ReportStatus::Other: return "other";
    }
    return "?";
}

const CorpusFile* Project::find_file(const std::string& path) const {
    for (const CorpusFile& f : files)
        if (f.path == path) return &f;
    return nullptr;
}

const GroundTruthFault* Project::find_fault(const std::string& fault_id) const {
    for (const GroundTruthFault& f : faults)
        if (f.fault_id == fault_id) return &f;
    return nullptr;
}

const BugReport* Project::find_report(const std::string& report_id) const {
    for (const BugReport& r : reports)
        if (r.id == report_id) return &r;
    return nullptr;
}

const StatementInfo* Project::find_statement(const StatementRef& ref) const {
    const CorpusFile* f = find_file(ref.file_path);
    if (!f) return nullptr;
    if (ref.index < 0 || static_cast<std::size_t>(ref.index) >= f->statements.size())
        return nullptr;
    return &f->statements[static_cast<std::size_t>(ref.index)];
}

std::string Project::statement_text(const StatementRef& ref) const {
    const StatementInfo* info = find_statement(ref);
    if (!info) return "";
    const CorpusFile* f = find_file(ref.file_path);
    return f->raw_text.substr(info->span.begin, info->span.end - info->span.begin);
}

std::vector<minij::SourceFile> Project::program() const {
    std::vector<minij::SourceFile> prog;
    prog.reserve(files.size());
    for (const CorpusFile& f : files) prog.push_back({f.path, f.ast});
    return prog;
}

std::vector<std::string> Project::test_names() const {
    std::vector<std::string> out;
    for (const CorpusFile& f : files) {
        if (!f.is_test) continue;
        for (const minij::Node& d : f.ast.children)
            if (d.kind == minij::NodeKind::FuncDecl && d.name.rfind("test_", 0) == 0)
                out.push_back(d.name);
    }
    return out;
}

const Project* Corpus::project_for_report(const std::string& report_id) const {
    for (const Project& p : projects)
        if (p.find_report(report_id)) return &p;
    return nullptr;
}

const BugReport* Corpus::find_report(const std::string& report_id) const {
    const Project* p = project_for_report(report_id);
    return p ? p->find_report(report_id) : nullptr;
}

Corpus load_corpus(const std::string& root) {
    fs::path base(root);
    if (!fs::exists(base)) throw MalformedReport("corpus root does not exist: " + root);
    Corpus corpus;
    if (fs::exists(base / "src")) {
        corpus.projects.push_back(load_project(base, "."));
    } else {
        std::vector<fs::path> subdirs;
        for (const auto& entry : fs::directory_iterator(base))
            if (entry.is_directory() && fs::exists(entry.path() / "src"))
                subdirs.push_back(entry.path());
        std::sort(subdirs.begin(), subdirs.end());
        for (const fs::path& p : subdirs)
            corpus.projects.push_back(load_project(p, p.filename().string()));
    }
    std::set<std::string> seen_reports;
    for (const Project& p : corpus.projects)
        for (const BugReport& r : p.reports)
            if (!seen_reports.insert(r.id).second)
                throw MalformedReport("report id " + r.id + " appears in more than one project");
    return corpus;
}

std::vector<const BugReport*> filter_reports(const Corpus& corpus,
                                             const std::vector<ReportStatus>& statuses) {
    std::vector<const BugReport*> out;
    for (const Project& p : corpus.projects)
        for (const BugReport& r : p.reports)
            for (ReportStatus s : statuses)
                if (r.status == s) {
                    out.push_back(&r);
                    break;
                }
    std::sort(out.begin(), out.end(),
              [](const BugReport* a, const BugReport* b) { return a->id < b->id; });
    return out;
}

}  // namespace ibir
