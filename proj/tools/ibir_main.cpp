// Command-line driver: localize / inject / evaluate / report.
//
// Exit codes: 0 success, 1 pipeline or data error, 2 usage error. With a
// fixed --seed every command is byte-reproducible (stdout and files), and
// output never depends on --jobs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ibir/corpus.hpp"
#include "ibir/errors.hpp"
#include "ibir/evaluator.hpp"
#include "ibir/injector.hpp"
#include "ibir/irloc.hpp"
#include "ibir/patterns.hpp"
#include "ibir/report.hpp"
#include "minij/parser.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Bad invocation or bad config file -> exit 2 (vs. 1 for pipeline errors).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

long long parse_integer(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config: " + what + " expects an integer, got '" + text + "'");
    }
}

double parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config: " + what + " expects a number, got '" + text + "'");
    }
}

void validate_budgets(const std::vector<int>& budgets, const std::string& origin) {
    if (budgets.empty()) throw UsageError(origin + ": budgets must not be empty");
    int prev = 0;
    for (int b : budgets) {
        if (b <= prev)
            throw UsageError(origin + ": budgets must be strictly increasing positive integers");
        prev = b;
    }
}

void validate_band(double lo, double hi, const std::string& origin) {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
        throw UsageError(origin + ": sample band must satisfy 0 <= lo <= hi <= 1");
}

/// Experiment defaults shared by all subcommands; explicit flags win.
struct ExperimentConfig {
    std::string corpus_root;
    std::vector<int> budgets{5, 10, 30, 100};
    int n_suite_samples = 50;
    double band_lo = 0.10;
    double band_hi = 0.30;
    std::uint64_t seed = 0;
    std::string scope_mode = "project";
};

/// Plain key=value lines; '#' starts a comment. Lists are comma-separated.
ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot read " + path);
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: line " + std::to_string(line_no) +
                             " is not a key = value pair");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "corpus_root") {
            cfg.corpus_root = value;
        } else if (key == "budgets") {
            cfg.budgets.clear();
            for (const std::string& part : split(value, ','))
                cfg.budgets.push_back(static_cast<int>(parse_integer(part, "budgets")));
            validate_budgets(cfg.budgets, "config");
        } else if (key == "n_suite_samples") {
            long long v = parse_integer(value, "n_suite_samples");
            if (v < 1) throw UsageError("config: n_suite_samples must be positive");
            cfg.n_suite_samples = static_cast<int>(v);
        } else if (key == "sample_band") {
            std::string bare = value;
            std::erase(bare, '(');
            std::erase(bare, ')');
            std::vector<std::string> parts = split(bare, ',');
            if (parts.size() != 2)
                throw UsageError("config: sample_band expects two numbers, got '" + value + "'");
            cfg.band_lo = parse_real(parts[0], "sample_band");
            cfg.band_hi = parse_real(parts[1], "sample_band");
            validate_band(cfg.band_lo, cfg.band_hi, "config");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_integer(value, "seed"));
        } else if (key == "scope_mode") {
            if (value != "project" && value != "target_file")
                throw UsageError("config: scope_mode must be 'project' or 'target_file', got '" +
                                 value + "'");
            cfg.scope_mode = value;
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

/// Flags common to every subcommand plus the resolved config-file defaults.
struct Shared {
    std::string corpus;
    std::string config_file;
    std::uint64_t seed = 0;
    int jobs = 1;
    CLI::Option* corpus_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    ExperimentConfig cfg;

    void add_to(CLI::App* cmd) {
        corpus_opt = cmd->add_option("--corpus", corpus, "Corpus root directory");
        cmd->add_option("--config", config_file,
                        "Key=value experiment config file (flags override it)");
        seed_opt = cmd->add_option("--seed", seed, "Root random seed (default 0)");
        cmd->add_option("--jobs", jobs, "Worker threads (output is jobs-independent)")
            ->check(CLI::Range(1, 1000000000));
    }

    /// Fills in unset flags from the config file. Call before using fields.
    void resolve() {
        if (!config_file.empty()) cfg = load_experiment_config(config_file);
        if (corpus_opt->count() == 0 && !cfg.corpus_root.empty()) corpus = cfg.corpus_root;
        if (seed_opt->count() == 0) seed = cfg.seed;
    }

    const std::string& require_corpus() const {
        if (corpus.empty())
            throw UsageError("--corpus is required (flag or corpus_root in --config)");
        return corpus;
    }
};

// ---------------------------------------------------------------------------
// localize

int run_localize(Shared& shared, const std::string& report_id, int top, int top_files) {
    shared.resolve();
    ibir::Corpus corpus = ibir::load_corpus(shared.require_corpus());
    const ibir::BugReport* report = corpus.find_report(report_id);
    if (!report) throw std::runtime_error("report '" + report_id + "' not found in corpus");
    const ibir::Project* project = corpus.project_for_report(report_id);

    ibir::Query query = ibir::make_query(*report);
    ibir::Index file_index = ibir::build_index(*project, ibir::Granularity::File);
    ibir::Index stmt_index = ibir::build_index(*project, ibir::Granularity::Statement);
    std::vector<ibir::FileScore> files = ibir::rank_files(file_index, query, top_files);
    std::vector<ibir::RankedLocation> locations =
        ibir::rank_statements(stmt_index, query, files, top);
    std::cout << ibir::localize_csv(locations);
    return 0;
}

// ---------------------------------------------------------------------------
// inject

int run_inject(Shared& shared, const std::string& report_id, bool baseline, int n,
               const std::string& out_dir, const std::vector<std::string>& scope_files,
               const std::string& patterns_file, int top_files, int top_statements) {
    shared.resolve();
    if (baseline && !report_id.empty())
        throw UsageError("--report and --baseline are mutually exclusive");
    if (!baseline && report_id.empty())
        throw UsageError("one of --report or --baseline is required");

    ibir::Corpus corpus = ibir::load_corpus(shared.require_corpus());

    ibir::InjectionConfig config;
    config.n_faults = n;
    config.top_files = top_files;
    config.top_statements = top_statements;
    config.seed = shared.seed;
    config.jobs = shared.jobs;
    config.scope = scope_files;
    if (!patterns_file.empty()) config.catalog = ibir::load_catalog(patterns_file);

    std::vector<ibir::Mutant> mutants;
    if (baseline) {
        mutants = ibir::inject_baseline(corpus, config);
    } else {
        const ibir::BugReport* report = corpus.find_report(report_id);
        if (!report) throw std::runtime_error("report '" + report_id + "' not found in corpus");
        if (shared.cfg.scope_mode == "target_file" && config.scope.empty()) {
            if (!report->linked_fault_id)
                throw std::runtime_error("scope_mode=target_file needs a report with a linked "
                                         "fault to derive target files");
            const ibir::Project* project = corpus.project_for_report(report_id);
            const ibir::GroundTruthFault* fault = project->find_fault(*report->linked_fault_id);
            for (const ibir::StatementRef& ref : fault->fixed_statements)
                if (std::find(config.scope.begin(), config.scope.end(), ref.file_path) ==
                    config.scope.end())
                    config.scope.push_back(ref.file_path);
        }
        mutants = ibir::inject(corpus, *report, config);
    }

    ibir::write_mutants(out_dir, mutants);

    json manifest;
    manifest["source"] = baseline ? "baseline" : "ibir";
    manifest["seed"] = shared.seed;
    manifest["requested"] = n;
    manifest["emitted"] = mutants.size();
    if (baseline)
        manifest["report_id"] = nullptr;
    else
        manifest["report_id"] = report_id;
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "run.json") << manifest.dump(2) << "\n";

    std::cout << "emitted=" << mutants.size() << " requested=" << n << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

ibir::MutantSource source_from_name(const std::string& name) {
    if (name == "ibir") return ibir::MutantSource::Ibir;
    if (name == "baseline") return ibir::MutantSource::Baseline;
    throw std::runtime_error("unknown mutant source '" + name + "' in meta.json");
}

/// Rehydrates the mutants under one ROOT/{fault}/{source} directory.
/// `requested` reports the run.json budget (mutant count when absent).
std::vector<ibir::Mutant> load_mutant_set(const fs::path& source_dir,
                                          const ibir::Project& project, int* requested) {
    std::vector<ibir::Mutant> mutants;
    std::vector<fs::path> entries;
    for (const fs::directory_entry& entry : fs::directory_iterator(source_dir))
        if (entry.is_directory()) entries.push_back(entry.path());
    std::sort(entries.begin(), entries.end());

    for (const fs::path& dir : entries) {
        fs::path meta_path = dir / "meta.json";
        if (!fs::exists(meta_path))
            throw std::runtime_error("missing meta.json under " + dir.string());
        std::ifstream meta_in(meta_path);
        json meta;
        try {
            meta = json::parse(meta_in);
        } catch (const json::exception& e) {
            throw std::runtime_error("corrupted meta.json under " + dir.string() + ": " +
                                     e.what());
        }

        ibir::Mutant m;
        try {
            m.mutant_id = meta.at("mutant_id").get<std::string>();
            m.source = source_from_name(meta.at("source").get<std::string>());
            m.application.pattern_id = meta.at("pattern_id").get<std::string>();
            m.application.statement.file_path = meta.at("statement").at("path").get<std::string>();
            m.application.statement.index = meta.at("statement").at("index").get<int>();
            m.rank = meta.at("rank").get<int>();
            m.application.donor.kind = meta.at("donor").at("kind").get<std::string>();
            m.application.donor.text = meta.at("donor").at("text").get<std::string>();
            m.application.donor.aux = meta.at("donor").at("aux").get<int>();
        } catch (const json::exception& e) {
            throw std::runtime_error("corrupted meta.json under " + dir.string() + ": " +
                                     e.what());
        }
        m.project = project.name;

        fs::path mutated = dir / m.application.statement.file_path;
        if (!fs::exists(mutated))
            throw std::runtime_error("mutant " + m.mutant_id + ": mutated file " +
                                     m.application.statement.file_path + " is missing");
        std::ifstream src(mutated);
        std::stringstream text;
        text << src.rdbuf();
        m.mutated_ast = minij::parse(text.str(), m.application.statement.file_path);

        fs::path diff_path = dir / "diff.patch";
        if (fs::exists(diff_path)) {
            std::ifstream diff_in(diff_path);
            std::stringstream diff_text;
            diff_text << diff_in.rdbuf();
            m.diff = diff_text.str();
        }
        mutants.push_back(std::move(m));
    }

    std::sort(mutants.begin(), mutants.end(), [](const ibir::Mutant& a, const ibir::Mutant& b) {
        return std::pair(a.rank, a.mutant_id) < std::pair(b.rank, b.mutant_id);
    });

    *requested = static_cast<int>(mutants.size());
    fs::path manifest_path = source_dir / "run.json";
    if (fs::exists(manifest_path)) {
        std::ifstream manifest_in(manifest_path);
        try {
            json manifest = json::parse(manifest_in);
            *requested = manifest.value("requested", *requested);
        } catch (const json::exception& e) {
            throw std::runtime_error("corrupted run.json under " + source_dir.string() + ": " +
                                     e.what());
        }
    }
    return mutants;
}

int run_evaluate(Shared& shared, const std::string& mutants_root, const std::string& out_json,
                 std::vector<int> budgets, CLI::Option* budgets_opt, int n_samples,
                 CLI::Option* n_samples_opt, const std::vector<double>& band,
                 const std::string& emit_matrix_dir, int exact_limit, long max_steps) {
    shared.resolve();
    ibir::Corpus corpus = ibir::load_corpus(shared.require_corpus());

    if (budgets_opt->count() == 0) budgets = shared.cfg.budgets;
    validate_budgets(budgets, "--budgets");

    ibir::EvalConfig config;
    config.n_samples = n_samples_opt->count() ? n_samples : shared.cfg.n_suite_samples;
    if (config.n_samples < 1) throw UsageError("--n-samples must be positive");
    if (band.empty()) {
        config.band_lo = shared.cfg.band_lo;
        config.band_hi = shared.cfg.band_hi;
    } else {
        config.band_lo = band[0];
        config.band_hi = band[1];
    }
    validate_band(config.band_lo, config.band_hi, "--band");
    config.seed = shared.seed;
    config.jobs = shared.jobs;
    config.exact_limit = exact_limit;
    config.max_steps = max_steps;

    fs::path root(mutants_root);
    if (!fs::is_directory(root))
        throw std::runtime_error("mutant root " + mutants_root + " is not a directory");

    // Corpus-wide fault lookup; directory names must match fault ids.
    std::map<std::string, std::pair<const ibir::Project*, const ibir::GroundTruthFault*>> faults;
    for (const ibir::Project& project : corpus.projects)
        for (const ibir::GroundTruthFault& fault : project.faults)
            if (!faults.emplace(fault.fault_id, std::pair{&project, &fault}).second)
                std::cerr << "warning: duplicate fault id " << fault.fault_id
                          << " across projects; keeping the first\n";

    std::vector<std::string> fault_dirs;
    for (const fs::directory_entry& entry : fs::directory_iterator(root))
        if (entry.is_directory()) fault_dirs.push_back(entry.path().filename().string());
    std::sort(fault_dirs.begin(), fault_dirs.end());

    ibir::EvaluationReport report;
    report.config = config;

    for (const std::string& fault_id : fault_dirs) {
        auto found = faults.find(fault_id);
        if (found == faults.end()) {
            std::cerr << "warning: directory " << fault_id
                      << " does not match any corpus fault; skipping\n";
            continue;
        }
        const ibir::Project& project = *found->second.first;
        const ibir::GroundTruthFault& fault = *found->second.second;

        std::vector<std::string> source_names;
        for (const fs::directory_entry& entry : fs::directory_iterator(root / fault_id))
            if (entry.is_directory()) source_names.push_back(entry.path().filename().string());
        std::sort(source_names.begin(), source_names.end());

        std::map<std::string, std::map<int, ibir::SourceBudgetMetrics>> cells;
        for (const std::string& source : source_names) {
            int requested = 0;
            std::vector<ibir::Mutant> mutants =
                load_mutant_set(root / fault_id / source, project, &requested);
            if (mutants.empty()) {
                std::cerr << "warning: no mutants under " << fault_id << "/" << source
                          << "; skipping\n";
                continue;
            }
            std::vector<int> usable;
            for (int b : budgets) {
                if (b <= requested)
                    usable.push_back(b);
                else
                    std::cerr << "warning: omitting budget " << b << " for " << fault_id << "/"
                              << source << " (only " << requested << " mutants requested)\n";
            }
            if (usable.empty()) continue;
            std::map<std::string, std::vector<ibir::Mutant>> one{{source, std::move(mutants)}};
            auto evaluated = ibir::evaluate_target(corpus, fault, one, usable, config);
            cells[source] = std::move(evaluated.at(source));
        }
        if (cells.empty()) {
            std::cerr << "warning: nothing evaluable for fault " << fault_id << "\n";
            continue;
        }
        report.targets[fault_id] = std::move(cells);
    }

    // Report faults that have no directory at all (informational only).
    for (const auto& [fault_id, owner] : faults) {
        (void)owner;
        if (std::find(fault_dirs.begin(), fault_dirs.end(), fault_id) == fault_dirs.end())
            std::cerr << "warning: no mutant directory for fault " << fault_id << "; skipping\n";
    }

    if (!emit_matrix_dir.empty()) {
        fs::create_directories(emit_matrix_dir);
        for (const auto& [fault_id, sources] : report.targets)
            for (const auto& [source, by_budget] : sources)
                for (const auto& [budget, cell] : by_budget) {
                    fs::path csv = fs::path(emit_matrix_dir) /
                                   (fault_id + "-" + source + "-" + std::to_string(budget) +
                                    ".csv");
                    std::ofstream(csv) << cell.matrix.to_csv();
                }
    }

    fs::path out_path(out_json);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    std::ofstream(out_path) << ibir::report_to_json(report);
    return 0;
}

// ---------------------------------------------------------------------------
// report

int run_report(Shared& shared, const std::string& input, const std::string& out_dir) {
    shared.resolve();
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot read report JSON " + input);
    std::stringstream text;
    text << in.rdbuf();
    ibir::EvaluationReport report = ibir::report_from_json(text.str());
    ibir::ReportBundle bundle = ibir::render_report(report);
    ibir::write_bundle(out_dir, bundle);
    std::cout << "figures=" << bundle.figures.size() << " out=" << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bug-report-driven fault injection and evaluation"};
    app.require_subcommand(1);

    // localize ------------------------------------------------------------
    CLI::App* loc = app.add_subcommand("localize", "Rank suspicious statements for a bug report");
    Shared loc_shared;
    loc_shared.add_to(loc);
    std::string loc_report;
    int loc_top = 50;
    int loc_top_files = 20;
    loc->add_option("--report", loc_report, "Bug report id")->required();
    loc->add_option("--top", loc_top, "Statements to list (default 50)")
        ->check(CLI::Range(1, 1000000000));
    loc->add_option("--top-files", loc_top_files, "File-ranking cutoff (default 20)")
        ->check(CLI::Range(1, 1000000000));

    // inject --------------------------------------------------------------
    CLI::App* inj = app.add_subcommand("inject", "Write a directory of injected faults");
    Shared inj_shared;
    inj_shared.add_to(inj);
    std::string inj_report;
    bool inj_baseline = false;
    int inj_n = 10;
    std::string inj_out = "mutants";
    std::vector<std::string> inj_scope;
    std::string inj_patterns;
    int inj_top_files = 20;
    int inj_top_statements = 50;
    inj->add_option("--report", inj_report, "Bug report id to drive injection");
    inj->add_flag("--baseline", inj_baseline, "Classical-mutation baseline instead of a report");
    inj->add_option("--n", inj_n, "Mutants to emit (default 10)")->check(CLI::Range(1, 1000000000));
    inj->add_option("--out", inj_out, "Output directory (default mutants)");
    inj->add_option("--scope-file", inj_scope, "Restrict mutants to this file (repeatable)");
    inj->add_option("--patterns", inj_patterns, "Pattern catalog override file")
        ->check(CLI::ExistingFile);
    inj->add_option("--top-files", inj_top_files, "File-ranking cutoff (default 20)")
        ->check(CLI::Range(1, 1000000000));
    inj->add_option("--top-statements", inj_top_statements,
                    "Statement-ranking cutoff (default 50)")
        ->check(CLI::Range(1, 1000000000));

    // evaluate ------------------------------------------------------------
    CLI::App* eval = app.add_subcommand("evaluate", "Run kill-matrix evaluation over mutants");
    Shared eval_shared;
    eval_shared.add_to(eval);
    std::string eval_mutants = "mutants";
    std::string eval_out = "report.json";
    std::vector<int> eval_budgets;
    int eval_n_samples = 50;
    std::vector<double> eval_band;
    std::string eval_matrix_dir;
    int eval_exact_limit = 12;
    long eval_max_steps = 1000000;
    eval->add_option("--mutants", eval_mutants,
                     "Mutant root laid out as ROOT/{fault}/{source}/{id} (default mutants)");
    eval->add_option("--out", eval_out, "Report JSON path (default report.json)");
    CLI::Option* eval_budgets_opt =
        eval->add_option("--budgets", eval_budgets, "Budgets, e.g. 5,10,30,100")->delimiter(',');
    CLI::Option* eval_n_samples_opt =
        eval->add_option("--n-samples", eval_n_samples, "Sampled suites per cell (default 50)");
    eval->add_option("--band", eval_band, "Suite-size band as two fractions, e.g. 0.1 0.3")
        ->expected(2);
    eval->add_option("--emit-matrix", eval_matrix_dir, "Also dump kill-matrix CSVs here");
    eval->add_option("--exact-limit", eval_exact_limit,
                     "Exact rank-test cutoff on combined group size (default 12)")
        ->check(CLI::Range(1, 1000000000));
    eval->add_option("--max-steps", eval_max_steps,
                     "Interpreter step budget per test (default 1000000)")
        ->check(CLI::Range(1, 1000000000));

    // report --------------------------------------------------------------
    CLI::App* rep = app.add_subcommand("report", "Render figures and a summary from report JSON");
    Shared rep_shared;
    rep_shared.add_to(rep);
    std::string rep_input = "report.json";
    std::string rep_out = "report-figures";
    rep->add_option("--input", rep_input, "Report JSON path (default report.json)");
    rep->add_option("--out", rep_out, "Figure directory (default report-figures)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (loc->parsed()) return run_localize(loc_shared, loc_report, loc_top, loc_top_files);
        if (inj->parsed())
            return run_inject(inj_shared, inj_report, inj_baseline, inj_n, inj_out, inj_scope,
                              inj_patterns, inj_top_files, inj_top_statements);
        if (eval->parsed())
            return run_evaluate(eval_shared, eval_mutants, eval_out, eval_budgets,
                                eval_budgets_opt, eval_n_samples, eval_n_samples_opt, eval_band,
                                eval_matrix_dir, eval_exact_limit, eval_max_steps);
        if (rep->parsed()) return run_report(rep_shared, rep_input, rep_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
