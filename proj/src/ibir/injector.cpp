#include "ibir/injector.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "ibir/diff.hpp"
#include "ibir/errors.hpp"
#include "ibir/irloc.hpp"
#include "ibir/rng.hpp"
#include "json.hpp"
#include "minij/errors.hpp"
#include "minij/printer.hpp"
#include "minij/typecheck.hpp"

namespace ibir {

const char* mutant_source_name(MutantSource s) {
    return s == MutantSource::Ibir ? "ibir" : "baseline";
}

std::vector<PatternInfo> baseline_catalog() {
    static const std::set<std::string> classical = {
        "remove_statement", "op_arithmetic", "op_assignment", "op_relational",
        "op_conditional",   "op_bitwise_shift", "op_unary",
    };
    std::vector<PatternInfo> rows;
    for (const PatternInfo& p : default_catalog())
        if (classical.count(p.id)) rows.push_back(p);
    return rows;
}

namespace {

struct Candidate {
    const Project* project = nullptr;
    int stmt_rank = 0;  // localization rank (report-guided mode only)
    PatternApplication app;
};

struct Outcome {
    bool viable = false;
    minij::Node mutated;
    std::string diff;
};

// Applies one candidate and typechecks the whole project with the mutated
// file substituted. Everything here works on copies, so it is safe to run
// concurrently for distinct candidates.
Outcome evaluate_candidate(const Candidate& c) {
    Outcome out;
    const CorpusFile* file = c.project->find_file(c.app.statement.file_path);
    if (!file) return out;
    minij::Node mutated;
    try {
        mutated = apply_pattern(file->ast, c.app);
    } catch (const NoOpMutant&) {
        return out;
    }
    std::vector<minij::SourceFile> program;
    for (const CorpusFile& f : c.project->files)
        program.push_back({f.path, f.path == file->path ? mutated : f.ast});
    try {
        minij::typecheck_program(program);
    } catch (const minij::TypeError&) {
        return out;  // stillborn
    }
    out.diff = unified_diff(minij::unparse(file->ast), minij::unparse(mutated),
                            "a/" + file->path, "b/" + file->path);
    if (out.diff.empty()) return out;  // noop (apply_pattern should have caught it)
    out.mutated = std::move(mutated);
    out.viable = true;
    return out;
}

// Walks candidates in order, evaluating them with `jobs` workers but emitting
// strictly in candidate order. `emit` returns true when the mutant was kept
// (it may reject duplicates); draining stops after `want` keeps.
void drain_candidates(const std::vector<Candidate>& candidates, int jobs, int want,
                      const std::function<bool(const Candidate&, Outcome&&)>& emit) {
    int kept = 0;
    if (jobs <= 1) {
        for (const Candidate& c : candidates) {
            if (kept >= want) return;
            Outcome out = evaluate_candidate(c);
            if (out.viable && emit(c, std::move(out))) ++kept;
        }
        return;
    }
    const std::size_t block = static_cast<std::size_t>(jobs) * 8;
    for (std::size_t base = 0; base < candidates.size() && kept < want; base += block) {
        std::size_t end = std::min(candidates.size(), base + block);
        std::vector<Outcome> outcomes(end - base);
        std::atomic<std::size_t> cursor{base};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = cursor.fetch_add(1); i < end; i = cursor.fetch_add(1))
                    outcomes[i - base] = evaluate_candidate(candidates[i]);
            });
        for (auto& t : workers) t.join();
        for (std::size_t i = base; i < end && kept < want; ++i)
            if (outcomes[i - base].viable &&
                emit(candidates[i], std::move(outcomes[i - base])))
                ++kept;
    }
}

bool in_scope(const std::vector<std::string>& scope, const std::string& path) {
    return scope.empty() || std::find(scope.begin(), scope.end(), path) != scope.end();
}

std::vector<Mutant> collect(const std::vector<Candidate>& candidates,
                            const InjectionConfig& config, MutantSource source) {
    std::vector<Mutant> mutants;
    std::set<std::string> seen_diffs;
    drain_candidates(candidates, config.jobs, config.n_faults,
                     [&](const Candidate& c, Outcome&& out) {
                         if (!seen_diffs.insert(out.diff).second) return false;
                         Mutant m;
                         m.source = source;
                         m.project = c.project->name;
                         m.application = c.app;
                         m.rank = static_cast<int>(mutants.size()) + 1;
                         m.mutant_id = std::string(mutant_source_name(source)) + "-" +
                                       std::to_string(config.seed) + "-" +
                                       std::to_string(m.rank);
                         m.mutated_ast = std::move(out.mutated);
                         m.diff = std::move(out.diff);
                         m.status = MutantStatus::Viable;
                         mutants.push_back(std::move(m));
                         return true;
                     });
    if (mutants.empty()) throw NoViableMutants("no candidate produced a viable mutant");
    return mutants;
}

}  // namespace

std::vector<Mutant> inject(const Corpus& corpus, const BugReport& report,
                           const InjectionConfig& config) {
    if (config.n_faults < 1 || config.top_files < 1 || config.top_statements < 1)
        throw std::invalid_argument("injection cutoffs must be positive");
    const Project* project = corpus.project_for_report(report.id);
    if (!project) throw std::invalid_argument("report " + report.id + " is not in the corpus");

    Query query = make_query(report);
    Index file_index = build_index(*project, Granularity::File);
    Index stmt_index = build_index(*project, Granularity::Statement);
    std::vector<FileScore> files = rank_files(file_index, query, config.top_files);
    std::vector<RankedLocation> locations =
        rank_statements(stmt_index, query, files, config.top_statements);

    std::vector<Candidate> candidates;
    for (const RankedLocation& loc : locations) {
        std::vector<PatternApplication> apps =
            match_patterns(*project, loc.statement, config.catalog);
        // Within one statement the walk is priority-major (the match order is
        // BFS-major, which serves exploration, not application).
        std::stable_sort(apps.begin(), apps.end(),
                         [](const PatternApplication& a, const PatternApplication& b) {
                             return std::tuple(a.priority, a.bfs_index, a.donor_index) <
                                    std::tuple(b.priority, b.bfs_index, b.donor_index);
                         });
        for (PatternApplication& app : apps) {
            if (!in_scope(config.scope, app.statement.file_path)) continue;
            candidates.push_back({project, loc.rank, std::move(app)});
        }
    }
    return collect(candidates, config, MutantSource::Ibir);
}

std::vector<Mutant> inject_baseline(const Corpus& corpus, const InjectionConfig& config) {
    if (config.n_faults < 1) throw std::invalid_argument("n_faults must be positive");
    std::vector<PatternInfo> catalog = baseline_catalog();
    std::vector<Candidate> pool;
    for (const Project& project : corpus.projects)
        for (const CorpusFile& file : project.files) {
            if (file.is_test || !in_scope(config.scope, file.path)) continue;
            for (const StatementInfo& s : file.statements)
                for (PatternApplication& app : match_patterns(project, s.ref, catalog))
                    pool.push_back({&project, 0, std::move(app)});
        }
    if (pool.empty()) throw NoViableMutants("baseline pool is empty");

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, "baseline"));
    rng.shuffle(order);
    std::vector<Candidate> drawn;
    drawn.reserve(pool.size());
    for (std::size_t i : order) drawn.push_back(std::move(pool[i]));
    return collect(drawn, config, MutantSource::Baseline);
}

void write_mutants(const std::string& out_dir, const std::vector<Mutant>& mutants) {
    namespace fs = std::filesystem;
    for (const Mutant& m : mutants) {
        fs::path dir = fs::path(out_dir) / m.mutant_id;
        fs::path target = dir / m.application.statement.file_path;
        fs::create_directories(target.parent_path());

        std::ofstream(target) << minij::unparse(m.mutated_ast);
        std::ofstream(dir / "diff.patch") << m.diff;

        nlohmann::json meta;
        meta["mutant_id"] = m.mutant_id;
        meta["source"] = mutant_source_name(m.source);
        meta["statement"] = {{"path", m.application.statement.file_path},
                             {"index", m.application.statement.index}};
        meta["pattern_id"] = m.application.pattern_id;
        meta["rank"] = m.rank;
        meta["donor"] = {{"kind", m.application.donor.kind},
                         {"text", m.application.donor.text},
                         {"aux", m.application.donor.aux}};
        std::ofstream(dir / "meta.json") << meta.dump(2) << "\n";
    }
}

}  // namespace ibir
