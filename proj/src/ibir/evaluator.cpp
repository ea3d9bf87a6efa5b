#include "ibir/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "ibir/errors.hpp"
#include "ibir/rng.hpp"
#include "ibir/stats.hpp"
#include "json.hpp"
#include "minij/interp.hpp"

namespace ibir {

std::vector<bool> KillMatrix::column(const std::string& subject_id) const {
    auto it = std::find(subjects.begin(), subjects.end(), subject_id);
    if (it == subjects.end()) throw std::out_of_range("unknown subject " + subject_id);
    std::size_t idx = static_cast<std::size_t>(it - subjects.begin());
    std::vector<bool> out;
    out.reserve(tests.size());
    for (const auto& row : detect) out.push_back(row[idx]);
    return out;
}

std::string KillMatrix::to_csv() const {
    std::string out = "test";
    for (const std::string& s : subjects) out += "," + s;
    out += "\n";
    for (std::size_t t = 0; t < tests.size(); ++t) {
        out += tests[t];
        for (std::size_t s = 0; s < subjects.size(); ++s)
            out += detect[t][s] ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

namespace {

const Project* project_of_fault(const Corpus& corpus, const GroundTruthFault& fault) {
    for (const Project& p : corpus.projects)
        if (p.find_fault(fault.fault_id)) return &p;
    throw std::invalid_argument("fault " + fault.fault_id + " is not in the corpus");
}

/// Runs the selected tests, translating interpreter-internal failures into
/// ExecutionError. Test failures (assert, runtime error, timeout) are
/// verdicts, not errors.
std::vector<minij::TestVerdict> run_guarded(const std::vector<minij::SourceFile>& program,
                                            const std::vector<std::string>& selection,
                                            long max_steps) {
    try {
        return minij::run_tests(program, selection, {max_steps});
    } catch (const std::exception& e) {
        throw ExecutionError(std::string("interpreter failure: ") + e.what());
    }
}

}  // namespace

KillMatrix build_kill_matrix(const Corpus& corpus, const std::vector<Mutant>& mutants,
                             const GroundTruthFault& fault, int budget,
                             const EvalConfig& config) {
    if (budget < 0) throw std::invalid_argument("budget must be non-negative");
    const Project& project = *project_of_fault(corpus, fault);
    const std::size_t n_mutants =
        std::min(mutants.size(), static_cast<std::size_t>(budget));
    for (std::size_t i = 0; i < n_mutants; ++i)
        if (mutants[i].project != project.name)
            throw std::invalid_argument("mutant " + mutants[i].mutant_id +
                                        " belongs to another project");

    std::vector<minij::SourceFile> original = project.program();
    std::vector<minij::TestVerdict> base = run_guarded(original, {}, config.max_steps);

    KillMatrix matrix;
    for (const minij::TestVerdict& v : base)
        if (v.outcome == minij::Outcome::Pass) matrix.tests.push_back(v.test_name);

    // One detection column per mutant; execution order does not matter, the
    // columns land at fixed positions.
    std::vector<std::vector<bool>> columns(n_mutants);
    auto run_mutant = [&](std::size_t m) {
        std::vector<minij::SourceFile> program;
        program.reserve(original.size());
        const std::string& mutated_path = mutants[m].application.statement.file_path;
        for (const minij::SourceFile& f : original)
            program.push_back({f.path, f.path == mutated_path ? mutants[m].mutated_ast : f.ast});
        std::vector<minij::TestVerdict> verdicts =
            run_guarded(program, matrix.tests, config.max_steps);
        std::vector<bool> col(matrix.tests.size(), false);
        for (std::size_t t = 0; t < verdicts.size(); ++t)
            col[t] = verdicts[t].outcome != minij::Outcome::Pass;
        columns[m] = std::move(col);
    };
    if (config.jobs <= 1 || n_mutants <= 1) {
        for (std::size_t m = 0; m < n_mutants; ++m) run_mutant(m);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        int jobs = std::min<int>(config.jobs, static_cast<int>(n_mutants));
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t m = cursor.fetch_add(1); m < n_mutants;
                     m = cursor.fetch_add(1)) {
                    try {
                        run_mutant(m);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        for (auto& t : workers) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    std::set<std::string> failing(fault.failing_tests.begin(), fault.failing_tests.end());
    matrix.detect.assign(matrix.tests.size(), {});
    for (std::size_t t = 0; t < matrix.tests.size(); ++t) {
        auto& row = matrix.detect[t];
        row.reserve(n_mutants + 1);
        for (std::size_t m = 0; m < n_mutants; ++m) row.push_back(columns[m][t]);
        row.push_back(failing.count(matrix.tests[t]) > 0);
    }
    for (std::size_t m = 0; m < n_mutants; ++m)
        matrix.subjects.push_back(mutants[m].mutant_id);
    matrix.subjects.push_back(fault.fault_id);
    return matrix;
}

std::vector<SuiteSample> sample_suites(const KillMatrix& matrix, const GroundTruthFault& fault,
                                       int n_samples, double band_lo, double band_hi,
                                       std::uint64_t seed) {
    if (!(band_lo > 0.0 && band_lo <= band_hi && band_hi < 1.0))
        throw std::invalid_argument("sampling band must satisfy 0 < lo <= hi < 1");
    const std::size_t total = matrix.tests.size();
    const auto lo = static_cast<long>(std::ceil(band_lo * static_cast<double>(total)));
    const auto hi = static_cast<long>(std::floor(band_hi * static_cast<double>(total)));
    if (lo > hi || hi < 1)
        throw BandEmpty("no integer suite size in [" + std::to_string(band_lo) + ", " +
                        std::to_string(band_hi) + "] of " + std::to_string(total) + " tests");

    std::set<std::string> failing(fault.failing_tests.begin(), fault.failing_tests.end());
    const std::size_t n_mutants = matrix.subjects.empty() ? 0 : matrix.subjects.size() - 1;

    Rng rng(seed);
    std::vector<SuiteSample> samples;
    for (int s = 0; s < n_samples; ++s) {
        SuiteSample sample;
        sample.sample_id = s + 1;
        std::size_t size =
            static_cast<std::size_t>(lo) + rng.index(static_cast<std::size_t>(hi - lo) + 1);
        std::vector<std::size_t> picks = rng.sample_indices(total, size);
        std::vector<bool> in_suite(total, false);
        for (std::size_t idx : picks) {
            sample.test_subset.push_back(matrix.tests[idx]);
            in_suite[idx] = true;
            if (failing.count(matrix.tests[idx])) sample.detects_fault = true;
        }
        if (n_mutants > 0) {
            std::size_t killed = 0;
            for (std::size_t m = 0; m < n_mutants; ++m) {
                for (std::size_t t = 0; t < total; ++t)
                    if (in_suite[t] && matrix.detect[t][m]) {
                        ++killed;
                        break;
                    }
            }
            sample.detection_ratio =
                static_cast<double>(killed) / static_cast<double>(n_mutants);
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

namespace {

MaybeStat guard_stat(const std::function<double()>& compute) {
    MaybeStat s;
    try {
        s.value = compute();
        s.defined = true;
    } catch (const DegenerateInput&) {
    } catch (const EmptyGroup&) {
    }
    return s;
}

SourceBudgetMetrics evaluate_cell(const Corpus& corpus, const GroundTruthFault& fault,
                                  const std::vector<Mutant>& mutants, int budget,
                                  const std::string& source_name, const EvalConfig& config) {
    SourceBudgetMetrics cell;
    cell.budget = budget;
    KillMatrix matrix = build_kill_matrix(corpus, mutants, fault, budget, config);
    std::vector<bool> fault_col = matrix.column(fault.fault_id);

    for (std::size_t m = 0; m + 1 < matrix.subjects.size(); ++m) {
        MutantEval eval;
        eval.mutant_id = matrix.subjects[m];
        std::vector<bool> col = matrix.column(eval.mutant_id);
        eval.killed = std::find(col.begin(), col.end(), true) != col.end();
        eval.ochiai = ochiai(col, fault_col);
        eval.coupled = is_coupled(col, fault_col);
        cell.best_ochiai = std::max(cell.best_ochiai, eval.ochiai);
        cell.any_coupled = cell.any_coupled || eval.coupled;
        cell.mutants.push_back(std::move(eval));
    }

    cell.suites = sample_suites(matrix, fault, config.n_samples, config.band_lo, config.band_hi,
                                derive_seed(config.seed, "suites/" + fault.fault_id + "/" +
                                                            source_name + "/" +
                                                            std::to_string(budget)));

    std::vector<double> ratios, detects, detecting, non_detecting;
    for (const SuiteSample& s : cell.suites) {
        ratios.push_back(s.detection_ratio);
        detects.push_back(s.detects_fault ? 1.0 : 0.0);
        (s.detects_fault ? detecting : non_detecting).push_back(s.detection_ratio);
    }
    cell.kendall = guard_stat([&] { return kendall_tau_b(ratios, detects); });
    cell.pearson = guard_stat([&] { return pearson_r(ratios, detects); });
    cell.rank_sum_p = guard_stat([&] {
        return wilcoxon(detecting, non_detecting, WilcoxonMode::RankSum, config.exact_limit);
    });
    cell.a12 = guard_stat([&] { return vargha_delaney_a12(detecting, non_detecting); });
    cell.matrix = std::move(matrix);
    return cell;
}

}  // namespace

std::map<std::string, std::map<int, SourceBudgetMetrics>> evaluate_target(
    const Corpus& corpus, const GroundTruthFault& fault,
    const std::map<std::string, std::vector<Mutant>>& mutants_by_source,
    const std::vector<int>& budgets, const EvalConfig& config) {
    std::map<std::string, std::map<int, SourceBudgetMetrics>> out;
    for (const auto& [source, mutants] : mutants_by_source)
        for (int budget : budgets) {
            if (budget < 1) throw std::invalid_argument("budgets must be positive");
            out[source][budget] =
                evaluate_cell(corpus, fault, mutants, budget, source, config);
        }
    return out;
}

// ---------------------------------------------------------------------------
// report serialization
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json stat_to_json(const MaybeStat& s) {
    if (!s.defined) return {{"defined", false}};
    return {{"defined", true}, {"value", s.value}};
}

MaybeStat stat_from_json(const json& j) {
    MaybeStat s;
    s.defined = j.at("defined").get<bool>();
    if (s.defined) s.value = j.at("value").get<double>();
    return s;
}

json cell_to_json(const SourceBudgetMetrics& cell) {
    json mutants = json::array();
    for (const MutantEval& m : cell.mutants)
        mutants.push_back({{"mutant_id", m.mutant_id},
                           {"ochiai", m.ochiai},
                           {"killed", m.killed},
                           {"coupled", m.coupled}});
    json suites = json::array();
    for (const SuiteSample& s : cell.suites)
        suites.push_back({{"sample_id", s.sample_id},
                          {"tests", s.test_subset},
                          {"detects_fault", s.detects_fault},
                          {"detection_ratio", s.detection_ratio}});
    return {{"budget", cell.budget},
            {"mutants", mutants},
            {"best_ochiai", cell.best_ochiai},
            {"any_coupled", cell.any_coupled},
            {"kendall", stat_to_json(cell.kendall)},
            {"pearson", stat_to_json(cell.pearson)},
            {"rank_sum_p", stat_to_json(cell.rank_sum_p)},
            {"a12", stat_to_json(cell.a12)},
            {"suites", suites}};
}

SourceBudgetMetrics cell_from_json(const json& j) {
    SourceBudgetMetrics cell;
    cell.budget = j.at("budget").get<int>();
    for (const json& m : j.at("mutants")) {
        MutantEval eval;
        eval.mutant_id = m.at("mutant_id").get<std::string>();
        eval.ochiai = m.at("ochiai").get<double>();
        eval.killed = m.at("killed").get<bool>();
        eval.coupled = m.at("coupled").get<bool>();
        cell.mutants.push_back(std::move(eval));
    }
    cell.best_ochiai = j.at("best_ochiai").get<double>();
    cell.any_coupled = j.at("any_coupled").get<bool>();
    cell.kendall = stat_from_json(j.at("kendall"));
    cell.pearson = stat_from_json(j.at("pearson"));
    cell.rank_sum_p = stat_from_json(j.at("rank_sum_p"));
    cell.a12 = stat_from_json(j.at("a12"));
    for (const json& s : j.at("suites")) {
        SuiteSample sample;
        sample.sample_id = s.at("sample_id").get<int>();
        sample.test_subset = s.at("tests").get<std::vector<std::string>>();
        sample.detects_fault = s.at("detects_fault").get<bool>();
        sample.detection_ratio = s.at("detection_ratio").get<double>();
        cell.suites.push_back(std::move(sample));
    }
    return cell;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
    json j;
    // jobs is deliberately absent: output must not depend on worker count.
    j["config"] = {{"n_samples", report.config.n_samples},
                   {"band_lo", report.config.band_lo},
                   {"band_hi", report.config.band_hi},
                   {"seed", report.config.seed},
                   {"max_steps", report.config.max_steps},
                   {"exact_limit", report.config.exact_limit}};
    json targets = json::object();
    for (const auto& [fault_id, sources] : report.targets) {
        json by_source = json::object();
        for (const auto& [source, budgets] : sources) {
            json by_budget = json::object();
            for (const auto& [budget, cell] : budgets)
                by_budget[std::to_string(budget)] = cell_to_json(cell);
            by_source[source] = std::move(by_budget);
        }
        targets[fault_id] = std::move(by_source);
    }
    j["targets"] = std::move(targets);
    return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaMismatch(std::string("report is not valid JSON: ") + e.what());
    }
    EvaluationReport report;
    try {
        const json& c = j.at("config");
        report.config.n_samples = c.at("n_samples").get<int>();
        report.config.band_lo = c.at("band_lo").get<double>();
        report.config.band_hi = c.at("band_hi").get<double>();
        report.config.seed = c.at("seed").get<std::uint64_t>();
        report.config.max_steps = c.at("max_steps").get<long>();
        report.config.exact_limit = c.at("exact_limit").get<int>();
        for (const auto& [fault_id, sources] : j.at("targets").items())
            for (const auto& [source, budgets] : sources.items())
                for (const auto& [budget, cell] : budgets.items())
                    report.targets[fault_id][source][std::stoi(budget)] = cell_from_json(cell);
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("report schema violated: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw SchemaMismatch("report budget keys must be integers");
    }
    return report;
}

}  // namespace ibir
