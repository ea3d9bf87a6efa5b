#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "ibir/corpus.hpp"
#include "ibir/errors.hpp"
#include "ibir/evaluator.hpp"
#include "ibir/injector.hpp"
#include "ibir/stats.hpp"
#include "minij/interp.hpp"
#include "minij/parser.hpp"
#include "minij/printer.hpp"
#include "support/temp_corpus.hpp"

using namespace ibir;

namespace {

// The recorded fix of F1 turned `amount - bonus` into `amount + bonus`, so
// the buggy version is reachable by one arithmetic-operator inversion.
void write_eval_project(TempCorpus& tc) {
    tc.write("src/calc.mj",
             "int add_amount(int amount, int bonus) {\n"
             "    int sum = amount + bonus;\n"
             "    return sum;\n"
             "}\n"
             "\n"
             "int clamp_total(int value, int limit) {\n"
             "    if (value > limit) {\n"
             "        return limit;\n"
             "    }\n"
             "    return value;\n"
             "}\n");
    tc.write("src/util.mj",
             "int scale_amount(int amount, int factor) {\n"
             "    return amount * factor;\n"
             "}\n");
    tc.write("tests/t.mj",
             "void test_add_amount() {\n"
             "    assert(add_amount(2, 3) == 5);\n"
             "}\n"
             "\n"
             "void test_add_amount_zero() {\n"
             "    assert(add_amount(4, 0) == 4);\n"
             "}\n"
             "\n"
             "void test_clamp_total() {\n"
             "    assert(clamp_total(9, 4) == 4);\n"
             "}\n"
             "\n"
             "void test_clamp_total_low() {\n"
             "    assert(clamp_total(2, 4) == 2);\n"
             "}\n"
             "\n"
             "void test_scale_amount() {\n"
             "    assert(scale_amount(3, 3) == 9);\n"
             "}\n");
    tc.write("bugreports/r1.json",
             R"({"id": "R1", "title": "add_amount drops the bonus from the sum",)"
             R"( "description": "calling add_amount ignores bonus so the sum is wrong",)"
             R"( "status": "fixed", "linked_fault_id": "F1"})");
    tc.write("faults/f1.json",
             R"({"fault_id": "F1", "bug_report_id": "R1",)"
             R"( "fixed_statements": [{"path": "src/calc.mj", "index": 0}],)"
             R"( "failing_tests": ["test_add_amount"]})");
}

// The application that rebuilds the historical bug: `+` -> `-` inside
// statement 0 of calc.mj.
Mutant make_inversion_mutant(const Project& p) {
    auto apps = match_patterns(p, {"src/calc.mj", 0}, default_catalog());
    const PatternApplication* hit = nullptr;
    for (const auto& a : apps)
        if (a.pattern_id == "op_arithmetic" && a.donor.text == "-") hit = &a;
    REQUIRE(hit != nullptr);
    Mutant m;
    m.mutant_id = "ibir-0-1";
    m.source = MutantSource::Ibir;
    m.project = p.name;
    m.application = *hit;
    m.rank = 1;
    m.mutated_ast = apply_pattern(p.find_file("src/calc.mj")->ast, *hit);
    return m;
}

}  // namespace

TEST_CASE("fault column equals the declared failing tests") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    const GroundTruthFault& fault = p.faults[0];

    KillMatrix matrix = build_kill_matrix(corpus, {}, fault, 0);
    CHECK(matrix.subjects == std::vector<std::string>{"F1"});
    REQUIRE(matrix.tests.size() == 5);  // every test passes on the original
    std::vector<bool> col = matrix.column("F1");
    for (std::size_t t = 0; t < matrix.tests.size(); ++t)
        CHECK(col[t] == (matrix.tests[t] == "test_add_amount"));
}

TEST_CASE("the declared failing set matches an actual run of the buggy version") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    Mutant buggy = make_inversion_mutant(p);

    std::vector<minij::SourceFile> program;
    for (const CorpusFile& f : p.files)
        program.push_back({f.path, f.path == "src/calc.mj" ? buggy.mutated_ast : f.ast});
    std::set<std::string> failed;
    for (const auto& v : minij::run_tests(program, {}))
        if (v.outcome != minij::Outcome::Pass) failed.insert(v.test_name);
    CHECK(failed == std::set<std::string>(p.faults[0].failing_tests.begin(),
                                          p.faults[0].failing_tests.end()));
}

TEST_CASE("the exact inverted-fix mutant's column equals the fault column") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    Mutant buggy = make_inversion_mutant(p);

    KillMatrix matrix = build_kill_matrix(corpus, {buggy}, p.faults[0], 1);
    CHECK(matrix.column("ibir-0-1") == matrix.column("F1"));
    CHECK(ochiai(matrix.column("ibir-0-1"), matrix.column("F1")) == doctest::Approx(1.0));
    CHECK(is_coupled(matrix.column("ibir-0-1"), matrix.column("F1")));
}

TEST_CASE("a subject identical to the original has an all-false column") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];

    Mutant same;
    same.mutant_id = "same";
    same.project = p.name;
    same.application.statement = {"src/calc.mj", 0};
    same.mutated_ast = p.find_file("src/calc.mj")->ast;
    KillMatrix matrix = build_kill_matrix(corpus, {same}, p.faults[0], 1);
    std::vector<bool> col = matrix.column("same");
    CHECK(std::find(col.begin(), col.end(), true) == col.end());
}

TEST_CASE("tests failing on the original are excluded from the matrix") {
    TempCorpus tc;
    write_eval_project(tc);
    tc.write("tests/broken.mj",
             "void test_always_fails() {\n"
             "    assert(false);\n"
             "}\n");
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    KillMatrix matrix = build_kill_matrix(corpus, {}, p.faults[0], 0);
    CHECK(matrix.tests.size() == 5);
    for (const std::string& t : matrix.tests) CHECK(t != "test_always_fails");
}

TEST_CASE("permuting the mutant list permutes columns identically") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig ic;
    ic.n_faults = 6;
    auto mutants = inject(corpus, *report, ic);
    REQUIRE(mutants.size() == 6);
    auto reversed = mutants;
    std::reverse(reversed.begin(), reversed.end());

    EvalConfig ec;
    KillMatrix a = build_kill_matrix(corpus, mutants, p.faults[0], 6, ec);
    KillMatrix b = build_kill_matrix(corpus, reversed, p.faults[0], 6, ec);
    CHECK(a.tests == b.tests);
    for (const Mutant& m : mutants) CHECK(a.column(m.mutant_id) == b.column(m.mutant_id));

    ec.jobs = 4;  // parallel execution must not change any cell
    KillMatrix c = build_kill_matrix(corpus, mutants, p.faults[0], 6, ec);
    CHECK(c.tests == a.tests);
    CHECK(c.subjects == a.subjects);
    CHECK(c.detect == a.detect);
}

TEST_CASE("interpreter-level failures surface as ExecutionError") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];

    // A "mutant" that replaces the test file with an empty program makes the
    // selected test names unresolvable — an internal failure, not a verdict.
    Mutant broken;
    broken.mutant_id = "broken";
    broken.project = p.name;
    broken.application.statement = {"tests/t.mj", 0};
    broken.mutated_ast = minij::parse("", "tests/t.mj");
    CHECK_THROWS_AS(build_kill_matrix(corpus, {broken}, p.faults[0], 1), ExecutionError);
}

TEST_CASE("kill matrix CSV layout") {
    KillMatrix m;
    m.tests = {"test_a", "test_b"};
    m.subjects = {"ibir-1-1", "F1"};
    m.detect = {{true, false}, {false, true}};
    CHECK(m.to_csv() ==
          "test,ibir-1-1,F1\n"
          "test_a,1,0\n"
          "test_b,0,1\n");
}

TEST_CASE("suite sizes respect the sampling band") {
    KillMatrix m;
    for (int i = 0; i < 40; ++i) m.tests.push_back("test_" + std::to_string(i));
    m.subjects = {"F1"};
    m.detect.assign(40, std::vector<bool>(1, false));
    GroundTruthFault fault;
    fault.fault_id = "F1";
    fault.failing_tests = {"test_7"};

    auto samples = sample_suites(m, fault, 50, 0.1, 0.3, 99);
    REQUIRE(samples.size() == 50);
    std::set<std::size_t> sizes_seen;
    for (const auto& s : samples) {
        CHECK(s.test_subset.size() >= 4);   // ceil(0.1 * 40)
        CHECK(s.test_subset.size() <= 12);  // floor(0.3 * 40)
        sizes_seen.insert(s.test_subset.size());
        std::set<std::string> unique(s.test_subset.begin(), s.test_subset.end());
        CHECK(unique.size() == s.test_subset.size());  // without replacement
        bool has_failing = unique.count("test_7") > 0;
        CHECK(s.detects_fault == has_failing);
    }
    CHECK(sizes_seen.size() > 1);  // the size itself is drawn, not fixed

    auto again = sample_suites(m, fault, 50, 0.1, 0.3, 99);
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(samples[i].test_subset == again[i].test_subset);

    CHECK_THROWS_AS(sample_suites(m, fault, 10, 0.001, 0.014, 1), BandEmpty);
}

TEST_CASE("detection ratios match a direct recount") {
    KillMatrix m;
    for (int i = 0; i < 20; ++i) m.tests.push_back("test_" + std::to_string(i));
    m.subjects = {"m1", "m2", "m3", "F1"};
    // m1 killed by even tests, m2 by tests 0-4, m3 by nothing.
    m.detect.assign(20, std::vector<bool>(4, false));
    for (int t = 0; t < 20; ++t) {
        if (t % 2 == 0) m.detect[t][0] = true;
        if (t < 5) m.detect[t][1] = true;
        if (t == 3) m.detect[t][3] = true;
    }
    GroundTruthFault fault;
    fault.fault_id = "F1";
    fault.failing_tests = {"test_3"};

    auto samples = sample_suites(m, fault, 80, 0.1, 0.3, 5);
    for (const auto& s : samples) {
        std::set<std::string> suite(s.test_subset.begin(), s.test_subset.end());
        int killed = 0;
        for (int mutant = 0; mutant < 3; ++mutant) {
            bool hit = false;
            for (int t = 0; t < 20; ++t)
                if (m.detect[t][mutant] && suite.count(m.tests[t])) hit = true;
            killed += hit;
        }
        CHECK(s.detection_ratio == doctest::Approx(killed / 3.0));
    }
}

TEST_CASE("evaluate_target composes matrices, suites, and statistics") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig ic;
    ic.n_faults = 10;
    ic.seed = 5;
    std::map<std::string, std::vector<Mutant>> by_source;
    by_source["ibir"] = inject(corpus, *report, ic);
    by_source["baseline"] = inject_baseline(corpus, ic);
    REQUIRE(by_source["ibir"].size() == 10);
    REQUIRE(!by_source["baseline"].empty());

    EvalConfig ec;
    ec.n_samples = 40;
    ec.seed = 77;
    auto result = evaluate_target(corpus, p.faults[0], by_source, {3, 10}, ec);
    REQUIRE(result.count("ibir"));
    REQUIRE(result.count("baseline"));

    for (const auto& [source, by_budget] : result)
        for (const auto& [budget, cell] : by_budget) {
            CHECK(cell.budget == budget);
            CHECK(cell.mutants.size() ==
                  std::min<std::size_t>(by_source[source].size(),
                                        static_cast<std::size_t>(budget)));
            double best = 0.0;
            bool any = false;
            for (const MutantEval& m : cell.mutants) {
                CHECK(m.ochiai >= 0.0);
                CHECK(m.ochiai <= 1.0);
                if (!m.killed) CHECK(m.ochiai == 0.0);
                if (m.coupled) CHECK(m.killed);
                best = std::max(best, m.ochiai);
                any = any || m.coupled;
            }
            CHECK(cell.best_ochiai == doctest::Approx(best));
            CHECK(cell.any_coupled == any);
            REQUIRE(cell.suites.size() == 40);

            // Cross-check each statistic against a direct recomputation.
            std::vector<double> ratios, detects, det, nondet;
            for (const SuiteSample& s : cell.suites) {
                ratios.push_back(s.detection_ratio);
                detects.push_back(s.detects_fault ? 1.0 : 0.0);
                (s.detects_fault ? det : nondet).push_back(s.detection_ratio);
            }
            if (cell.kendall.defined)
                CHECK(cell.kendall.value == doctest::Approx(kendall_tau_b(ratios, detects)));
            if (cell.pearson.defined)
                CHECK(cell.pearson.value == doctest::Approx(pearson_r(ratios, detects)));
            if (cell.a12.defined)
                CHECK(cell.a12.value == doctest::Approx(vargha_delaney_a12(det, nondet)));
            if (cell.rank_sum_p.defined)
                CHECK(cell.rank_sum_p.value ==
                      doctest::Approx(wilcoxon(det, nondet, WilcoxonMode::RankSum)));
            bool suites_disagree =
                !det.empty() && !nondet.empty();
            CHECK(cell.a12.defined == suites_disagree);
        }

    // The inverted-fix mutant is reachable at budget 10, so the target couples.
    CHECK(result["ibir"][10].any_coupled);
}

TEST_CASE("correlations are undefined when every suite detects the fault") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    Project& p = corpus.projects[0];

    GroundTruthFault everywhere;
    everywhere.fault_id = "F_ALL";
    everywhere.bug_report_id = "R1";
    everywhere.failing_tests = p.test_names();  // any non-empty suite detects it
    p.faults.push_back(everywhere);

    const BugReport* report = corpus.find_report("R1");
    InjectionConfig ic;
    ic.n_faults = 4;
    std::map<std::string, std::vector<Mutant>> by_source;
    by_source["ibir"] = inject(corpus, *report, ic);

    EvalConfig ec;
    ec.n_samples = 25;
    auto result = evaluate_target(corpus, everywhere, by_source, {4}, ec);
    const SourceBudgetMetrics& cell = result["ibir"][4];
    for (const SuiteSample& s : cell.suites) CHECK(s.detects_fault);
    CHECK_FALSE(cell.kendall.defined);
    CHECK_FALSE(cell.pearson.defined);
    CHECK_FALSE(cell.rank_sum_p.defined);
    CHECK_FALSE(cell.a12.defined);
}

TEST_CASE("evaluation reports round-trip through JSON") {
    TempCorpus tc;
    write_eval_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const Project& p = corpus.projects[0];
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig ic;
    ic.n_faults = 5;
    std::map<std::string, std::vector<Mutant>> by_source;
    by_source["ibir"] = inject(corpus, *report, ic);

    EvaluationReport report_out;
    report_out.config.n_samples = 12;
    report_out.config.seed = 3;
    report_out.targets["F1"] =
        evaluate_target(corpus, p.faults[0], by_source, {2, 5}, report_out.config);

    std::string text = report_to_json(report_out);
    EvaluationReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);
    CHECK(back.config.n_samples == 12);
    CHECK(back.targets.at("F1").at("ibir").at(5).mutants.size() == 5);

    CHECK_THROWS_AS(report_from_json("not json"), SchemaMismatch);
    CHECK_THROWS_AS(report_from_json("{\"config\": {}}"), SchemaMismatch);
    CHECK_THROWS_AS(report_from_json(
                        "{\"config\": {\"n_samples\": 1, \"band_lo\": 0.1, \"band_hi\": 0.3,"
                        " \"seed\": 0, \"max_steps\": 100, \"exact_limit\": 12},"
                        " \"targets\": {\"F1\": {\"ibir\": {\"oops\": {}}}}}"),
                    SchemaMismatch);
}
