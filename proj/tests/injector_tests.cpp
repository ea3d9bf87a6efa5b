#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "ibir/corpus.hpp"
#include "ibir/errors.hpp"
#include "ibir/injector.hpp"
#include "ibir/irloc.hpp"
#include "json.hpp"
#include "minij/printer.hpp"
#include "minij/typecheck.hpp"
#include "support/temp_corpus.hpp"

using namespace ibir;

namespace {

// Two src files, one fixed report; the report vocabulary points at calc.mj.
void write_report_project(TempCorpus& tc) {
    tc.write("src/calc.mj",
             "int total = 0;\n"
             "\n"
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
             "}\n"
             "\n"
             "bool both_ready(bool first, bool second) {\n"
             "    if (first && second) {\n"
             "        return true;\n"
             "    }\n"
             "    return false;\n"
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
             "void test_clamp_total() {\n"
             "    assert(clamp_total(9, 4) == 4);\n"
             "}\n"
             "\n"
             "void test_both_ready() {\n"
             "    assert(both_ready(true, true));\n"
             "    assert(!both_ready(true, false));\n"
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
             R"( "fixed_statements": [{"path": "src/calc.mj", "index": 1}],)"
             R"( "failing_tests": ["test_add_amount"]})");
}

// Typechecks the project's program with one file's AST swapped for the mutant.
void require_viable(const Project& p, const Mutant& m) {
    std::vector<minij::SourceFile> program;
    for (const CorpusFile& f : p.files)
        program.push_back(
            {f.path, f.path == m.application.statement.file_path ? m.mutated_ast : f.ast});
    CHECK_NOTHROW(minij::typecheck_program(program));
}

}  // namespace

TEST_CASE("report-guided injection emits exactly n ranked viable mutants") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");
    REQUIRE(report != nullptr);

    InjectionConfig config;
    config.n_faults = 5;
    config.seed = 42;
    auto mutants = inject(corpus, *report, config);
    REQUIRE(mutants.size() == 5);

    const Project& p = corpus.projects[0];
    Index file_index = build_index(p, Granularity::File);
    auto files = rank_files(file_index, make_query(*report), config.top_files);
    std::set<std::string> ranked_files;
    for (const auto& f : files) ranked_files.insert(f.path);

    std::set<std::string> diffs, ids;
    for (std::size_t i = 0; i < mutants.size(); ++i) {
        const Mutant& m = mutants[i];
        CHECK(m.rank == static_cast<int>(i) + 1);
        CHECK(m.mutant_id == "ibir-42-" + std::to_string(i + 1));
        CHECK(m.source == MutantSource::Ibir);
        CHECK(m.status == MutantStatus::Viable);
        CHECK(ranked_files.count(m.application.statement.file_path));
        CHECK(m.diff.rfind("--- a/" + m.application.statement.file_path, 0) == 0);
        diffs.insert(m.diff);
        ids.insert(m.mutant_id);
        require_viable(p, m);
    }
    CHECK(diffs.size() == mutants.size());
    CHECK(ids.size() == mutants.size());
}

TEST_CASE("injection order follows statement rank, then pattern priority") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 500;  // drain everything
    auto mutants = inject(corpus, *report, config);
    REQUIRE(mutants.size() > 20);

    const Project& p = corpus.projects[0];
    Query query = make_query(*report);
    Index file_index = build_index(p, Granularity::File);
    Index stmt_index = build_index(p, Granularity::Statement);
    auto files = rank_files(file_index, query, config.top_files);
    auto locations = rank_statements(stmt_index, query, files, config.top_statements);
    std::map<StatementRef, int> stmt_rank;
    for (const auto& loc : locations) stmt_rank[loc.statement] = loc.rank;

    std::tuple<int, int, int, int> prev{-1, -1, -1, -1};
    for (const Mutant& m : mutants) {
        REQUIRE(stmt_rank.count(m.application.statement));
        std::tuple<int, int, int, int> key{stmt_rank[m.application.statement],
                                           m.application.priority, m.application.bfs_index,
                                           m.application.donor_index};
        CHECK(prev < key);
        prev = key;
    }
}

TEST_CASE("injection exhausts the pool without error when n is too large") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 100000;
    auto all = inject(corpus, *report, config);
    CHECK(all.size() > 20);
    CHECK(all.size() < 100000);
    std::set<std::string> diffs;
    for (const Mutant& m : all) diffs.insert(m.diff);
    CHECK(diffs.size() == all.size());
}

TEST_CASE("equal edits from different catalog rows are deduplicated") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 100000;
    auto all = inject(corpus, *report, config);
    // change_conditional_operator and op_conditional both turn `first && second`
    // into `first || second`; only the higher-priority row's copy survives.
    int hits = 0;
    for (const Mutant& m : all)
        if (m.diff.find("if (first || second) {") != std::string::npos) {
            ++hits;
            CHECK(m.application.pattern_id == "change_conditional_operator");
        }
    CHECK(hits == 1);
}

TEST_CASE("scope restricts emitted mutants to the allow-list") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 100000;
    config.scope = {"src/util.mj"};
    auto scoped = inject(corpus, *report, config);
    REQUIRE(!scoped.empty());
    for (const Mutant& m : scoped) CHECK(m.application.statement.file_path == "src/util.mj");

    config.scope = {"src/absent.mj"};
    CHECK_THROWS_AS(inject(corpus, *report, config), NoViableMutants);
}

TEST_CASE("injection is deterministic and independent of worker count") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 30;
    config.seed = 7;
    auto a = inject(corpus, *report, config);
    auto b = inject(corpus, *report, config);
    config.jobs = 4;
    auto c = inject(corpus, *report, config);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mutant_id == b[i].mutant_id);
        CHECK(a[i].diff == b[i].diff);
        CHECK(a[i].mutant_id == c[i].mutant_id);
        CHECK(a[i].diff == c[i].diff);
        CHECK(a[i].application.pattern_id == c[i].application.pattern_id);
    }
}

TEST_CASE("tokenless reports and foreign reports are rejected") {
    TempCorpus tc;
    write_report_project(tc);
    tc.write("bugreports/r9.json",
             R"({"id": "R9", "title": "the of and", "description": "to in that it was for",)"
             R"( "status": "fixed"})");
    Corpus corpus = load_corpus(tc.root.string());

    InjectionConfig config;
    CHECK_THROWS_AS(inject(corpus, *corpus.find_report("R9"), config), EmptyQuery);

    BugReport foreign;
    foreign.id = "ZZZ";
    foreign.title = "unknown";
    foreign.description = "unknown";
    CHECK_THROWS_AS(inject(corpus, foreign, config), std::invalid_argument);
}

TEST_CASE("a trimmed catalog restricts which patterns fire") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 100000;
    config.catalog.clear();
    for (const PatternInfo& row : default_catalog())
        if (row.id == "remove_statement") config.catalog.push_back(row);
    auto mutants = inject(corpus, *report, config);
    REQUIRE(!mutants.empty());
    for (const Mutant& m : mutants) CHECK(m.application.pattern_id == "remove_statement");
}

TEST_CASE("baseline sampling is seeded and classical-only") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());

    std::set<std::string> classical;
    for (const PatternInfo& row : baseline_catalog()) classical.insert(row.id);
    CHECK(classical == std::set<std::string>{"remove_statement", "op_arithmetic",
                                             "op_assignment", "op_relational", "op_conditional",
                                             "op_bitwise_shift", "op_unary"});

    InjectionConfig config;
    config.n_faults = 10;
    config.seed = 11;
    auto a = inject_baseline(corpus, config);
    auto b = inject_baseline(corpus, config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mutant_id == b[i].mutant_id);
        CHECK(a[i].diff == b[i].diff);
        CHECK(classical.count(a[i].application.pattern_id));
        CHECK(a[i].mutant_id == "baseline-11-" + std::to_string(i + 1));
        require_viable(corpus.projects[0], a[i]);
    }

    config.seed = 12;
    auto c = inject_baseline(corpus, config);
    std::vector<std::string> diffs_a, diffs_c;
    for (const Mutant& m : a) diffs_a.push_back(m.diff);
    for (const Mutant& m : c) diffs_c.push_back(m.diff);
    CHECK(diffs_a != diffs_c);  // different seed, different draw order
}

TEST_CASE("baseline drains the whole viable pool and spans files") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());

    InjectionConfig config;
    config.n_faults = 100000;
    config.seed = 3;
    auto all = inject_baseline(corpus, config);
    REQUIRE(!all.empty());
    std::set<std::string> files, diffs;
    for (const Mutant& m : all) {
        files.insert(m.application.statement.file_path);
        diffs.insert(m.diff);
    }
    CHECK(files.size() >= 2);
    CHECK(diffs.size() == all.size());

    config.scope = {"src/util.mj"};
    auto scoped = inject_baseline(corpus, config);
    REQUIRE(!scoped.empty());
    for (const Mutant& m : scoped) CHECK(m.application.statement.file_path == "src/util.mj");
}

TEST_CASE("baseline with an empty candidate pool reports no viable mutants") {
    TempCorpus tc;
    tc.write("src/only.mj", "int x = 5;\n");
    Corpus corpus = load_corpus(tc.root.string());
    InjectionConfig config;
    CHECK_THROWS_AS(inject_baseline(corpus, config), NoViableMutants);
}

TEST_CASE("mutant directories carry the mutated file, patch, and metadata") {
    TempCorpus tc;
    write_report_project(tc);
    Corpus corpus = load_corpus(tc.root.string());
    const BugReport* report = corpus.find_report("R1");

    InjectionConfig config;
    config.n_faults = 3;
    config.seed = 42;
    auto mutants = inject(corpus, *report, config);
    REQUIRE(mutants.size() == 3);

    TempCorpus out;
    write_mutants((out.root / "mutants").string(), mutants);
    for (const Mutant& m : mutants) {
        auto dir = out.root / "mutants" / m.mutant_id;
        std::ifstream mutated(dir / m.application.statement.file_path);
        REQUIRE(mutated.good());
        std::stringstream ms;
        ms << mutated.rdbuf();
        CHECK(ms.str() == minij::unparse(m.mutated_ast));

        std::ifstream patch(dir / "diff.patch");
        REQUIRE(patch.good());
        std::stringstream ps;
        ps << patch.rdbuf();
        CHECK(ps.str() == m.diff);

        std::ifstream meta_in(dir / "meta.json");
        REQUIRE(meta_in.good());
        nlohmann::json meta = nlohmann::json::parse(meta_in);
        CHECK(meta["mutant_id"] == m.mutant_id);
        CHECK(meta["source"] == "ibir");
        CHECK(meta["statement"]["path"] == m.application.statement.file_path);
        CHECK(meta["statement"]["index"] == m.application.statement.index);
        CHECK(meta["pattern_id"] == m.application.pattern_id);
        CHECK(meta["rank"] == m.rank);
        CHECK(meta["donor"]["kind"] == m.application.donor.kind);
        CHECK(meta["donor"]["text"] == m.application.donor.text);
    }
}
