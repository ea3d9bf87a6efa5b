#pragma once

#include <map>
#include <string>
#include <vector>

#include "ibir/corpus.hpp"
#include "ibir/tokenize.hpp"

namespace ibir {

struct Query {
    TermCounts tokens;
    std::string source_report_id;
};

/// Tokenizes a report's title + description as one query.
Query make_query(const BugReport& report);

enum class Granularity { File, Statement };

struct IndexedDocument {
    std::string path;
    int stmt_index = -1;  // -1 for file-granularity documents
    std::map<std::string, double> weights;  // term -> tf·idf
    double norm = 0.0;
};

struct Index {
    Granularity granularity = Granularity::File;
    std::vector<IndexedDocument> docs;       // only documents with norm > 0
    std::map<std::string, double> idf;       // term -> ln(N / df)
    std::vector<StatementRef> universe;      // all statements (statement granularity)
};

/// tf·idf index over the project's src files (file granularity) or their
/// statements (statement granularity). tf = raw count; idf = ln(N/df) with
/// N = documents with at least one token; terms in every document weigh 0;
/// documents whose weight vector is all-zero are dropped.
/// Throws EmptyCorpus when the project has no src files.
Index build_index(const Project& project, Granularity granularity);

struct FileScore {
    std::string path;
    double score = 0.0;
};

/// Top-k files by cosine similarity between query and document vectors.
/// Ties: score desc, then path asc. Throws EmptyQuery on a tokenless query.
std::vector<FileScore> rank_files(const Index& file_index, const Query& query, int k);

struct RankedLocation {
    StatementRef statement;
    double score = 0.0;
    double file_score = 0.0;
    int rank = 0;  // 1-based, dense
};

/// Scores every statement of the given files: score = file_score × cosine
/// (statements with no indexed tokens score 0). Returns the top n by
/// (score desc, path asc, index asc). Throws EmptyQuery.
std::vector<RankedLocation> rank_statements(const Index& stmt_index, const Query& query,
                                            const std::vector<FileScore>& files, int n);

/// CSV rendering: header `rank,path,statement_index,score,file_score`,
/// scores with six decimal digits.
std::string localize_csv(const std::vector<RankedLocation>& locations);

}  // namespace ibir
