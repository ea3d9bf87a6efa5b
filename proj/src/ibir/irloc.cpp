#include "ibir/irloc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ibir/errors.hpp"

namespace ibir {

namespace {

struct RawDoc {
    std::string path;
    int stmt_index;
    TermCounts counts;
};

Index build_from(std::vector<RawDoc> raw, Granularity g) {
    Index index;
    index.granularity = g;

    std::vector<RawDoc> kept;
    for (RawDoc& d : raw)
        if (!d.counts.empty()) kept.push_back(std::move(d));

    std::map<std::string, int> df;
    for (const RawDoc& d : kept)
        for (const auto& [term, tf] : d.counts) ++df[term];

    double n = static_cast<double>(kept.size());
    for (const auto& [term, count] : df)
        index.idf[term] = std::log(n / static_cast<double>(count));

    for (const RawDoc& d : kept) {
        IndexedDocument doc;
        doc.path = d.path;
        doc.stmt_index = d.stmt_index;
        double sq = 0.0;
        for (const auto& [term, tf] : d.counts) {
            double w = static_cast<double>(tf) * index.idf[term];
            if (w > 0.0) {
                doc.weights[term] = w;
                sq += w * w;
            }
        }
        if (doc.weights.empty()) continue;  // every term ubiquitous
        doc.norm = std::sqrt(sq);
        index.docs.push_back(std::move(doc));
    }
    return index;
}

struct QueryVector {
    std::map<std::string, double> weights;
    double norm = 0.0;
};

QueryVector weigh_query(const Index& index, const Query& query) {
    if (query.tokens.empty())
        throw EmptyQuery("query " + query.source_report_id + " has no tokens");
    QueryVector qv;
    double sq = 0.0;
    for (const auto& [term, tf] : query.tokens) {
        auto it = index.idf.find(term);
        if (it == index.idf.end() || it->second <= 0.0) continue;  // unseen or ubiquitous
        double w = static_cast<double>(tf) * it->second;
        qv.weights[term] = w;
        sq += w * w;
    }
    qv.norm = std::sqrt(sq);
    return qv;
}

double cosine(const QueryVector& q, const IndexedDocument& d) {
    if (q.norm <= 0.0 || d.norm <= 0.0) return 0.0;
    // Iterate the smaller map.
    double dot = 0.0;
    if (q.weights.size() <= d.weights.size()) {
        for (const auto& [term, w] : q.weights) {
            auto it = d.weights.find(term);
            if (it != d.weights.end()) dot += w * it->second;
        }
    } else {
        for (const auto& [term, w] : d.weights) {
            auto it = q.weights.find(term);
            if (it != q.weights.end()) dot += w * it->second;
        }
    }
    double s = dot / (q.norm * d.norm);
    return std::min(1.0, std::max(0.0, s));
}

}  // namespace

Query make_query(const BugReport& report) {
    Query q;
    q.source_report_id = report.id;
    q.tokens = tokenize(report.title + "\n" + report.description, TokenizeMode::Report);
    return q;
}

Index build_index(const Project& project, Granularity granularity) {
    std::vector<RawDoc> raw;
    std::vector<StatementRef> universe;
    bool any_src = false;
    for (const CorpusFile& f : project.files) {
        if (f.is_test) continue;
        any_src = true;
        if (granularity == Granularity::File) {
            raw.push_back({f.path, -1, tokenize(f.raw_text, TokenizeMode::Code)});
        } else {
            for (const StatementInfo& st : f.statements) {
                std::string text =
                    f.raw_text.substr(st.span.begin, st.span.end - st.span.begin);
                raw.push_back({f.path, st.ref.index, tokenize(text, TokenizeMode::Code)});
                universe.push_back(st.ref);
            }
        }
    }
    if (!any_src) throw EmptyCorpus("project " + project.name + " has no src files");
    Index index = build_from(std::move(raw), granularity);
    index.universe = std::move(universe);
    return index;
}

std::vector<FileScore> rank_files(const Index& file_index, const Query& query, int k) {
    QueryVector qv = weigh_query(file_index, query);
    std::vector<FileScore> scored;
    scored.reserve(file_index.docs.size());
    for (const IndexedDocument& d : file_index.docs)
        scored.push_back({d.path, cosine(qv, d)});
    std::sort(scored.begin(), scored.end(), [](const FileScore& a, const FileScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.path < b.path;
    });
    if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));
    return scored;
}

std::vector<RankedLocation> rank_statements(const Index& stmt_index, const Query& query,
                                            const std::vector<FileScore>& files, int n) {
    QueryVector qv = weigh_query(stmt_index, query);

    std::map<std::pair<std::string, int>, const IndexedDocument*> by_id;
    for (const IndexedDocument& d : stmt_index.docs) by_id[{d.path, d.stmt_index}] = &d;

    std::vector<RankedLocation> out;
    for (const FileScore& f : files) {
        for (const StatementRef& ref : stmt_index.universe) {
            if (ref.file_path != f.path) continue;
            RankedLocation loc;
            loc.statement = ref;
            loc.file_score = f.score;
            auto it = by_id.find({ref.file_path, ref.index});
            double c = it != by_id.end() ? cosine(qv, *it->second) : 0.0;
            loc.score = f.score * c;
            out.push_back(std::move(loc));
        }
    }
    std::sort(out.begin(), out.end(), [](const RankedLocation& a, const RankedLocation& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.statement.file_path != b.statement.file_path)
            return a.statement.file_path < b.statement.file_path;
        return a.statement.index < b.statement.index;
    });
    if (static_cast<int>(out.size()) > n) out.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

std::string localize_csv(const std::vector<RankedLocation>& locations) {
    std::string out = "rank,path,statement_index,score,file_score\n";
    char buf[64];
    for (const RankedLocation& loc : locations) {
        out += std::to_string(loc.rank);
        out += ',';
        out += loc.statement.file_path;
        out += ',';
        out += std::to_string(loc.statement.index);
        std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", loc.score, loc.file_score);
        out += buf;
    }
    return out;
}

}  // namespace ibir
