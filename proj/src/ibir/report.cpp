#include "ibir/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "ibir/errors.hpp"

namespace ibir {

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw EmptyGroup("no values to summarize");
    std::sort(values.begin(), values.end());
    auto quantile = [&](double p) {
        double h = p * static_cast<double>(values.size() - 1);
        std::size_t i = static_cast<std::size_t>(std::floor(h));
        double frac = h - static_cast<double>(i);
        if (i + 1 >= values.size()) return values.back();
        return values[i] + frac * (values[i + 1] - values[i]);
    };
    BoxStats s;
    s.lo = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.hi = values.back();
    s.n = static_cast<int>(values.size());
    return s;
}

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// One labelled slot of a figure: either a box (five-number summary) or a
/// bar (single fraction).
struct Slot {
    std::string label_top;     // source
    std::string label_bottom;  // "n=5" style budget tag
    std::vector<double> values;
};

constexpr double kSlotWidth = 86.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 44.0;
constexpr double kPlotHeight = 280.0;
constexpr double kMarginBottom = 64.0;

std::string svg_header(const std::string& title, std::size_t n_slots, double& width) {
    width = kMarginLeft + kSlotWidth * static_cast<double>(n_slots) + kMarginRight;
    double height = kMarginTop + kPlotHeight + kMarginBottom;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width, "%.0f") +
           "\" height=\"" + fmt(height, "%.0f") + "\" font-family=\"monospace\">\n";
    out += "  <title>" + title + "</title>\n";
    out += "  <text x=\"" + fmt(width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           title + "</text>\n";
    return out;
}

std::string svg_axis(double width, double y_min, double y_max) {
    std::string out;
    double x0 = kMarginLeft - 8.0;
    for (int tick = 0; tick <= 4; ++tick) {
        double v = y_min + (y_max - y_min) * static_cast<double>(tick) / 4.0;
        double y = kMarginTop + kPlotHeight * (1.0 - static_cast<double>(tick) / 4.0);
        out += "  <line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
               fmt(width - kMarginRight) + "\" y2=\"" + fmt(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "  <text x=\"" + fmt(x0 - 4.0) + "\" y=\"" + fmt(y + 4.0) +
               "\" text-anchor=\"end\" font-size=\"11\">" + fmt(v) + "</text>\n";
    }
    return out;
}

std::string svg_labels(const Slot& slot, double cx) {
    double base = kMarginTop + kPlotHeight;
    std::string out;
    out += "  <text x=\"" + fmt(cx) + "\" y=\"" + fmt(base + 18.0) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + slot.label_top + "</text>\n";
    out += "  <text x=\"" + fmt(cx) + "\" y=\"" + fmt(base + 34.0) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + slot.label_bottom + "</text>\n";
    return out;
}

std::string render_boxplot(const std::string& title, const std::vector<Slot>& slots,
                           double y_min, double y_max) {
    double width = 0.0;
    std::string out = svg_header(title, slots.size(), width);
    out += svg_axis(width, y_min, y_max);
    auto y_of = [&](double v) {
        return kMarginTop + kPlotHeight * (1.0 - (v - y_min) / (y_max - y_min));
    };
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Slot& slot = slots[i];
        double cx = kMarginLeft + kSlotWidth * (static_cast<double>(i) + 0.5);
        out += svg_labels(slot, cx);
        if (slot.values.empty()) {
            out += "  <text x=\"" + fmt(cx) + "\" y=\"" +
                   fmt(kMarginTop + kPlotHeight / 2.0) +
                   "\" text-anchor=\"middle\" font-size=\"11\">n/a</text>\n";
            continue;
        }
        BoxStats s = box_stats(slot.values);
        double half = 22.0;
        // whisker
        out += "  <line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(y_of(s.lo)) + "\" x2=\"" + fmt(cx) +
               "\" y2=\"" + fmt(y_of(s.hi)) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        for (double v : {s.lo, s.hi})
            out += "  <line x1=\"" + fmt(cx - half / 2.0) + "\" y1=\"" + fmt(y_of(v)) +
                   "\" x2=\"" + fmt(cx + half / 2.0) + "\" y2=\"" + fmt(y_of(v)) +
                   "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        // interquartile box
        out += "  <rect class=\"box\" x=\"" + fmt(cx - half) + "\" y=\"" + fmt(y_of(s.q3)) +
               "\" width=\"" + fmt(2.0 * half) + "\" height=\"" +
               fmt(std::max(0.5, y_of(s.q1) - y_of(s.q3))) +
               "\" fill=\"#a8c8e8\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        // median
        out += "  <line x1=\"" + fmt(cx - half) + "\" y1=\"" + fmt(y_of(s.median)) + "\" x2=\"" +
               fmt(cx + half) + "\" y2=\"" + fmt(y_of(s.median)) +
               "\" stroke=\"#aa2222\" stroke-width=\"2\"/>\n";
        out += "  <text x=\"" + fmt(cx) + "\" y=\"" + fmt(kMarginTop + kPlotHeight + 50.0) +
               "\" text-anchor=\"middle\" font-size=\"10\">n=" + std::to_string(s.n) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string render_barchart(const std::string& title, const std::vector<Slot>& slots) {
    double width = 0.0;
    std::string out = svg_header(title, slots.size(), width);
    out += svg_axis(width, 0.0, 1.0);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Slot& slot = slots[i];
        double cx = kMarginLeft + kSlotWidth * (static_cast<double>(i) + 0.5);
        out += svg_labels(slot, cx);
        if (slot.values.empty()) continue;
        double fraction = slot.values.front();
        double top = kMarginTop + kPlotHeight * (1.0 - fraction);
        out += "  <rect class=\"bar\" x=\"" + fmt(cx - 22.0) + "\" y=\"" + fmt(top) +
               "\" width=\"44.00\" height=\"" +
               fmt(std::max(0.0, kMarginTop + kPlotHeight - top)) +
               "\" fill=\"#8fbc8f\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out += "  <text x=\"" + fmt(cx) + "\" y=\"" + fmt(top - 6.0) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + fmt(100.0 * fraction, "%.0f") +
               "%</text>\n";
    }
    out += "</svg>\n";
    return out;
}

struct CellKey {
    int budget;
    std::string source;
    bool operator<(const CellKey& other) const {
        if (budget != other.budget) return budget < other.budget;
        return source < other.source;
    }
};

}  // namespace

ReportBundle render_report(const EvaluationReport& report) {
    if (report.targets.empty()) throw SchemaMismatch("report has no targets");

    // Gather per-(budget, source) series across all targets.
    std::map<CellKey, std::vector<double>> all_ochiai, best_ochiai, kendalls, pearsons, a12s,
        rank_ps;
    std::map<CellKey, int> targets_seen, targets_coupled;
    for (const auto& [fault_id, by_source] : report.targets)
        for (const auto& [source, by_budget] : by_source)
            for (const auto& [budget, cell] : by_budget) {
                CellKey key{budget, source};
                for (const MutantEval& m : cell.mutants) all_ochiai[key].push_back(m.ochiai);
                best_ochiai[key].push_back(cell.best_ochiai);
                ++targets_seen[key];
                if (cell.any_coupled) ++targets_coupled[key];
                if (cell.kendall.defined) kendalls[key].push_back(cell.kendall.value);
                if (cell.pearson.defined) pearsons[key].push_back(cell.pearson.value);
                if (cell.a12.defined) a12s[key].push_back(cell.a12.value);
                if (cell.rank_sum_p.defined) rank_ps[key].push_back(cell.rank_sum_p.value);
            }

    std::vector<CellKey> keys;
    for (const auto& [key, count] : targets_seen) keys.push_back(key);

    auto slots_for = [&](const std::map<CellKey, std::vector<double>>& series) {
        std::vector<Slot> slots;
        for (const CellKey& key : keys) {
            Slot slot;
            slot.label_top = key.source;
            slot.label_bottom = "n=" + std::to_string(key.budget);
            auto it = series.find(key);
            if (it != series.end()) slot.values = it->second;
            slots.push_back(std::move(slot));
        }
        return slots;
    };

    ReportBundle bundle;
    bundle.figures.push_back(
        {"similarity-distributions.svg",
         render_boxplot("Ochiai similarity of injected faults", slots_for(all_ochiai), 0.0,
                        1.0)});
    bundle.figures.push_back(
        {"best-similarity.svg",
         render_boxplot("Best Ochiai similarity per target", slots_for(best_ochiai), 0.0, 1.0)});
    {
        std::vector<Slot> bars;
        for (const CellKey& key : keys) {
            Slot slot;
            slot.label_top = key.source;
            slot.label_bottom = "n=" + std::to_string(key.budget);
            slot.values = {static_cast<double>(targets_coupled[key]) /
                           static_cast<double>(targets_seen[key])};
            bars.push_back(std::move(slot));
        }
        bundle.figures.push_back(
            {"coupling.svg", render_barchart("Targets with a coupled mutant", bars)});
    }
    bundle.figures.push_back(
        {"correlation-kendall.svg",
         render_boxplot("Kendall: suite detection ratio vs fault detection", slots_for(kendalls),
                        -1.0, 1.0)});
    bundle.figures.push_back(
        {"correlation-pearson.svg",
         render_boxplot("Pearson: suite detection ratio vs fault detection", slots_for(pearsons),
                        -1.0, 1.0)});
    bundle.figures.push_back(
        {"a12.svg", render_boxplot("A12: detecting vs non-detecting suites", slots_for(a12s),
                                   0.0, 1.0)});

    // Markdown summary.
    std::string md = "# Evaluation summary\n\n";
    md += std::to_string(report.targets.size()) + " target(s).\n\n";
    md += "| source | budget | targets | median best Ochiai | coupled fraction | median Kendall "
          "| median Pearson | median A12 | median rank-sum p |\n";
    md += "|---|---|---|---|---|---|---|---|---|\n";
    auto median_or_na = [&](const std::map<CellKey, std::vector<double>>& series,
                            const CellKey& key, const char* spec) {
        auto it = series.find(key);
        if (it == series.end() || it->second.empty()) return std::string("n/a");
        return fmt(box_stats(it->second).median, spec);
    };
    for (const CellKey& key : keys) {
        md += "| " + key.source + " | " + std::to_string(key.budget) + " | " +
              std::to_string(targets_seen[key]) + " | " +
              median_or_na(best_ochiai, key, "%.4f") + " | " +
              fmt(static_cast<double>(targets_coupled[key]) /
                      static_cast<double>(targets_seen[key]),
                  "%.2f") +
              " | " + median_or_na(kendalls, key, "%.4f") + " | " +
              median_or_na(pearsons, key, "%.4f") + " | " + median_or_na(a12s, key, "%.4f") +
              " | " + median_or_na(rank_ps, key, "%.4f") + " |\n";
    }
    bundle.summary_markdown = md;
    return bundle;
}

void write_bundle(const std::string& out_dir, const ReportBundle& bundle) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const Figure& fig : bundle.figures)
        std::ofstream(fs::path(out_dir) / fig.file_name) << fig.svg;
    std::ofstream(fs::path(out_dir) / "summary.md") << bundle.summary_markdown;
}

}  // namespace ibir
