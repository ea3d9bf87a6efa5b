#pragma once

#include <string>
#include <vector>

#include "ibir/evaluator.hpp"

namespace ibir {

/// Five-number summary feeding one box of a boxplot.
struct BoxStats {
    double lo = 0.0;  // minimum
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double hi = 0.0;  // maximum
    int n = 0;
};

/// Quartiles by linear interpolation between order statistics (the common
/// spreadsheet/R-default method). Throws EmptyGroup on no data.
BoxStats box_stats(std::vector<double> values);

struct Figure {
    std::string file_name;  // e.g. "best-similarity.svg"
    std::string svg;
};

/// Rendered figures plus the markdown summary table.
struct ReportBundle {
    std::vector<Figure> figures;
    std::string summary_markdown;  // "summary.md"
};

/// Renders boxplot/bar figures and the summary table from an evaluation
/// report: per-mutant similarity distributions, per-target best similarity,
/// coupled-target fractions, suite-correlation distributions, and effect
/// sizes, each broken down by source and budget. Throws SchemaMismatch when
/// the report has no targets.
ReportBundle render_report(const EvaluationReport& report);

/// Writes every figure and summary.md into out_dir (created if needed).
void write_bundle(const std::string& out_dir, const ReportBundle& bundle);

}  // namespace ibir
