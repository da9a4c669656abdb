#pragma once

#include <string>
#include <vector>

#include "vlab/grid.hpp"
#include "vlab/solver.hpp"

namespace vlab {

/// One CSV report row.
struct ReportRow {
    double time = 0.0;
    std::string quantity;
    std::string params;
    double value = 0.0;
    std::string resolution;
};

/// 17-significant-digit rendering; round-trips through strtod bit exactly.
std::string format_double(double x);

/// Writes rows as CSV with header `time,quantity,params,value,resolution`.
void emit_report(const std::vector<ReportRow>& rows, const std::string& path);

/// Rows of a finished run: one row per (snapshot, requested norm) plus one
/// row per recorded contraction ratio.
std::vector<ReportRow> report_rows(const SimOutput& out, const std::string& resolution);

} // namespace vlab
