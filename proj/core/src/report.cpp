#include "vlab/report.hpp"

#include <charconv>
#include <fstream>

namespace vlab {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void emit_report(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "time,quantity,params,value,resolution\n";
    for (const auto& r : rows) {
        out << format_double(r.time) << ',' << r.quantity << ',' << r.params << ','
            << format_double(r.value) << ',' << r.resolution << '\n';
    }
    if (!out) throw io_error("short write to " + path);
}

std::vector<ReportRow> report_rows(const SimOutput& out, const std::string& resolution) {
    std::vector<ReportRow> rows;
    for (const auto& [key, value] : out.norm_history.entries) {
        const auto& [kind, params, time] = key;
        rows.push_back(ReportRow{time, kind, params, value, resolution});
    }
    for (size_t k = 0; k < out.contraction_ratios.size(); ++k) {
        rows.push_back(ReportRow{0.0, "picard_ratio", "sweep=" + std::to_string(k + 2),
                                 out.contraction_ratios[k], resolution});
    }
    return rows;
}

} // namespace vlab
