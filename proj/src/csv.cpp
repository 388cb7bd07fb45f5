#include "granulyzer/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "granulyzer/errors.hpp"

namespace granulyzer {

std::string format_ms(double value) {
    char buf[64];
    for (int precision = 9; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            return buf;
        }
    }
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] void bad_row(const std::string& source, std::size_t line_no, const std::string& what) {
    throw config_error(source + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double_field(const std::string& source, std::size_t line_no, const std::string& s) {
    if (s.empty()) bad_row(source, line_no, "empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) bad_row(source, line_no, "malformed number '" + s + "'");
    return v;
}

int parse_int_field(const std::string& source, std::size_t line_no, const std::string& s) {
    if (s.empty()) bad_row(source, line_no, "empty integer field");
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) bad_row(source, line_no, "malformed integer '" + s + "'");
    return static_cast<int>(v);
}

} // namespace

void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
    os << samples_csv_header << "\n";
    for (const auto& r : rows) {
        os << r.workload << ',' << to_string(r.topology) << ',' << r.sample.ranks << ','
           << format_ms(r.sample.t_kernel_ms) << ',' << format_ms(r.sample.t_overhead_ms) << "\n";
    }
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
    os << trace_csv_header << "\n";
    for (const auto& r : rows) {
        os << r.workload << ',' << to_string(r.topology) << ',' << r.ranks << ',' << r.phase << ','
           << format_ms(r.t_kernel_ms) << ',' << format_ms(r.t_overhead_ms) << ','
           << to_string(r.mode) << ',' << r.seed << "\n";
    }
}

std::vector<SampleRow> read_samples_csv(std::istream& is, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<SampleRow> rows;
    bool saw_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != samples_csv_header) {
                bad_row(source_name, line_no,
                        std::string("expected header '") + samples_csv_header + "'");
            }
            saw_header = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            bad_row(source_name, line_no,
                    "expected 5 fields, got " + std::to_string(fields.size()));
        }
        SampleRow r;
        r.workload = fields[0];
        try {
            r.topology = topology_from_string(fields[1]);
        } catch (const std::invalid_argument& e) {
            bad_row(source_name, line_no, e.what());
        }
        r.sample.ranks = parse_int_field(source_name, line_no, fields[2]);
        r.sample.t_kernel_ms = parse_double_field(source_name, line_no, fields[3]);
        r.sample.t_overhead_ms = parse_double_field(source_name, line_no, fields[4]);
        if (r.sample.ranks < 1) bad_row(source_name, line_no, "P must be >= 1");
        if (!(r.sample.t_kernel_ms > 0.0)) bad_row(source_name, line_no, "t_kernel_ms must be > 0");
        if (r.sample.t_overhead_ms < 0.0) {
            bad_row(source_name, line_no, "t_overhead_ms must be >= 0");
        }
        rows.push_back(std::move(r));
    }
    if (!saw_header) {
        bad_row(source_name, line_no == 0 ? 1 : line_no, "missing CSV header");
    }
    return rows;
}

std::vector<SampleRow> read_samples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open '" + path + "' for reading");
    }
    return read_samples_csv(in, path);
}

void write_samples_file(const std::string& path, const std::vector<SampleRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_samples_csv(out, rows);
    if (!out) throw io_error("write failed for '" + path + "'");
}

void write_trace_file(const std::string& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_trace_csv(out, rows);
    if (!out) throw io_error("write failed for '" + path + "'");
}

std::vector<TraceRow> trace_rows(const ExecutionTrace& trace, const WorkloadSpec& workload) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.per_phase.size());
    for (std::size_t p = 0; p < trace.per_phase.size(); ++p) {
        TraceRow r;
        r.workload = workload.name;
        r.topology = workload.topology;
        r.ranks = trace.ranks;
        r.phase = static_cast<int>(p);
        r.t_kernel_ms = trace.per_phase[p].t_kernel_ms;
        r.t_overhead_ms = trace.per_phase[p].t_overhead_ms;
        r.mode = trace.mode;
        r.seed = trace.seed;
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace granulyzer
