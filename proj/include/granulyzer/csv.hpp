#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "granulyzer/calibration.hpp"
#include "granulyzer/simulator.hpp"

namespace granulyzer {

// CSV schemas are a bit-exact contract. Durations are decimal milliseconds
// printed with enough digits to round-trip doubles exactly, so
// write -> read -> write is byte-identical.
inline constexpr const char* trace_csv_header =
    "workload,topology,P,phase,t_kernel_ms,t_overhead_ms,mode,seed";
inline constexpr const char* samples_csv_header = "workload,topology,P,t_kernel_ms,t_overhead_ms";

// Shortest representation that parses back to the same double, never fewer
// than 9 significant digits of information.
std::string format_ms(double value);

struct SampleRow {
    std::string workload;
    TopologyClass topology = TopologyClass::Independent;
    ScalingSample sample;
};

struct TraceRow {
    std::string workload;
    TopologyClass topology = TopologyClass::Independent;
    int ranks = 0;
    int phase = 0;
    double t_kernel_ms = 0.0;
    double t_overhead_ms = 0.0;
    SchedulingMode mode = SchedulingMode::Dynamic;
    std::uint64_t seed = 0;
};

void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

// Malformed rows raise config_error with the 1-based line number.
std::vector<SampleRow> read_samples_csv(std::istream& is, const std::string& source_name);

std::vector<SampleRow> read_samples_file(const std::string& path);
void write_samples_file(const std::string& path, const std::vector<SampleRow>& rows);
void write_trace_file(const std::string& path, const std::vector<TraceRow>& rows);

std::vector<TraceRow> trace_rows(const ExecutionTrace& trace, const WorkloadSpec& workload);

} // namespace granulyzer
