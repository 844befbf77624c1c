#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rbc/simulator.hpp"

namespace rbc::cli {

/// Shortest decimal text that parses back to the same double ('.' radix,
/// independent of the locale).
std::string format_number(double value);

/// t,x1..xn,y,u_applied,u_nominal,source,B_true,B_hat_max,err_bound,B_hat_v1..B_hat_vN
std::string trace_header(std::size_t order, std::size_t vertex_count);

void write_trace_csv(const SimulationTrace& trace, std::ostream& out);
void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& path);

/// Parses a trace written by write_trace_csv. The state order and vertex
/// count are recovered from the header. Throws rbc::Error on malformed input.
SimulationTrace read_trace_csv(std::istream& in);
SimulationTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace rbc::cli
