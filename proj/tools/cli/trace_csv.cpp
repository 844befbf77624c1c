#include "cli/trace_csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rbc/errors.hpp"

namespace rbc::cli {

namespace {

constexpr std::size_t kFixedColumnsBeforeState = 1;
constexpr std::size_t kFixedColumnsAfterState = 7;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error("trace line " + std::to_string(line) + ": invalid number '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return {buffer, ptr};
}

std::string trace_header(std::size_t order, std::size_t vertex_count) {
  std::string header = "t";
  for (std::size_t i = 1; i <= order; ++i) header += ",x" + std::to_string(i);
  header += ",y,u_applied,u_nominal,source,B_true,B_hat_max,err_bound";
  for (std::size_t i = 1; i <= vertex_count; ++i) header += ",B_hat_v" + std::to_string(i);
  return header;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
  out << trace_header(trace.order, trace.vertex_count) << '\n';
  std::string line;
  for (const auto& row : trace.rows) {
    line = format_number(row.t);
    for (Eigen::Index i = 0; i < row.x.size(); ++i) line += ',' + format_number(row.x(i));
    line += ',' + format_number(row.y);
    line += ',' + format_number(row.u_applied);
    line += ',' + format_number(row.u_nominal);
    line += ',';
    line += to_string(row.source);
    line += ',' + format_number(row.b_true);
    line += ',' + format_number(row.b_hat_max);
    line += ',' + format_number(row.err_bound);
    for (double b : row.b_hat) line += ',' + format_number(b);
    out << line << '\n';
  }
}

void write_trace_csv(const SimulationTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_trace_csv(trace, out);
  if (!out) throw Error("failed writing " + path.string());
}

SimulationTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("trace is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);

  std::size_t order = 0;
  while (kFixedColumnsBeforeState + order < header.size() &&
         header[kFixedColumnsBeforeState + order] == "x" + std::to_string(order + 1)) {
    ++order;
  }
  if (order == 0 || header.size() < kFixedColumnsBeforeState + order + kFixedColumnsAfterState) {
    throw Error("trace header is not a simulation trace header");
  }
  const std::size_t vertices =
      header.size() - kFixedColumnsBeforeState - order - kFixedColumnsAfterState;
  if (line != trace_header(order, vertices)) {
    throw Error("trace header does not match the expected column layout");
  }

  SimulationTrace trace;
  trace.order = order;
  trace.vertex_count = vertices;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw Error("trace line " + std::to_string(line_number) + ": expected " +
                  std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    TraceRow row;
    std::size_t k = 0;
    row.t = parse_number(fields[k++], line_number);
    row.x.resize(static_cast<Eigen::Index>(order));
    for (std::size_t i = 0; i < order; ++i) {
      row.x(static_cast<Eigen::Index>(i)) = parse_number(fields[k++], line_number);
    }
    row.y = parse_number(fields[k++], line_number);
    row.u_applied = parse_number(fields[k++], line_number);
    row.u_nominal = parse_number(fields[k++], line_number);
    const std::string& source = fields[k++];
    if (source == "nominal") {
      row.source = ControlSource::kNominal;
    } else if (source == "backup") {
      row.source = ControlSource::kBackup;
    } else {
      throw Error("trace line " + std::to_string(line_number) + ": unknown source '" + source +
                  "'");
    }
    row.b_true = parse_number(fields[k++], line_number);
    row.b_hat_max = parse_number(fields[k++], line_number);
    row.err_bound = parse_number(fields[k++], line_number);
    for (std::size_t i = 0; i < vertices; ++i) row.b_hat.push_back(parse_number(fields[k++], line_number));
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

SimulationTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_trace_csv(in);
}

}  // namespace rbc::cli
