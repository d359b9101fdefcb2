#include "iag/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace iag {
namespace {

void write_rows(std::ofstream& out, const Trace& trace,
                const std::string& prefix) {
  char buf[256];
  for (long k = 0; k < trace.rows(); ++k) {
    if (!keep_row(k)) continue;
    const size_t i = static_cast<size_t>(k);
    std::snprintf(buf, sizeof(buf),
                  "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k,
                  trace.dist[i], trace.cost_gap[i], trace.agg_grad_norm[i],
                  trace.err_norm[i], trace.err_bound_rhs[i],
                  trace.thm1_bound[i]);
    out << prefix << buf;
  }
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

bool keep_row(long k) { return k <= 1000 || k % 10 == 0; }

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out = open_or_throw(path);
  out << "k,dist,cost_gap,agg_grad_norm,err_norm,err_bound_rhs,thm1_bound\n";
  write_rows(out, trace, "");
  if (!out) throw std::runtime_error("failed writing " + path);
}

void write_compare_csv(
    const std::vector<std::pair<std::string, const Trace*>>& traces,
    const std::string& path) {
  std::ofstream out = open_or_throw(path);
  out << "method,k,dist,cost_gap,agg_grad_norm,err_norm,err_bound_rhs,"
         "thm1_bound\n";
  for (const auto& [name, trace] : traces) write_rows(out, *trace, name + ",");
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace iag
