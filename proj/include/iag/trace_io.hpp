#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iag/trace.hpp"

namespace iag {

/// True for rows that survive down-sampling: every iteration up to k = 1000,
/// then every 10th.
bool keep_row(long k);

/// CSV schema: k,dist,cost_gap,agg_grad_norm,err_norm,err_bound_rhs,thm1_bound.
/// Doubles are printed with %.17g, so identical runs produce identical bytes.
void write_trace_csv(const Trace& trace, const std::string& path);

/// Long-format CSV with a leading method column, one block per trace.
void write_compare_csv(
    const std::vector<std::pair<std::string, const Trace*>>& traces,
    const std::string& path);

}  // namespace iag
