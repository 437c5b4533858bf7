#include "curbs/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "curbs/errors.hpp"

namespace curbs {

std::size_t trace_argmax(std::span<const double> dw_values) {
  if (dw_values.empty()) throw PreconditionError("empty trace");
  std::size_t best = 0;
  for (std::size_t i = 1; i < dw_values.size(); ++i) {
    if (dw_values[i] > dw_values[best]) best = i;
  }
  return best + 1;
}

std::size_t trace_argmin_excluding(std::span<const double> dw_values, std::size_t exclude) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < dw_values.size(); ++i) {
    if (i + 1 == exclude) continue;
    if (!best || dw_values[i] < dw_values[*best]) best = i;
  }
  if (!best) throw PreconditionError("trace has no iteration besides the excluded one");
  return *best + 1;
}

SplitTrace transfer_trace(const GramMatrix& gram, const ClusterView& working) {
  if (working.size() < 2) throw PreconditionError("binary split needs |E| >= 2");
  TransferLedger ledger(gram, working);
  SplitTrace trace;
  const std::size_t steps = working.size() - 1;
  trace.order.reserve(steps);
  trace.dw_values.reserve(steps);
  for (std::size_t r = 1; r <= steps; ++r) {
    const auto pick = ledger.best_transfer();
    trace.order.push_back(pick.index);
    trace.dw_values.push_back(ledger.transfer(pick.index));
  }
  trace.n_max = trace_argmax(trace.dw_values);
  return trace;
}

BinarySplit split_at_max(const SplitTrace& trace, const ClusterView& working) {
  std::vector<std::size_t> first(trace.order.begin(),
                                 trace.order.begin() + static_cast<std::ptrdiff_t>(trace.n_max));
  ClusterView c1(std::move(first));
  std::vector<std::size_t> rest;
  rest.reserve(working.size() - c1.size());
  for (std::size_t i : working.indices()) {
    if (!c1.contains(i)) rest.push_back(i);
  }
  return BinarySplit{trace, std::move(c1), ClusterView(std::move(rest))};
}

BinarySplit binary_split(const GramMatrix& gram, const ClusterView& working) {
  return split_at_max(transfer_trace(gram, working), working);
}

SccDiagnostics scc_from_trace(std::span<const double> dw_values, std::size_t set_size) {
  if (set_size < 2 || dw_values.size() + 1 != set_size) {
    throw PreconditionError("trace length must be |E| - 1 with |E| >= 2");
  }
  SccDiagnostics out;
  out.n_max = trace_argmax(dw_values);
  const double vmax = dw_values[out.n_max - 1];
  if (set_size == 2) {
    out.degenerate = true;
    return out;
  }

  const double vmin = *std::min_element(dw_values.begin(), dw_values.end());
  const std::size_t nmin = trace_argmin_excluding(dw_values, out.n_max);
  out.n_min = nmin;

  const double n = static_cast<double>(set_size);
  const double a = static_cast<double>(out.n_max);
  const double b = static_cast<double>(nmin);
  out.h = a * (n - a) / (b * (n - b));
  out.r_stat = nmin <= out.n_max ? a * (n - b) / (b * (n - a)) : b * (n - a) / (a * (n - b));

  if (vmax <= kDegenerateFloor) {
    out.v = 1.0;
    out.degenerate = true;
    return out;
  }
  out.v = vmin > 0.0 ? vmax / vmin : std::numeric_limits<double>::infinity();
  const bool accept = std::abs(out.v - out.r_stat / out.h) > std::abs(out.v - 1.0);
  out.decision = accept ? SccDecision::accept : SccDecision::reject;

  if (set_size <= kAutoAcceptSize) {
    out.decision = SccDecision::accept;
    out.degenerate = true;
  }
  return out;
}

SccResult scc_check(const GramMatrix& gram, const ClusterView& working) {
  SccResult result;
  result.trace = transfer_trace(gram, working);
  result.diagnostics = scc_from_trace(result.trace.dw_values, working.size());
  result.trace.n_min = result.diagnostics.n_min;
  return result;
}

void write_trace_csv(std::ostream& out, const SplitTrace& trace) {
  out << "r,transferred_index,dw\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < trace.dw_values.size(); ++i) {
    out << (i + 1) << ',' << trace.order[i] << ',' << trace.dw_values[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace curbs
