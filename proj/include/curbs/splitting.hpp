#ifndef CURBS_SPLITTING_HPP
#define CURBS_SPLITTING_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "curbs/mmd_core.hpp"

namespace curbs {

// The d_w path of one greedy transfer run over a working set E.
// Iterations are 1-based: dw_values[r-1] = d_w(C1^(r), C2^(r)), r = 1..|E|-1.
struct SplitTrace {
  std::vector<std::size_t> order;  // observation moved at iteration r
  std::vector<double> dw_values;
  std::size_t n_max = 0;
  std::optional<std::size_t> n_min;  // set by the single-cluster check
};

struct BinarySplit {
  SplitTrace trace;
  ClusterView first;   // C1^(N_max)
  ClusterView second;  // C2^(N_max)
};

// Greedy transfer loop with the cut at the earliest maximizer of the d_w path.
BinarySplit binary_split(const GramMatrix& gram, const ClusterView& working);

// Runs the |E|-1 transfers and returns the raw trace (n_max filled in).
SplitTrace transfer_trace(const GramMatrix& gram, const ClusterView& working);

// Earliest r (1-based) attaining the maximum.
std::size_t trace_argmax(std::span<const double> dw_values);
// Earliest r != exclude attaining the minimum over the remaining iterations.
std::size_t trace_argmin_excluding(std::span<const double> dw_values, std::size_t exclude);

enum class SccDecision { accept, reject };

struct SccDiagnostics {
  double v = 1.0;
  double h = 1.0;
  double r_stat = 1.0;
  std::size_t n_max = 0;
  std::optional<std::size_t> n_min;
  SccDecision decision = SccDecision::accept;
  bool degenerate = false;
};

// d_w paths whose maximum is at or below this are treated as one cluster.
inline constexpr double kDegenerateFloor = 1e-12;
// Working sets this small are always accepted.
inline constexpr std::size_t kAutoAcceptSize = 3;

// Decision rule applied to a finished d_w path over a set of `set_size`
// observations: V = max/min, H and R from N_max, N_min; accept iff
// |V - R/H| > |V - 1|.
SccDiagnostics scc_from_trace(std::span<const double> dw_values, std::size_t set_size);

struct SccResult {
  SccDiagnostics diagnostics;
  SplitTrace trace;
};

SccResult scc_check(const GramMatrix& gram, const ClusterView& working);

// Cuts a finished trace at n_max into (C1, C2).
BinarySplit split_at_max(const SplitTrace& trace, const ClusterView& working);

// CSV with columns r,transferred_index,dw.
void write_trace_csv(std::ostream& out, const SplitTrace& trace);

}  // namespace curbs

#endif  // CURBS_SPLITTING_HPP
