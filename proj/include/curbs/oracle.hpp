#ifndef CURBS_ORACLE_HPP
#define CURBS_ORACLE_HPP

// Population-level ("representative distribution") versions of the splitting
// algorithms. A set of observations is described only by how many of its
// members come from each of K base empirical distributions, and the set is
// replaced by the count-proportional mixture of those distributions. Every
// distance then reduces to a quadratic form over the K x K matrix of mean
// embedding inner products.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "curbs/kernel_space.hpp"
#include "curbs/matrix.hpp"
#include "curbs/splitting.hpp"

namespace curbs::oracle {

using Counts = std::vector<std::int64_t>;

struct PopulationSetup {
  std::vector<int> labels;          // population of each observation, 0..K-1
  std::vector<std::int64_t> sizes;  // n_1..n_K

  std::size_t k() const { return sizes.size(); }
  std::int64_t n() const;

  // Labels must cover 0..K-1 with every population nonempty.
  static PopulationSetup from_labels(std::vector<int> labels);
  // Contiguous labels: n_1 zeros, then n_2 ones, ...
  static PopulationSetup from_sizes(std::vector<std::int64_t> sizes);
};

class EmbeddingGram {
 public:
  // m(i,j) = <mu_i, mu_j>; must be square and symmetric.
  explicit EmbeddingGram(SquareMatrix m);

  std::size_t k() const { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const SquareMatrix& matrix() const { return m_; }

  // Squared MMD between base distributions i and j.
  double pairwise_d(std::size_t i, std::size_t j) const;
  SquareMatrix pairwise_d_matrix() const;

 private:
  SquareMatrix m_;
};

// Averages the observation Gram matrix over population blocks.
EmbeddingGram embedding_gram(const GramMatrix& gram, const PopulationSetup& setup);

// Count vector of a set of observations; weights are counts / total.
struct MixtureWeights {
  Counts counts;

  std::int64_t total() const;
  std::vector<double> weights() const;
};

// (w_a - w_b)^T m (w_a - w_b), tiny negatives clamped to 0.
double mixture_mmd(const EmbeddingGram& eg, const MixtureWeights& a, const MixtureWeights& b);

// Size-weighted mixture distance |S1||S2|/(|S1|+|S2|) * mixture_mmd. Evaluated
// as y^T m y / ((s1+s2) s1 s2) with the integer vector y = s2*c1 - s1*c2, so
// configurations that are equal as rationals produce identical doubles.
double dw_star(const EmbeddingGram& eg, const Counts& s1, const Counts& s2);

struct OracleTrace {
  std::vector<std::size_t> order;  // population moved at iteration r
  std::vector<double> dw_star;     // r = 1..n-1
  std::size_t n_max = 0;
  std::optional<std::size_t> n_min;
  double v = 1.0;
  double r_stat = 1.0;
  double h = 1.0;
};

struct OracleSplit {
  OracleTrace trace;
  Counts first;   // C1 at n_max
  Counts second;  // C2 at n_max
};

// Greedy transfers at population granularity over the set with the given
// counts. Candidates are the populations still present in C2; ties go to
// the smallest population index.
OracleSplit bs_star(const EmbeddingGram& eg, const Counts& counts);

// Counts of C1 after the first r transfers of a trace.
Counts prefix_counts(const OracleTrace& trace, std::size_t k, std::size_t r);

struct SccStarResult {
  OracleTrace trace;
  SccDecision decision = SccDecision::accept;
  bool degenerate = false;
};

// Single-cluster check on the population-level trace. A trace whose maximum
// is at or below kDegenerateFloor counts as one distribution (V* = 1,
// Accept). With n = 2 there is no N*_min and the decision is made by the
// degeneracy test alone.
SccStarResult scc_star(const EmbeddingGram& eg, const Counts& counts);

// True when C1 (if N*_min <= N*_max) or C2 (otherwise) at N*_min has the same
// population proportions as the corresponding side at N*_max. In that case
// V* equals R* exactly.
bool proportional_min_side(const OracleTrace& trace, const Counts& counts);

struct OracleClustering {
  std::vector<Counts> clusters;
  std::size_t k() const { return clusters.size(); }
};

OracleClustering curbs1_star(const EmbeddingGram& eg, const Counts& counts);
// Throws ParameterError unless 2 <= J <= total count.
OracleClustering curbs2_star(const EmbeddingGram& eg, const Counts& counts, std::size_t j);

// Every cluster is pure and every population sits in exactly one cluster.
bool is_perfect(const OracleClustering& c, std::size_t k_populations);
// J = K: perfect; J < K: no population spans two clusters; J > K: every
// cluster is pure.
bool satisfies_pop(const OracleClustering& c, std::size_t k_populations, std::size_t j);

// Pairwise distance between count-proportional mixtures expressed through
// base pairwise distances only:
//   d(sum a_i P_i, sum b_j P_j) = sum a_i b_j d_ij - 1/2 sum a_i a_j d_ij
//                                 - 1/2 sum b_i b_j d_ij.
double mixture_distance(const SquareMatrix& pairwise_d, const std::vector<double>& a,
                        const std::vector<double>& b);

// Piecewise closed form of the population-level d_w curve when populations
// are transferred whole, in the given order (a permutation of 0..K-1).
// K = 2 and K = 3 use their dedicated expressions; larger K uses the general
// segment formula with mixture distances from mixture_distance().
std::vector<double> closed_form_curve(const std::vector<std::int64_t>& sizes,
                                      const SquareMatrix& pairwise_d,
                                      const std::vector<std::size_t>& order);

// General segment formula for any K >= 2 (exposed for cross-checks).
std::vector<double> closed_form_curve_general(const std::vector<std::int64_t>& sizes,
                                              const SquareMatrix& pairwise_d);

// Inequalities describing the transfer order and curve shape, evaluated as
// printed (populations are taken in index order 1..K). Index vectors are
// 0-based views of the 1-based ranges documented per field.
struct ConditionReport {
  // K = 3 only.
  std::optional<bool> k3_first_over_second;  // population 1 beats 2 at r = 1
  std::optional<bool> k3_first_over_third;   // population 1 beats 3 at r = 1
  std::optional<bool> k3_second_before_third;
  std::optional<bool> k3_middle_increasing;
  std::optional<bool> k3_middle_decreasing;

  // K >= 3. first_pick[j-2] for j = 2..K.
  std::vector<bool> first_pick;
  // next_pick[l-1][j-l-2] for l = 1..K-2, j = l+2..K.
  std::vector<std::vector<bool>> next_pick;
  // segment_increasing[l-1], segment_decreasing[l-1] for l = 1..K-2.
  std::vector<bool> segment_increasing;
  std::vector<bool> segment_decreasing;

  // Exact greedy preference at every block boundary, derived from the
  // population-level d_w without approximation (strict).
  // exact_pick[l][j-l-1]: after populations 1..l moved, population l+1 is
  // strictly preferred to population j, for l = 0..K-2, j = l+2..K.
  std::vector<std::vector<bool>> exact_pick;

  bool printed_k3_order() const;  // K = 3: all three order conditions hold
  bool printed_general_order() const;
  bool exact_order() const;  // every exact_pick entry holds
};

ConditionReport check_conditions(const std::vector<std::int64_t>& sizes,
                                 const SquareMatrix& pairwise_d);

// A population order whose exact boundary preferences all hold strictly, if
// one exists. Under such an order the greedy population-level split moves
// whole populations in sequence and the curve follows the closed form.
// For K = 2 a tie (equal sizes) is resolved to the smaller index.
std::optional<std::vector<std::size_t>> certified_order(const std::vector<std::int64_t>& sizes,
                                                        const SquareMatrix& pairwise_d);

// Every sub-collection of at least two populations has a certified order.
bool certified_all_subsets(const std::vector<std::int64_t>& sizes, const SquareMatrix& pairwise_d);

// Doubling sizes with fixed proportions. Returns the smallest n in the
// sequence base, 2 base, 4 base, ... (up to `doublings` steps) from which
// N*_min = n-1 and H* > 1 hold for every later step checked.
struct CrossoverReport {
  std::vector<std::int64_t> n_values;
  std::vector<std::size_t> n_min_values;
  std::vector<double> h_values;
  std::optional<std::int64_t> crossover_n;
};
CrossoverReport doubling_crossover(const EmbeddingGram& eg, const std::vector<std::int64_t>& base,
                                   std::size_t doublings);

// CSV with columns r,dw_star.
void write_oracle_trace_csv(std::ostream& out, const OracleTrace& trace);

}  // namespace curbs::oracle

#endif  // CURBS_ORACLE_HPP
