#ifndef CURBS_MMD_CORE_HPP
#define CURBS_MMD_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curbs/kernel_space.hpp"

namespace curbs {

// Sorted set of distinct observation indices.
class ClusterView {
 public:
  ClusterView() = default;
  // Sorts; throws PreconditionError on duplicates.
  explicit ClusterView(std::vector<std::size_t> indices);

  // {0, 1, ..., n-1}
  static ClusterView all(std::size_t n);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  std::size_t front() const { return indices_.front(); }
  bool contains(std::size_t index) const;

  bool operator==(const ClusterView&) const = default;

 private:
  std::vector<std::size_t> indices_;
};

ClusterView merge_views(const ClusterView& a, const ClusterView& b);
bool disjoint(const ClusterView& a, const ClusterView& b);

// Sum of k(a, b) over a in A, b in B.
double kernel_block_sum(const GramMatrix& gram, const ClusterView& a, const ClusterView& b);

// V-statistic estimate of the squared MMD between the empirical measures of A
// and B. Values within 1e-12 below zero are returned as 0.
double mmd_squared(const GramMatrix& gram, const ClusterView& a, const ClusterView& b);

// Size-weighted squared MMD: |A||B|/(|A|+|B|) * mmd_squared(A, B).
// A and B must be nonempty and disjoint.
double dw(const GramMatrix& gram, const ClusterView& a, const ClusterView& b);

// Running kernel sums for moving observations one at a time from C2 to C1
// over a fixed working set E. Each transfer costs O(|E|); the d_w update uses
//   dw(C1 + c, C2 - c) = dw(C1, C2) + dw(C2 - c, {c}) - dw(C1, {c}).
// A ledger is single-owner mutable state over a read-only GramMatrix.
class TransferLedger {
 public:
  struct Candidate {
    std::size_t index;  // observation index
    double dw;          // d_w after moving it
  };

  // C1 = {}, C2 = working. Requires |working| >= 2.
  TransferLedger(const GramMatrix& gram, ClusterView working);

  std::size_t working_size() const { return working_.size(); }
  std::size_t c1_size() const { return n1_; }
  std::size_t c2_size() const { return working_.size() - n1_; }
  ClusterView c1() const;
  ClusterView c2() const;
  const ClusterView& working() const { return working_; }
  bool in_c1(std::size_t index) const;

  // S1(c) = sum_{a in C1} k(c, a), S2(c) = sum_{b in C2} k(c, b).
  double s1(std::size_t index) const { return s1_[local(index)]; }
  double s2(std::size_t index) const { return s2_[local(index)]; }
  double w11() const { return w11_; }
  double w22() const { return w22_; }

  // Undefined while C1 is empty.
  std::optional<double> current_dw() const { return dw_; }

  // d_w after moving `index` (must be in C2), without mutating.
  double dw_after(std::size_t index) const;

  // Maximizer of dw_after over C2; smallest index on ties. Requires |C2| >= 2.
  Candidate best_transfer() const;

  // Moves `index` from C2 to C1 and returns the new d_w. C2 must keep at
  // least one element.
  double transfer(std::size_t index);

  // Number of per-observation running-sum updates performed so far.
  std::uint64_t kernel_updates() const { return kernel_updates_; }

 private:
  std::size_t local(std::size_t index) const;
  double dw_after_local(std::size_t pos) const;

  const GramMatrix* gram_;
  ClusterView working_;
  std::vector<char> in_c1_;
  std::vector<double> s1_;
  std::vector<double> s2_;
  double w11_ = 0.0;
  double w22_ = 0.0;
  std::size_t n1_ = 0;
  std::optional<double> dw_;
  std::uint64_t kernel_updates_ = 0;
};

}  // namespace curbs

#endif  // CURBS_MMD_CORE_HPP
