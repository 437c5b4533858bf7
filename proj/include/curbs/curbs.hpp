#ifndef CURBS_CURBS_HPP
#define CURBS_CURBS_HPP

#include <cstddef>
#include <vector>

#include "curbs/matrix.hpp"
#include "curbs/splitting.hpp"

namespace curbs {

// Final partition. Labels are canonical: the cluster holding observation 0 is
// label 0, the next cluster by smallest member is label 1, and so on.
struct Clustering {
  std::vector<int> labels;
  int k = 0;
  std::vector<SplitTrace> traces;  // one per binary split performed
};

Clustering clustering_from_views(const std::vector<ClusterView>& clusters, std::size_t n,
                                 std::vector<SplitTrace> traces = {});

// Unknown number of clusters: recursive single-cluster check + binary split,
// depth first with the child holding the smaller index processed first.
Clustering curbs1(const GramMatrix& gram);
Clustering curbs1(const FunctionalDataset& data, const KernelConfig& config);

// Fixed number of clusters J in [2, n]: split every cluster, then merge the
// closest pairs until the stage has one more cluster than the previous one.
Clustering curbs2(const GramMatrix& gram, std::size_t j);
Clustering curbs2(const FunctionalDataset& data, std::size_t j, const KernelConfig& config);

// Groups of item indices after greedy merging of `count` items down to
// `target` groups. Pairs are taken in ascending distance (ties by index pair);
// each item takes part in at most one merge until disjoint pairs run out,
// after which merges of already-merged groups are allowed. Groups are
// ordered by their smallest member.
std::vector<std::vector<std::size_t>> merge_plan(const SquareMatrix& distances, std::size_t target);

// Merges clusters by pairwise d_w until exactly `target_count` remain.
std::vector<ClusterView> merge_stage(const std::vector<ClusterView>& clusters,
                                     const GramMatrix& gram, std::size_t target_count);

}  // namespace curbs

#endif  // CURBS_CURBS_HPP
