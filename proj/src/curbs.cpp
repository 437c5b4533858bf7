#include "curbs/curbs.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "curbs/errors.hpp"

namespace curbs {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::size_t> parent_;
};

void sort_by_front(std::vector<ClusterView>& clusters) {
  std::sort(clusters.begin(), clusters.end(),
            [](const ClusterView& a, const ClusterView& b) { return a.front() < b.front(); });
}

void curbs1_recurse(const GramMatrix& gram, const ClusterView& view,
                    std::vector<ClusterView>& done, std::vector<SplitTrace>& traces) {
  if (view.size() < 2) {
    done.push_back(view);
    return;
  }
  SccResult check = scc_check(gram, view);
  if (check.diagnostics.decision == SccDecision::accept) {
    done.push_back(view);
    return;
  }
  BinarySplit split = split_at_max(check.trace, view);
  traces.push_back(std::move(check.trace));
  if (split.second.front() < split.first.front()) std::swap(split.first, split.second);
  curbs1_recurse(gram, split.first, done, traces);
  curbs1_recurse(gram, split.second, done, traces);
}

}  // namespace

Clustering clustering_from_views(const std::vector<ClusterView>& clusters, std::size_t n,
                                 std::vector<SplitTrace> traces) {
  std::vector<ClusterView> sorted = clusters;
  sort_by_front(sorted);
  Clustering out;
  out.labels.assign(n, -1);
  for (std::size_t c = 0; c < sorted.size(); ++c) {
    if (sorted[c].empty()) throw PreconditionError("empty cluster");
    for (std::size_t i : sorted[c].indices()) {
      if (i >= n || out.labels[i] != -1) throw PreconditionError("clusters do not partition 0..n-1");
      out.labels[i] = static_cast<int>(c);
    }
  }
  if (std::find(out.labels.begin(), out.labels.end(), -1) != out.labels.end()) {
    throw PreconditionError("clusters do not cover 0..n-1");
  }
  out.k = static_cast<int>(sorted.size());
  out.traces = std::move(traces);
  return out;
}

Clustering curbs1(const GramMatrix& gram) {
  if (gram.size() == 0) throw PreconditionError("curbs1 needs n >= 1");
  std::vector<ClusterView> done;
  std::vector<SplitTrace> traces;
  curbs1_recurse(gram, ClusterView::all(gram.size()), done, traces);
  return clustering_from_views(done, gram.size(), std::move(traces));
}

Clustering curbs1(const FunctionalDataset& data, const KernelConfig& config) {
  if (data.size() == 1) return clustering_from_views({ClusterView::all(1)}, 1);
  return curbs1(gram_matrix(data, config));
}

std::vector<std::vector<std::size_t>> merge_plan(const SquareMatrix& distances, std::size_t target) {
  const std::size_t count = distances.size();
  if (target < 1 || target >= count) {
    throw ParameterError("merge target must satisfy 1 <= target < number of clusters");
  }
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(distances(i, j), i, j);
  }
  std::sort(pairs.begin(), pairs.end());

  DisjointSets sets(count);
  std::size_t groups = count;
  std::vector<char> merged(count, 0);
  for (const auto& [d, i, j] : pairs) {
    if (groups == target) break;
    if (merged[i] || merged[j]) continue;
    sets.unite(i, j);
    merged[i] = merged[j] = 1;
    --groups;
  }
  // Fallback once disjoint pairs are exhausted.
  for (const auto& [d, i, j] : pairs) {
    if (groups == target) break;
    if (sets.find(i) == sets.find(j)) continue;
    sets.unite(i, j);
    --groups;
  }

  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == count) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(i);
  }
  return out;
}

std::vector<ClusterView> merge_stage(const std::vector<ClusterView>& clusters,
                                     const GramMatrix& gram, std::size_t target_count) {
  if (target_count < 1 || clusters.size() <= target_count) {
    throw ParameterError("merge_stage needs |clusters| > target_count >= 1");
  }
  const std::size_t c = clusters.size();
  std::vector<double> within(c);
  for (std::size_t i = 0; i < c; ++i) within[i] = kernel_block_sum(gram, clusters[i], clusters[i]);
  SquareMatrix d(c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      if (!disjoint(clusters[i], clusters[j])) throw PreconditionError("clusters overlap");
      const double ni = static_cast<double>(clusters[i].size());
      const double nj = static_cast<double>(clusters[j].size());
      double mmd = within[i] / (ni * ni) + within[j] / (nj * nj) -
                   2.0 * kernel_block_sum(gram, clusters[i], clusters[j]) / (ni * nj);
      mmd = std::max(mmd, 0.0);
      d(i, j) = d(j, i) = ni * nj / (ni + nj) * mmd;
    }
  }
  std::vector<ClusterView> out;
  for (const auto& group : merge_plan(d, target_count)) {
    ClusterView acc = clusters[group.front()];
    for (std::size_t g = 1; g < group.size(); ++g) acc = merge_views(acc, clusters[group[g]]);
    out.push_back(std::move(acc));
  }
  sort_by_front(out);
  return out;
}

Clustering curbs2(const GramMatrix& gram, std::size_t j) {
  const std::size_t n = gram.size();
  if (j < 2 || j > n) throw ParameterError("J must satisfy 2 <= J <= n");
  std::vector<SplitTrace> traces;
  BinarySplit first = binary_split(gram, ClusterView::all(n));
  traces.push_back(first.trace);
  std::vector<ClusterView> clusters{std::move(first.first), std::move(first.second)};
  sort_by_front(clusters);

  for (std::size_t stage = 2; stage < j; ++stage) {
    std::vector<ClusterView> next;
    for (const ClusterView& c : clusters) {
      if (c.size() < 2) {
        next.push_back(c);
        continue;
      }
      BinarySplit s = binary_split(gram, c);
      traces.push_back(s.trace);
      next.push_back(std::move(s.first));
      next.push_back(std::move(s.second));
    }
    sort_by_front(next);
    if (next.size() > stage + 1) next = merge_stage(next, gram, stage + 1);
    clusters = std::move(next);
  }
  return clustering_from_views(clusters, n, std::move(traces));
}

Clustering curbs2(const FunctionalDataset& data, std::size_t j, const KernelConfig& config) {
  if (j < 2 || j > data.size()) throw ParameterError("J must satisfy 2 <= J <= n");
  return curbs2(gram_matrix(data, config), j);
}

}  // namespace curbs
