#include "curbs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "curbs/curbs.hpp"
#include "curbs/errors.hpp"

namespace curbs::oracle {

namespace {

constexpr double kNegativeTolerance = 1e-12;

std::int64_t total_of(const Counts& c) {
  std::int64_t s = 0;
  for (std::int64_t v : c) {
    if (v < 0) throw PreconditionError("negative population count");
    s += v;
  }
  return s;
}

void check_k(const EmbeddingGram& eg, const Counts& c) {
  if (c.size() != eg.k()) {
    throw DimensionError("count vector has " + std::to_string(c.size()) +
                         " entries, embedding Gram has K = " + std::to_string(eg.k()));
  }
}

void check_pairwise(const std::vector<std::int64_t>& sizes, const SquareMatrix& d) {
  if (d.size() != sizes.size()) throw DimensionError("sizes and pairwise distances disagree on K");
  for (std::int64_t s : sizes) {
    if (s < 1) throw PreconditionError("population sizes must be >= 1");
  }
}

std::int64_t sum_range(const std::vector<std::int64_t>& sizes, std::size_t from, std::size_t to) {
  std::int64_t s = 0;
  for (std::size_t i = from; i < to; ++i) s += sizes[i];
  return s;
}

// Weights n_i / sum over [from, to), zero elsewhere.
std::vector<double> block_weights(const std::vector<std::int64_t>& sizes, std::size_t from,
                                  std::size_t to) {
  std::vector<double> w(sizes.size(), 0.0);
  const double total = static_cast<double>(sum_range(sizes, from, to));
  for (std::size_t i = from; i < to; ++i) w[i] = static_cast<double>(sizes[i]) / total;
  return w;
}

std::vector<double> unit(std::size_t k, std::size_t i) {
  std::vector<double> w(k, 0.0);
  w[i] = 1.0;
  return w;
}

// Greedy preference score of candidate x once the populations flagged in
// `moved` (A observations in total) sit in C1.
double boundary_score(const std::vector<std::int64_t>& sizes, const SquareMatrix& d,
                      const std::vector<char>& moved, std::size_t x) {
  const double n = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0}));
  double a = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (moved[i]) a += static_cast<double>(sizes[i]);
  }
  double in_c1 = 0.0;
  double in_c2 = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double term = static_cast<double>(sizes[i]) * d(x, i);
    (moved[i] ? in_c1 : in_c2) += term;
  }
  return (a + 1.0) * in_c2 - (n - a - 1.0) * in_c1;
}

SquareMatrix permuted(const SquareMatrix& d, const std::vector<std::size_t>& order) {
  SquareMatrix out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) out(i, j) = d(order[i], order[j]);
  }
  return out;
}

OracleTrace with_statistics(OracleTrace trace, std::int64_t n) {
  trace.n_min = trace_argmin_excluding(trace.dw_star, trace.n_max);
  const double nn = static_cast<double>(n);
  const double a = static_cast<double>(trace.n_max);
  const double b = static_cast<double>(*trace.n_min);
  trace.h = a * (nn - a) / (b * (nn - b));
  trace.r_stat = *trace.n_min <= trace.n_max ? a * (nn - b) / (b * (nn - a))
                                             : b * (nn - a) / (a * (nn - b));
  return trace;
}

bool proportional(const Counts& x, const Counts& y) {
  const std::int64_t tx = total_of(x);
  const std::int64_t ty = total_of(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] * ty != y[i] * tx) return false;
  }
  return true;
}

void curbs1_star_recurse(const EmbeddingGram& eg, const Counts& counts, OracleClustering& out) {
  if (total_of(counts) < 2) {
    out.clusters.push_back(counts);
    return;
  }
  SccStarResult check = scc_star(eg, counts);
  if (check.decision == SccDecision::accept) {
    out.clusters.push_back(counts);
    return;
  }
  Counts first = prefix_counts(check.trace, counts.size(), check.trace.n_max);
  Counts second(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) second[i] = counts[i] - first[i];
  curbs1_star_recurse(eg, first, out);
  curbs1_star_recurse(eg, second, out);
}

}  // namespace

std::int64_t PopulationSetup::n() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
}

PopulationSetup PopulationSetup::from_labels(std::vector<int> labels) {
  if (labels.empty()) throw PreconditionError("population labels are empty");
  const int max_label = *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0) {
    throw PreconditionError("population labels must be >= 0");
  }
  PopulationSetup s;
  s.sizes.assign(static_cast<std::size_t>(max_label) + 1, 0);
  for (int l : labels) ++s.sizes[static_cast<std::size_t>(l)];
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    if (s.sizes[i] == 0) throw PreconditionError("population " + std::to_string(i) + " is empty");
  }
  s.labels = std::move(labels);
  return s;
}

PopulationSetup PopulationSetup::from_sizes(std::vector<std::int64_t> sizes) {
  std::vector<int> labels;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw PreconditionError("population " + std::to_string(i) + " is empty");
    labels.insert(labels.end(), static_cast<std::size_t>(sizes[i]), static_cast<int>(i));
  }
  return from_labels(std::move(labels));
}

EmbeddingGram::EmbeddingGram(SquareMatrix m) : m_(std::move(m)) {
  if (m_.size() == 0) throw PreconditionError("embedding Gram needs K >= 1");
  for (std::size_t i = 0; i < m_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double a = m_(i, j);
      const double b = m_(j, i);
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
        throw PreconditionError("embedding Gram must be symmetric");
      }
    }
  }
}

double EmbeddingGram::pairwise_d(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const double v = m_(i, i) + m_(j, j) - 2.0 * m_(i, j);
  return (v < 0.0 && v >= -kNegativeTolerance) ? 0.0 : v;
}

SquareMatrix EmbeddingGram::pairwise_d_matrix() const {
  SquareMatrix d(k());
  for (std::size_t i = 0; i < k(); ++i) {
    for (std::size_t j = 0; j < k(); ++j) d(i, j) = pairwise_d(i, j);
  }
  return d;
}

EmbeddingGram embedding_gram(const GramMatrix& gram, const PopulationSetup& setup) {
  if (setup.labels.size() != gram.size()) {
    throw DimensionError("population labels do not match Gram matrix size");
  }
  const std::size_t k = setup.k();
  for (std::size_t i = 0; i < k; ++i) {
    if (setup.sizes[i] < 1) throw PreconditionError("empty population");
  }
  SquareMatrix sums(k);
  for (std::size_t a = 0; a < gram.size(); ++a) {
    const auto row = gram.row(a);
    const auto la = static_cast<std::size_t>(setup.labels[a]);
    for (std::size_t b = 0; b < gram.size(); ++b) {
      sums(la, static_cast<std::size_t>(setup.labels[b])) += row[b];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      sums(i, j) /= static_cast<double>(setup.sizes[i]) * static_cast<double>(setup.sizes[j]);
    }
  }
  // Symmetrize away summation-order noise.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) sums(i, j) = sums(j, i);
  }
  return EmbeddingGram(std::move(sums));
}

std::int64_t MixtureWeights::total() const { return total_of(counts); }

std::vector<double> MixtureWeights::weights() const {
  const std::int64_t t = total();
  if (t == 0) throw PreconditionError("mixture with all-zero counts");
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    w[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
  }
  return w;
}

double mixture_mmd(const EmbeddingGram& eg, const MixtureWeights& a, const MixtureWeights& b) {
  check_k(eg, a.counts);
  check_k(eg, b.counts);
  const auto wa = a.weights();
  const auto wb = b.weights();
  std::vector<double> diff(eg.k());
  for (std::size_t i = 0; i < eg.k(); ++i) diff[i] = wa[i] - wb[i];
  double q = 0.0;
  for (std::size_t i = 0; i < eg.k(); ++i) {
    for (std::size_t j = 0; j < eg.k(); ++j) q += diff[i] * diff[j] * eg(i, j);
  }
  return (q < 0.0 && q >= -kNegativeTolerance) ? 0.0 : q;
}

double dw_star(const EmbeddingGram& eg, const Counts& s1, const Counts& s2) {
  check_k(eg, s1);
  check_k(eg, s2);
  const std::int64_t t1 = total_of(s1);
  const std::int64_t t2 = total_of(s2);
  if (t1 == 0 || t2 == 0) throw PreconditionError("dw_star needs nonempty sets");
  const std::size_t k = eg.k();
  std::vector<double> y(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = static_cast<double>(t2 * s1[i] - t1 * s2[i]);
  double q = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) q += y[i] * y[j] * eg(i, j);
  }
  const double denom = static_cast<double>(t1 + t2) * static_cast<double>(t1) *
                       static_cast<double>(t2);
  return std::max(q, 0.0) / denom;
}

OracleSplit bs_star(const EmbeddingGram& eg, const Counts& counts) {
  check_k(eg, counts);
  const std::int64_t n = total_of(counts);
  if (n < 2) throw PreconditionError("bs_star needs at least two observations");
  const std::size_t k = counts.size();
  Counts c1(k, 0);
  Counts c2 = counts;
  OracleTrace trace;
  trace.order.reserve(static_cast<std::size_t>(n - 1));
  trace.dw_star.reserve(static_cast<std::size_t>(n - 1));
  for (std::int64_t r = 1; r < n; ++r) {
    std::optional<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (c2[j] == 0) continue;
      ++c1[j];
      --c2[j];
      const double v = dw_star(eg, c1, c2);
      --c1[j];
      ++c2[j];
      if (!best || v > best_value) {
        best = j;
        best_value = v;
      }
    }
    ++c1[*best];
    --c2[*best];
    trace.order.push_back(*best);
    trace.dw_star.push_back(best_value);
  }
  trace.n_max = trace_argmax(trace.dw_star);
  OracleSplit out;
  out.first = prefix_counts(trace, k, trace.n_max);
  out.second.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.second[i] = counts[i] - out.first[i];
  out.trace = std::move(trace);
  return out;
}

Counts prefix_counts(const OracleTrace& trace, std::size_t k, std::size_t r) {
  if (r > trace.order.size()) throw PreconditionError("prefix longer than the trace");
  Counts c(k, 0);
  for (std::size_t i = 0; i < r; ++i) ++c[trace.order[i]];
  return c;
}

SccStarResult scc_star(const EmbeddingGram& eg, const Counts& counts) {
  const std::int64_t n = total_of(counts);
  SccStarResult out;
  out.trace = bs_star(eg, counts).trace;
  const double vmax = out.trace.dw_star[out.trace.n_max - 1];
  if (n == 2) {
    out.degenerate = true;
    out.decision = vmax <= kDegenerateFloor ? SccDecision::accept : SccDecision::reject;
    return out;
  }
  out.trace = with_statistics(std::move(out.trace), n);
  if (vmax <= kDegenerateFloor) {
    out.trace.v = 1.0;
    out.degenerate = true;
    out.decision = SccDecision::accept;
    return out;
  }
  const double vmin = *std::min_element(out.trace.dw_star.begin(), out.trace.dw_star.end());
  out.trace.v = vmin > 0.0 ? vmax / vmin : std::numeric_limits<double>::infinity();
  const double v = out.trace.v;
  const bool accept = std::abs(v - out.trace.r_stat / out.trace.h) > std::abs(v - 1.0);
  out.decision = accept ? SccDecision::accept : SccDecision::reject;
  return out;
}

bool proportional_min_side(const OracleTrace& trace, const Counts& counts) {
  if (!trace.n_min) return false;
  const std::size_t k = counts.size();
  const Counts c1_max = prefix_counts(trace, k, trace.n_max);
  const Counts c1_min = prefix_counts(trace, k, *trace.n_min);
  if (*trace.n_min <= trace.n_max) return proportional(c1_min, c1_max);
  Counts c2_max(k);
  Counts c2_min(k);
  for (std::size_t i = 0; i < k; ++i) {
    c2_max[i] = counts[i] - c1_max[i];
    c2_min[i] = counts[i] - c1_min[i];
  }
  return proportional(c2_min, c2_max);
}

OracleClustering curbs1_star(const EmbeddingGram& eg, const Counts& counts) {
  check_k(eg, counts);
  if (total_of(counts) < 1) throw PreconditionError("curbs1_star needs observations");
  OracleClustering out;
  curbs1_star_recurse(eg, counts, out);
  return out;
}

OracleClustering curbs2_star(const EmbeddingGram& eg, const Counts& counts, std::size_t j) {
  check_k(eg, counts);
  const std::int64_t n = total_of(counts);
  if (j < 2 || static_cast<std::int64_t>(j) > n) {
    throw ParameterError("J must satisfy 2 <= J <= n");
  }
  const std::size_t k = counts.size();
  OracleSplit first = bs_star(eg, counts);
  std::vector<Counts> clusters{first.first, first.second};
  for (std::size_t stage = 2; stage < j; ++stage) {
    std::vector<Counts> next;
    for (const Counts& c : clusters) {
      if (total_of(c) < 2) {
        next.push_back(c);
        continue;
      }
      OracleSplit s = bs_star(eg, c);
      next.push_back(std::move(s.first));
      next.push_back(std::move(s.second));
    }
    if (next.size() > stage + 1) {
      SquareMatrix d(next.size());
      for (std::size_t a = 0; a < next.size(); ++a) {
        for (std::size_t b = a + 1; b < next.size(); ++b) {
          d(a, b) = d(b, a) = dw_star(eg, next[a], next[b]);
        }
      }
      std::vector<Counts> merged;
      for (const auto& group : merge_plan(d, stage + 1)) {
        Counts acc(k, 0);
        for (std::size_t g : group) {
          for (std::size_t i = 0; i < k; ++i) acc[i] += next[g][i];
        }
        merged.push_back(std::move(acc));
      }
      next = std::move(merged);
    }
    clusters = std::move(next);
  }
  return OracleClustering{std::move(clusters)};
}

namespace {

std::size_t nonzero_count(const Counts& c) {
  return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](std::int64_t v) { return v > 0; }));
}

bool populations_unsplit(const OracleClustering& c, std::size_t k) {
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t holders = 0;
    for (const Counts& cl : c.clusters) {
      if (cl.size() != k) return false;
      if (cl[p] > 0) ++holders;
    }
    if (holders != 1) return false;
  }
  return true;
}

bool clusters_pure(const OracleClustering& c) {
  return std::all_of(c.clusters.begin(), c.clusters.end(),
                     [](const Counts& cl) { return nonzero_count(cl) == 1; });
}

}  // namespace

bool is_perfect(const OracleClustering& c, std::size_t k_populations) {
  return c.k() == k_populations && clusters_pure(c) && populations_unsplit(c, k_populations);
}

bool satisfies_pop(const OracleClustering& c, std::size_t k_populations, std::size_t j) {
  if (c.k() != j) return false;
  if (j == k_populations) return is_perfect(c, k_populations);
  if (j < k_populations) return populations_unsplit(c, k_populations);
  return clusters_pure(c);
}

double mixture_distance(const SquareMatrix& d, const std::vector<double>& a,
                        const std::vector<double>& b) {
  const std::size_t k = d.size();
  if (a.size() != k || b.size() != k) throw DimensionError("mixture weights do not match K");
  double cross = 0.0;
  double within_a = 0.0;
  double within_b = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      cross += a[i] * b[j] * d(i, j);
      within_a += a[i] * a[j] * d(i, j);
      within_b += b[i] * b[j] * d(i, j);
    }
  }
  return cross - 0.5 * within_a - 0.5 * within_b;
}

std::vector<double> closed_form_curve_general(const std::vector<std::int64_t>& sizes,
                                              const SquareMatrix& d) {
  check_pairwise(sizes, d);
  const std::size_t k = sizes.size();
  if (k < 2) throw ParameterError("closed-form curve needs K >= 2");
  const std::int64_t n_int = sum_range(sizes, 0, k);
  const double n = static_cast<double>(n_int);

  // First segment constant: (n - n_1) sum_{i>1} n_i d(1,i) - 1/2 sum_{i,j>1} n_i n_j d(i,j).
  double first = 0.0;
  double first_within = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    first += static_cast<double>(sizes[i]) * d(0, i);
    for (std::size_t j = 1; j < k; ++j) {
      first_within += static_cast<double>(sizes[i]) * static_cast<double>(sizes[j]) * d(i, j);
    }
  }
  first = (n - static_cast<double>(sizes[0])) * first - 0.5 * first_within;

  double last = 0.0;
  double last_within = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    last += static_cast<double>(sizes[i]) * d(i, k - 1);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      last_within += static_cast<double>(sizes[i]) * static_cast<double>(sizes[j]) * d(i, j);
    }
  }
  last = (n - static_cast<double>(sizes[k - 1])) * last - 0.5 * last_within;

  // Middle segment pieces for populations 1..K-2 (0-based p).
  struct Middle {
    double a, b, np, d_left, d_right, d_outer;
  };
  std::vector<Middle> middle;
  for (std::size_t p = 1; p + 1 < k; ++p) {
    const auto left = block_weights(sizes, 0, p);
    const auto right = block_weights(sizes, p + 1, k);
    const auto self = unit(k, p);
    middle.push_back(Middle{static_cast<double>(sum_range(sizes, 0, p)),
                            static_cast<double>(sum_range(sizes, p + 1, k)),
                            static_cast<double>(sizes[p]), mixture_distance(d, left, self),
                            mixture_distance(d, self, right), mixture_distance(d, left, right)});
  }

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_int - 1));
  const std::int64_t end_first = sizes[0];
  const std::int64_t start_last = n_int - sizes[k - 1];
  for (std::int64_t ri = 1; ri < n_int; ++ri) {
    const double r = static_cast<double>(ri);
    if (ri <= end_first) {
      out.push_back(r / (n * (n - r)) * first);
    } else if (ri > start_last) {
      out.push_back((n - r) / (r * n) * last);
    } else {
      std::size_t p = 1;
      while (ri > sum_range(sizes, 0, p + 1)) ++p;
      const Middle& m = middle[p - 1];
      out.push_back((n * m.a - r * (n - m.np)) / n *
                        (m.a / r * m.d_left - m.b / (n - r) * m.d_right) +
                    m.a * m.b / n * m.d_outer);
    }
  }
  return out;
}

std::vector<double> closed_form_curve(const std::vector<std::int64_t>& sizes,
                                      const SquareMatrix& pairwise_d,
                                      const std::vector<std::size_t>& order) {
  check_pairwise(sizes, pairwise_d);
  const std::size_t k = sizes.size();
  if (k < 2) throw ParameterError("closed-form curve needs K >= 2");
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != k || sorted[i] != i) {
      throw PreconditionError("transfer order must be a permutation of 0..K-1");
    }
  }
  std::vector<std::int64_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = sizes[order[i]];
  const SquareMatrix d = permuted(pairwise_d, order);
  if (k > 3) return closed_form_curve_general(s, d);

  const std::int64_t n_int = sum_range(s, 0, k);
  const double n = static_cast<double>(n_int);
  const double n1 = static_cast<double>(s[0]);
  const double n2 = static_cast<double>(s[1]);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_int - 1));
  if (k == 2) {
    const double d12 = d(0, 1);
    for (std::int64_t ri = 1; ri < n_int; ++ri) {
      const double r = static_cast<double>(ri);
      out.push_back(ri <= s[0] ? r * n2 * n2 / (n * (n - r)) * d12
                               : n1 * n1 * (n - r) / (r * n) * d12);
    }
    return out;
  }
  const double n3 = static_cast<double>(s[2]);
  const double d12 = d(0, 1);
  const double d13 = d(0, 2);
  const double d23 = d(1, 2);
  for (std::int64_t ri = 1; ri < n_int; ++ri) {
    const double r = static_cast<double>(ri);
    if (ri <= s[0]) {
      out.push_back(r / (n * (n - r)) *
                    (n2 * (n2 + n3) * d12 + n3 * (n2 + n3) * d13 - n2 * n3 * d23));
    } else if (ri <= s[0] + s[1]) {
      out.push_back((n * n1 - r * (n1 + n3)) / n * (n1 / r * d12 - n3 / (n - r) * d23) +
                    n1 * n3 / n * d13);
    } else {
      out.push_back((n - r) / (r * n) *
                    (n2 * (n1 + n2) * d23 + n1 * (n1 + n2) * d13 - n1 * n2 * d12));
    }
  }
  return out;
}

bool ConditionReport::printed_k3_order() const {
  return k3_first_over_second.value_or(false) && k3_first_over_third.value_or(false) &&
         k3_second_before_third.value_or(false);
}

bool ConditionReport::printed_general_order() const {
  if (first_pick.empty()) return false;
  for (bool b : first_pick) {
    if (!b) return false;
  }
  for (const auto& row : next_pick) {
    for (bool b : row) {
      if (!b) return false;
    }
  }
  return true;
}

bool ConditionReport::exact_order() const {
  for (const auto& row : exact_pick) {
    for (bool b : row) {
      if (!b) return false;
    }
  }
  return true;
}

ConditionReport check_conditions(const std::vector<std::int64_t>& sizes, const SquareMatrix& d) {
  check_pairwise(sizes, d);
  const std::size_t k = sizes.size();
  ConditionReport rep;
  const double n = static_cast<double>(sum_range(sizes, 0, k));
  auto sz = [&](std::size_t i) { return static_cast<double>(sizes[i]); };

  if (k == 3) {
    const double n1 = sz(0), n2 = sz(1), n3 = sz(2);
    const double d12 = d(0, 1), d13 = d(0, 2), d23 = d(1, 2);
    rep.k3_first_over_second = (n2 - n1) * d12 + n3 * (d13 - d23) >= 0.0;
    rep.k3_first_over_third = (n3 - n1) * d13 + n2 * (d12 - d23) >= 0.0;
    rep.k3_second_before_third =
        n1 * (n2 + n3 - 1.0) * (d13 - d12) + (n3 - n2) * (n1 + 1.0) * d23 >= 0.0;
    rep.k3_middle_increasing = n1 / (n1 + 1.0) * d12 < n3 * n3 / ((n2 + n3) * (n2 + n3 - 1.0)) * d23;
    rep.k3_middle_decreasing = n3 / (n3 + 1.0) * d23 < n1 * n1 / ((n1 + n2) * (n1 + n2 - 1.0)) * d12;
  }

  if (k >= 3) {
    auto weighted_sum = [&](std::size_t x, std::size_t from, std::size_t to) {
      double s = 0.0;
      for (std::size_t i = from; i < to; ++i) s += sz(i) * d(x, i);
      return s;
    };
    const double lhs = (n * n - n - n * sz(0) + 1.0) * weighted_sum(0, 0, k);
    for (std::size_t j = 1; j < k; ++j) {
      rep.first_pick.push_back(lhs > (n * n - n - n * sz(j) + 1.0) * weighted_sum(j, 0, k));
    }
    for (std::size_t l = 1; l + 1 < k; ++l) {
      const std::size_t p = l;  // population l+1 in 1-based terms
      const double a = static_cast<double>(sum_range(sizes, 0, l));
      const double rest = static_cast<double>(sum_range(sizes, l, k));
      std::vector<bool> row;
      for (std::size_t j = l + 1; j < k; ++j) {
        double t1 = 0.0;
        for (std::size_t i = 0; i < l; ++i) t1 += sz(i) * (d(i, j) - d(i, p));
        double t2 = 0.0;
        double t3 = 0.0;
        for (std::size_t i = l; i < k; ++i) {
          t2 += sz(i) * ((sz(j) - 1.0) * d(i, j) - (sz(p) - 1.0) * d(i, p));
          t3 += sz(i) * (d(i, p) - d(i, j));
        }
        const double total = n * (rest - 1.0) * t1 + (a + 1.0) * (a + 1.0) * t2 +
                             (a + 1.0) * (rest - 1.0) * t3;
        row.push_back(total > 0.0);
      }
      rep.next_pick.push_back(std::move(row));

      const auto left = block_weights(sizes, 0, l);
      const auto right = block_weights(sizes, l + 1, k);
      const auto self = unit(k, p);
      const double d_left = mixture_distance(d, left, self);
      const double d_right = mixture_distance(d, self, right);
      const double b = static_cast<double>(sum_range(sizes, l + 1, k));
      rep.segment_increasing.push_back(a / (a + 1.0) * d_left <
                                       b * b / (rest * (rest - 1.0)) * d_right);
      const double head = a + sz(p);
      rep.segment_decreasing.push_back(b / (b + 1.0) * d_right <
                                       a * a / (head * (head - 1.0)) * d_left);
    }
  }

  std::vector<char> moved(k, 0);
  for (std::size_t l = 0; l + 1 < k; ++l) {
    const double sp = boundary_score(sizes, d, moved, l);
    std::vector<bool> row;
    for (std::size_t j = l + 1; j < k; ++j) row.push_back(sp > boundary_score(sizes, d, moved, j));
    rep.exact_pick.push_back(std::move(row));
    moved[l] = 1;
  }
  return rep;
}

std::optional<std::vector<std::size_t>> certified_order(const std::vector<std::int64_t>& sizes,
                                                        const SquareMatrix& d) {
  check_pairwise(sizes, d);
  const std::size_t k = sizes.size();
  std::vector<char> moved(k, 0);
  std::vector<std::size_t> order;
  for (std::size_t step = 0; step + 1 < k; ++step) {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    bool unique = true;
    for (std::size_t x = 0; x < k; ++x) {
      if (moved[x]) continue;
      const double s = boundary_score(sizes, d, moved, x);
      if (!best || s > best_score) {
        best = x;
        best_score = s;
        unique = true;
      } else if (s == best_score) {
        unique = false;
      }
    }
    // Two populations tie only when their sizes match; the curve is then the
    // same for either order and the greedy takes the smaller index.
    if (!unique && k != 2) return std::nullopt;
    order.push_back(*best);
    moved[*best] = 1;
  }
  for (std::size_t x = 0; x < k; ++x) {
    if (!moved[x]) order.push_back(x);
  }
  return order;
}

bool certified_all_subsets(const std::vector<std::int64_t>& sizes, const SquareMatrix& d) {
  check_pairwise(sizes, d);
  const std::size_t k = sizes.size();
  if (k > 20) throw ParameterError("subset certification limited to K <= 20");
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    if (members.size() < 2) continue;
    std::vector<std::int64_t> sub_sizes;
    for (std::size_t i : members) sub_sizes.push_back(sizes[i]);
    SquareMatrix sub_d(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = 0; b < members.size(); ++b) sub_d(a, b) = d(members[a], members[b]);
    }
    if (!certified_order(sub_sizes, sub_d)) return false;
  }
  return true;
}

CrossoverReport doubling_crossover(const EmbeddingGram& eg, const std::vector<std::int64_t>& base,
                                   std::size_t doublings) {
  CrossoverReport rep;
  std::vector<char> ok;
  Counts counts = base;
  for (std::size_t step = 0; step <= doublings; ++step) {
    const std::int64_t n = total_of(counts);
    if (n < 3) throw PreconditionError("crossover scan needs n >= 3");
    OracleTrace t = with_statistics(bs_star(eg, counts).trace, n);
    rep.n_values.push_back(n);
    rep.n_min_values.push_back(*t.n_min);
    rep.h_values.push_back(t.h);
    ok.push_back(static_cast<std::int64_t>(*t.n_min) == n - 1 && t.h > 1.0);
    for (auto& c : counts) c *= 2;
  }
  for (std::size_t s = ok.size(); s-- > 0;) {
    if (!ok[s]) break;
    rep.crossover_n = rep.n_values[s];
  }
  return rep;
}

void write_oracle_trace_csv(std::ostream& out, const OracleTrace& trace) {
  out << "r,dw_star\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < trace.dw_star.size(); ++i) {
    out << (i + 1) << ',' << trace.dw_star[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace curbs::oracle
