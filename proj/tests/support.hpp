#ifndef CURBS_TESTS_SUPPORT_HPP
#define CURBS_TESTS_SUPPORT_HPP

// Small generators and from-scratch reference computations shared by the
// test binaries. Deliberately written without the library's incremental
// machinery so they can act as independent checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "curbs/kernel_space.hpp"
#include "curbs/matrix.hpp"
#include "curbs/mmd_core.hpp"
#include "curbs/oracle.hpp"

namespace curbs::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// n random curves on an m-point uniform grid; each curve is a random walk
// plus a per-curve offset so that distances vary.
inline FunctionalDataset random_dataset(Rng& rng, std::size_t n, std::size_t m = 16) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<Curve> curves;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(m);
    double acc = z(rng);
    for (std::size_t t = 0; t < m; ++t) {
      acc += 0.3 * z(rng);
      v[t] = acc;
    }
    curves.emplace_back(std::move(v));
  }
  return FunctionalDataset(Grid::uniform(m), std::move(curves));
}

// Constant curves at the given levels.
inline FunctionalDataset constant_curves(const std::vector<double>& levels, std::size_t m = 8) {
  std::vector<Curve> curves;
  for (double l : levels) curves.emplace_back(std::vector<double>(m, l));
  return FunctionalDataset(Grid::uniform(m), std::move(curves));
}

// Populations whose members are identical copies of one random curve each.
// The empirical distribution of every population is then a point mass and
// population-level distances coincide with observation-level ones.
inline FunctionalDataset identical_populations(Rng& rng, const std::vector<std::size_t>& sizes,
                                               double spread = 1.0, std::size_t m = 16) {
  std::normal_distribution<double> z(0.0, spread);
  std::vector<Curve> curves;
  std::vector<int> labels;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    std::vector<double> base(m);
    for (auto& b : base) b = z(rng);
    for (std::size_t i = 0; i < sizes[l]; ++i) {
      curves.emplace_back(base);
      labels.push_back(static_cast<int>(l));
    }
  }
  return FunctionalDataset(Grid::uniform(m), std::move(curves), std::move(labels));
}

// Populations of identical copies make most pairwise distances zero, so the
// median rule degenerates; use a fixed bandwidth with them.
inline KernelConfig fixed_bandwidth(double h = 2.0) { return KernelConfig{KernelFamily::laplacian, h}; }

// Direct V-statistic from explicit index lists.
inline double naive_mmd(const GramMatrix& g, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (auto i : a)
    for (auto j : a) aa += g(i, j);
  for (auto i : b)
    for (auto j : b) bb += g(i, j);
  for (auto i : a)
    for (auto j : b) ab += g(i, j);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return aa / (na * na) + bb / (nb * nb) - 2.0 * ab / (na * nb);
}

inline double naive_dw(const GramMatrix& g, const std::vector<std::size_t>& a,
                       const std::vector<std::size_t>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return na * nb / (na + nb) * naive_mmd(g, a, b);
}

// Reference greedy split: every candidate's d_w recomputed from scratch.
struct NaiveTrace {
  std::vector<std::size_t> order;
  std::vector<double> dw;
};

inline NaiveTrace naive_bs(const GramMatrix& g, std::vector<std::size_t> working) {
  std::sort(working.begin(), working.end());
  std::vector<std::size_t> c1;
  std::vector<std::size_t> c2 = working;
  NaiveTrace t;
  while (c2.size() > 1) {
    std::size_t best_pos = 0;
    double best = -1.0;
    for (std::size_t p = 0; p < c2.size(); ++p) {
      std::vector<std::size_t> a = c1;
      a.push_back(c2[p]);
      std::vector<std::size_t> b;
      for (std::size_t q = 0; q < c2.size(); ++q)
        if (q != p) b.push_back(c2[q]);
      const double v = naive_dw(g, a, b);
      if (v > best + 1e-12 * std::max(1.0, std::abs(best))) {
        best = v;
        best_pos = p;
      }
    }
    c1.push_back(c2[best_pos]);
    c2.erase(c2.begin() + static_cast<std::ptrdiff_t>(best_pos));
    t.order.push_back(c1.back());
    t.dw.push_back(best);
  }
  return t;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
  return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

// Random embedding Gram matrix E E^T with E of size K x dim.
inline oracle::EmbeddingGram random_embedding(Rng& rng, std::size_t k, std::size_t dim = 6,
                                              double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  std::vector<std::vector<double>> e(k, std::vector<double>(dim));
  for (auto& row : e)
    for (auto& v : row) v = z(rng);
  SquareMatrix m(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) s += e[i][d] * e[j][d];
      m(i, j) = s;
    }
  return oracle::EmbeddingGram(std::move(m));
}

// Two-population embedding with pairwise distance d.
inline oracle::EmbeddingGram two_point_embedding(double d) {
  SquareMatrix m(2);
  m(0, 0) = d;
  return oracle::EmbeddingGram(std::move(m));
}

}  // namespace curbs::testing

#endif  // CURBS_TESTS_SUPPORT_HPP
