#include "curbs/kernel_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "curbs/errors.hpp"

namespace curbs {

namespace {

constexpr double kGridRelTol = 1e-9;

}  // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw ParameterError("grid needs at least two points");
  }
  for (double t : points_) {
    if (!std::isfinite(t)) throw ParameterError("grid point is not finite");
  }
  if (points_.front() < 0.0 || points_.back() > 1.0) {
    throw ParameterError("grid must lie in [0,1]");
  }
  const double mean_step =
      (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double step = points_[i] - points_[i - 1];
    if (step <= 0.0) throw ParameterError("grid must be strictly increasing");
    if (std::abs(step - mean_step) > kGridRelTol * mean_step) {
      throw ParameterError("grid is not equi-spaced");
    }
  }
}

Grid Grid::uniform(std::size_t m) {
  if (m < 2) throw ParameterError("grid needs at least two points");
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  }
  return Grid(std::move(t));
}

Curve::Curve(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw ParameterError("curve value is not finite");
  }
}

FunctionalDataset::FunctionalDataset(Grid grid, std::vector<Curve> curves,
                                     std::optional<std::vector<int>> labels)
    : grid_(std::move(grid)), curves_(std::move(curves)), labels_(std::move(labels)) {
  if (curves_.empty()) throw ParameterError("dataset must contain at least one curve");
  for (const Curve& c : curves_) {
    if (c.size() != grid_.size()) {
      throw DimensionError("curve length " + std::to_string(c.size()) +
                           " does not match grid length " + std::to_string(grid_.size()));
    }
  }
  if (labels_ && labels_->size() != curves_.size()) {
    throw DimensionError("label count does not match curve count");
  }
}

double l2_distance(const Curve& a, const Curve& b, const Grid& grid) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw DimensionError("curves and grid have different lengths");
  }
  const std::size_t m = grid.size();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    sum += 0.5 * (grid[i + 1] - grid[i]) * (d0 * d0 + d1 * d1);
  }
  return std::sqrt(sum);
}

double eval_kernel(KernelFamily family, double h, double dist) {
  const double u = dist / h;
  const double k = family == KernelFamily::laplacian ? std::exp(-u) : std::exp(-u * u);
  // Entries stay strictly positive even when exp underflows.
  return std::max(k, std::numeric_limits<double>::min());
}

double eval_kernel(const KernelConfig& config, double dist) {
  if (!config.bandwidth || !(*config.bandwidth > 0.0)) {
    throw PreconditionError("kernel bandwidth is not resolved");
  }
  return eval_kernel(config.family, *config.bandwidth, dist);
}

SquareMatrix distance_matrix(const FunctionalDataset& data) {
  const std::size_t n = data.size();
  SquareMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = l2_distance(data.curve(i), data.curve(j), data.grid());
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

double median_bandwidth(const SquareMatrix& distances) {
  const std::size_t n = distances.size();
  if (n < 2) throw PreconditionError("median bandwidth needs at least two curves");
  std::vector<double> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back(distances(i, j));
  }
  const std::size_t mid = pairs.size() / 2;
  std::nth_element(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(mid), pairs.end());
  double median = pairs[mid];
  if (pairs.size() % 2 == 0) {
    const double lower = *std::max_element(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  if (!(median > 0.0)) {
    throw DegenerateDataError("median pairwise distance is zero; bandwidth would be 0");
  }
  return median;
}

double median_bandwidth(const FunctionalDataset& data) {
  return median_bandwidth(distance_matrix(data));
}

double resolve_bandwidth(const FunctionalDataset& data, const KernelConfig& config) {
  if (config.bandwidth) {
    if (!(*config.bandwidth > 0.0)) throw ParameterError("bandwidth must be positive");
    return *config.bandwidth;
  }
  return median_bandwidth(data);
}

GramMatrix::GramMatrix(SquareMatrix entries, double bandwidth, KernelFamily family)
    : entries_(std::move(entries)), bandwidth_(bandwidth), family_(family) {}

GramMatrix gram_from_distances(const SquareMatrix& distances, const KernelConfig& config) {
  double h = 0.0;
  if (config.bandwidth) {
    if (!(*config.bandwidth > 0.0)) throw ParameterError("bandwidth must be positive");
    h = *config.bandwidth;
  } else if (distances.size() < 2) {
    h = 1.0;  // no pairs; the bandwidth never enters a kernel evaluation
  } else {
    h = median_bandwidth(distances);
  }
  const std::size_t n = distances.size();
  SquareMatrix k(n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = eval_kernel(config.family, h, distances(i, j));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix(std::move(k), h, config.family);
}

GramMatrix gram_matrix(const FunctionalDataset& data, const KernelConfig& config) {
  return gram_from_distances(distance_matrix(data), config);
}

}  // namespace curbs
