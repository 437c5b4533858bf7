#ifndef CURBS_KERNEL_SPACE_HPP
#define CURBS_KERNEL_SPACE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "curbs/matrix.hpp"

namespace curbs {

// Equi-spaced abscissae in [0,1] shared by every curve of a dataset.
class Grid {
 public:
  // Throws ParameterError unless the points are strictly increasing, lie in
  // [0,1], number at least two and are equi-spaced to 1e-9 relative.
  explicit Grid(std::vector<double> points);

  // t_i = i / (m - 1), i = 0..m-1.
  static Grid uniform(std::size_t m);

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }

  bool operator==(const Grid&) const = default;

 private:
  std::vector<double> points_;
};

// Evaluations of one observation on a Grid. All values are finite.
class Curve {
 public:
  explicit Curve(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

// n >= 1 curves on a common grid with optional ground-truth labels. Labels are
// carried for evaluation only; no clustering routine reads them.
class FunctionalDataset {
 public:
  FunctionalDataset(Grid grid, std::vector<Curve> curves,
                    std::optional<std::vector<int>> labels = std::nullopt);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return curves_.size(); }
  const Curve& curve(std::size_t i) const { return curves_[i]; }
  const std::vector<Curve>& curves() const { return curves_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }

 private:
  Grid grid_;
  std::vector<Curve> curves_;
  std::optional<std::vector<int>> labels_;
};

enum class KernelFamily { laplacian, gaussian };

// Bandwidth h > 0, or the median heuristic when `bandwidth` is empty.
struct KernelConfig {
  KernelFamily family = KernelFamily::laplacian;
  std::optional<double> bandwidth;

  static KernelConfig laplacian_median() { return {}; }
  bool uses_median() const { return !bandwidth.has_value(); }
};

// L2[0,1] distance via the composite trapezoidal rule on the grid.
double l2_distance(const Curve& a, const Curve& b, const Grid& grid);

// laplacian: exp(-dist/h); gaussian: exp(-dist^2/h^2). `h` must be resolved.
double eval_kernel(KernelFamily family, double h, double dist);
double eval_kernel(const KernelConfig& config, double dist);

// All pairwise L2 distances; zero diagonal.
SquareMatrix distance_matrix(const FunctionalDataset& data);

// Median of the n(n-1)/2 pairwise distances (midpoint of the central pair
// for an even count). Throws DegenerateDataError when the median is zero.
double median_bandwidth(const FunctionalDataset& data);
double median_bandwidth(const SquareMatrix& distances);

// h from the config, or the median heuristic on `data`.
double resolve_bandwidth(const FunctionalDataset& data, const KernelConfig& config);

// Symmetric kernel matrix with unit diagonal and entries in (0,1].
class GramMatrix {
 public:
  GramMatrix(SquareMatrix entries, double bandwidth, KernelFamily family);

  std::size_t size() const { return entries_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  std::span<const double> row(std::size_t i) const { return entries_.row(i); }
  const SquareMatrix& entries() const { return entries_; }
  double bandwidth() const { return bandwidth_; }
  KernelFamily family() const { return family_; }

 private:
  SquareMatrix entries_;
  double bandwidth_;
  KernelFamily family_;
};

GramMatrix gram_matrix(const FunctionalDataset& data, const KernelConfig& config);

// Builds the kernel matrix from precomputed distances; `config.bandwidth`
// empty means the median of `distances`.
GramMatrix gram_from_distances(const SquareMatrix& distances, const KernelConfig& config);

}  // namespace curbs

#endif  // CURBS_KERNEL_SPACE_HPP
