#ifndef CURBS_MATRIX_HPP
#define CURBS_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace curbs {

// Dense row-major n x n matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }

  std::span<const double> data() const { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace curbs

#endif  // CURBS_MATRIX_HPP
