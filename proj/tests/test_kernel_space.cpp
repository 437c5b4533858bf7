#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "curbs/errors.hpp"
#include "curbs/kernel_space.hpp"
#include "support.hpp"

namespace curbs {
namespace {

using testing::Rng;

TEST(Grid, UniformEndpoints) {
  const Grid g = Grid::uniform(5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[0], 0.0);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
  EXPECT_DOUBLE_EQ(g[4], 1.0);
}

TEST(Grid, RejectsBadPoints) {
  EXPECT_THROW(Grid({0.5}), ParameterError);
  EXPECT_THROW(Grid({0.0, 0.6, 0.5}), ParameterError);
  EXPECT_THROW(Grid({0.0, 0.1, 0.5}), ParameterError);
  EXPECT_THROW(Grid({-0.5, 0.0, 0.5}), ParameterError);
  EXPECT_NO_THROW(Grid({0.25, 0.5, 0.75}));
}

TEST(Curve, RejectsNonFinite) {
  EXPECT_THROW(Curve({1.0, std::nan("")}), Error);
  EXPECT_THROW(Curve({1.0, INFINITY}), Error);
}

TEST(Dataset, LengthMismatchThrows) {
  std::vector<Curve> curves{Curve({1.0, 2.0, 3.0}), Curve({1.0, 2.0})};
  EXPECT_THROW(FunctionalDataset(Grid::uniform(3), curves), DimensionError);
}

TEST(L2Distance, IdentityIsZero) {
  const Grid g = Grid::uniform(9);
  const Curve a({1, 2, 3, 4, 5, 4, 3, 2, 1});
  EXPECT_EQ(l2_distance(a, a, g), 0.0);
}

TEST(L2Distance, ConstantCurves) {
  const Grid g = Grid::uniform(17);
  const Curve a(std::vector<double>(17, 2.5));
  const Curve b(std::vector<double>(17, -0.75));
  EXPECT_NEAR(l2_distance(a, b, g), 3.25, 1e-12);
}

TEST(L2Distance, ScaledSineHasUnitNorm) {
  const Grid g = Grid::uniform(128);
  std::vector<double> v(128);
  for (std::size_t i = 0; i < 128; ++i) v[i] = std::numbers::sqrt2 * std::sin(std::numbers::pi * g[i]);
  // Reference: fine midpoint rule for the integral of 2 sin^2(pi t).
  const int fine = 1000000;
  double ref = 0.0;
  for (int i = 0; i < fine; ++i) {
    const double t = (i + 0.5) / fine;
    ref += 2.0 * std::sin(std::numbers::pi * t) * std::sin(std::numbers::pi * t);
  }
  ref = std::sqrt(ref / fine);
  const double d = l2_distance(Curve(v), Curve(std::vector<double>(128, 0.0)), g);
  EXPECT_NEAR(d, ref, 1e-3);
  EXPECT_NEAR(d, 1.0, 1e-3);
}

TEST(L2Distance, MetricAxiomsOnRandomTriples) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto data = testing::random_dataset(rng, 3, 12);
    const auto& g = data.grid();
    const double ab = l2_distance(data.curve(0), data.curve(1), g);
    const double ba = l2_distance(data.curve(1), data.curve(0), g);
    const double ac = l2_distance(data.curve(0), data.curve(2), g);
    const double bc = l2_distance(data.curve(1), data.curve(2), g);
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(ab, ba);
    EXPECT_LE(ac, ab + bc + 1e-10);
  }
}

TEST(Kernel, ZeroDistanceIsOne) {
  EXPECT_EQ(eval_kernel(KernelFamily::laplacian, 0.7, 0.0), 1.0);
  EXPECT_EQ(eval_kernel(KernelFamily::gaussian, 0.7, 0.0), 1.0);
}

TEST(Kernel, DistanceEqualToBandwidth) {
  EXPECT_NEAR(eval_kernel(KernelFamily::laplacian, 1.7, 1.7), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(eval_kernel(KernelFamily::gaussian, 1.7, 1.7), 0.36787944117144233, 1e-15);
}

TEST(Kernel, StrictlyDecreasing) {
  for (auto family : {KernelFamily::laplacian, KernelFamily::gaussian}) {
    double prev = eval_kernel(family, 1.0, 0.0);
    for (int i = 1; i < 50; ++i) {
      const double cur = eval_kernel(family, 1.0, 0.1 * i);
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(Kernel, ConfigOverloadUsesBandwidth) {
  KernelConfig c{KernelFamily::laplacian, 2.0};
  EXPECT_NEAR(eval_kernel(c, 2.0), std::exp(-1.0), 1e-15);
}

TEST(MedianBandwidth, TwoCurves) {
  const auto data = testing::constant_curves({0.0, 3.0});
  EXPECT_NEAR(median_bandwidth(data), 3.0, 1e-12);
}

TEST(MedianBandwidth, OddCountMiddleElement) {
  SquareMatrix d(3);
  d(0, 1) = d(1, 0) = 1.0;
  d(0, 2) = d(2, 0) = 4.0;
  d(1, 2) = d(2, 1) = 2.0;
  EXPECT_EQ(median_bandwidth(d), 2.0);
}

TEST(MedianBandwidth, EvenCountMidpoint) {
  // Four curves give six distances: 1,2,3,1,2,1 -> sorted 1,1,1,2,2,3.
  const auto data = testing::constant_curves({0.0, 1.0, 2.0, 3.0});
  EXPECT_NEAR(median_bandwidth(data), 1.5, 1e-12);
}

TEST(MedianBandwidth, IdenticalCurvesThrow) {
  const auto data = testing::constant_curves({1.0, 1.0, 1.0});
  EXPECT_THROW(median_bandwidth(data), DegenerateDataError);
}

TEST(MedianBandwidth, PermutationInvariant) {
  Rng rng(3);
  const auto data = testing::random_dataset(rng, 15);
  std::vector<Curve> shuffled = data.curves();
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const FunctionalDataset other(data.grid(), shuffled);
  EXPECT_EQ(median_bandwidth(data), median_bandwidth(other));
}

TEST(Gram, SingleCurve) {
  const auto data = testing::constant_curves({4.0});
  const GramMatrix g = gram_matrix(data, KernelConfig::laplacian_median());
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g(0, 0), 1.0);
}

TEST(Gram, SymmetricUnitDiagonal) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto data = testing::random_dataset(rng, 12);
    const GramMatrix g = gram_matrix(data, KernelConfig::laplacian_median());
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(g(i, i), 1.0);
      for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_EQ(g(i, j), g(j, i));
        if (i != j) {
          EXPECT_LT(g(i, j), 1.0);
          EXPECT_GT(g(i, j), 0.0);
        }
      }
    }
  }
}

TEST(Gram, PositiveSemidefinite) {
  Rng rng(7);
  for (auto family : {KernelFamily::laplacian, KernelFamily::gaussian}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto data = testing::random_dataset(rng, 20);
      const GramMatrix g = gram_matrix(data, KernelConfig{family, std::nullopt});
      Eigen::MatrixXd m(20, 20);
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) m(i, j) = g(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    }
  }
}

TEST(Gram, FixedBandwidthMatchesDirectEvaluation) {
  Rng rng(9);
  const auto data = testing::random_dataset(rng, 6);
  const KernelConfig c{KernelFamily::gaussian, 0.8};
  const GramMatrix g = gram_matrix(data, c);
  EXPECT_EQ(g.bandwidth(), 0.8);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const double d = l2_distance(data.curve(i), data.curve(j), data.grid());
      EXPECT_NEAR(g(i, j), std::exp(-d * d / 0.64), 1e-14);
    }
}

TEST(Gram, NonPositiveBandwidthThrows) {
  Rng rng(9);
  const auto data = testing::random_dataset(rng, 4);
  EXPECT_THROW(gram_matrix(data, KernelConfig{KernelFamily::laplacian, 0.0}), ParameterError);
  EXPECT_THROW(gram_matrix(data, KernelConfig{KernelFamily::laplacian, -1.0}), ParameterError);
}

}  // namespace
}  // namespace curbs
