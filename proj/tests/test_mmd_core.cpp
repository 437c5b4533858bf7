#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "curbs/errors.hpp"
#include "curbs/mmd_core.hpp"
#include "support.hpp"

namespace curbs {
namespace {

using testing::Rng;

GramMatrix random_gram(Rng& rng, std::size_t n) {
  return gram_matrix(testing::random_dataset(rng, n), KernelConfig::laplacian_median());
}

std::vector<std::size_t> to_vec(const ClusterView& v) { return {v.indices().begin(), v.indices().end()}; }

TEST(ClusterView, SortsAndRejectsDuplicates) {
  const ClusterView v({4, 1, 3});
  EXPECT_EQ(to_vec(v), (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_TRUE(v.contains(3));
  EXPECT_FALSE(v.contains(2));
  EXPECT_THROW(ClusterView({1, 2, 1}), PreconditionError);
}

TEST(ClusterView, MergeAndDisjoint) {
  const ClusterView a({0, 2}), b({1, 5}), c({2, 3});
  EXPECT_TRUE(disjoint(a, b));
  EXPECT_FALSE(disjoint(a, c));
  EXPECT_EQ(to_vec(merge_views(a, b)), (std::vector<std::size_t>{0, 1, 2, 5}));
}

TEST(Mmd, SameSetIsZero) {
  Rng rng(1);
  const GramMatrix g = random_gram(rng, 8);
  const ClusterView a({0, 3, 5});
  EXPECT_EQ(mmd_squared(g, a, a), 0.0);
}

TEST(Mmd, Singletons) {
  Rng rng(2);
  const GramMatrix g = random_gram(rng, 5);
  EXPECT_NEAR(mmd_squared(g, ClusterView({1}), ClusterView({3})), 2.0 - 2.0 * g(1, 3), 1e-15);
  EXPECT_NEAR(dw(g, ClusterView({1}), ClusterView({3})), 1.0 - g(1, 3), 1e-15);
}

TEST(Mmd, SymmetricAndMatchesNaive) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = testing::uniform_int(rng, 4, 20);
    const GramMatrix g = random_gram(rng, n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t cut = testing::uniform_int(rng, 1, n - 1);
    std::vector<std::size_t> av(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<std::size_t> bv(idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
    const ClusterView a(av), b(bv);
    EXPECT_TRUE(testing::close_rel(mmd_squared(g, a, b), mmd_squared(g, b, a), 1e-13));
    EXPECT_TRUE(testing::close_rel(mmd_squared(g, a, b), testing::naive_mmd(g, av, bv), 1e-10));
    EXPECT_TRUE(testing::close_rel(dw(g, a, b), testing::naive_dw(g, av, bv), 1e-10));
    EXPECT_GE(dw(g, a, b), 0.0);
  }
}

TEST(Mmd, EqualMeasuresGiveZero) {
  // Duplicated curves: {0,1} and {2,3} hold the same two distinct curves.
  const auto data = testing::constant_curves({0.0, 1.0, 0.0, 1.0, 5.0});
  const GramMatrix g = gram_matrix(data, KernelConfig::laplacian_median());
  EXPECT_NEAR(mmd_squared(g, ClusterView({0, 1}), ClusterView({2, 3})), 0.0, 1e-15);
  EXPECT_GT(mmd_squared(g, ClusterView({0, 1}), ClusterView({2, 4})), 1e-3);
}

TEST(Dw, TwoByTwoWeightIsOne) {
  Rng rng(4);
  const GramMatrix g = random_gram(rng, 6);
  const ClusterView a({0, 2}), b({3, 5});
  EXPECT_NEAR(dw(g, a, b), mmd_squared(g, a, b), 1e-15);
}

TEST(Dw, OverlapAndEmptyThrow) {
  Rng rng(4);
  const GramMatrix g = random_gram(rng, 6);
  EXPECT_THROW(dw(g, ClusterView({0, 1}), ClusterView({0, 1})), PreconditionError);
  EXPECT_THROW(dw(g, ClusterView(), ClusterView({0})), PreconditionError);
}

TEST(Ledger, InitialState) {
  Rng rng(5);
  const GramMatrix g = random_gram(rng, 7);
  const TransferLedger pair(g, ClusterView({2, 4}));
  EXPECT_NEAR(pair.s2(2), g(2, 2) + g(2, 4), 1e-15);

  const TransferLedger led(g, ClusterView::all(7));
  double total = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(led.s1(i), 0.0);
    total += led.s2(i);
  }
  EXPECT_NEAR(total, led.w22(), 1e-12);
  EXPECT_FALSE(led.current_dw().has_value());
}

TEST(Ledger, TransfersMatchFromScratch) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testing::uniform_int(rng, 3, 25);
    const GramMatrix g = random_gram(rng, n);
    TransferLedger led(g, ClusterView::all(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t r = 0; r + 1 < n; ++r) {
      const double v = led.transfer(order[r]);
      const ClusterView c1 = led.c1();
      const ClusterView c2 = led.c2();
      EXPECT_TRUE(testing::close_rel(v, dw(g, c1, c2), 1e-9));
      EXPECT_TRUE(testing::close_rel(led.w11(), kernel_block_sum(g, c1, c1), 1e-9));
      EXPECT_TRUE(testing::close_rel(led.w22(), kernel_block_sum(g, c2, c2), 1e-9));
      for (std::size_t i = 0; i < n; ++i) {
        const ClusterView single({i});
        EXPECT_TRUE(testing::close_rel(led.s1(i), kernel_block_sum(g, single, c1), 1e-9));
        EXPECT_TRUE(testing::close_rel(led.s2(i), kernel_block_sum(g, single, c2), 1e-9));
      }
    }
  }
}

TEST(Ledger, EquidistantTransferLeavesDwUnchanged) {
  // Three constant curves at 0, 1 and 2: moving the middle curve after the
  // first leaves it equally weighted between the two sides.
  const auto data = testing::constant_curves({0.0, 1.0, 2.0, 1.0});
  const GramMatrix g = gram_matrix(data, KernelConfig{KernelFamily::laplacian, 1.0});
  TransferLedger led(g, ClusterView({0, 1, 2}));
  const double before = led.transfer(0);
  const ClusterView c1({0}), c2({2}), c({1});
  ASSERT_NEAR(dw(g, c2, c), dw(g, c1, c), 1e-15);
  EXPECT_NEAR(led.dw_after(1), before, 1e-12);
}

TEST(Ledger, BestTransferMatchesBruteForce) {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = testing::uniform_int(rng, 3, 12);
    const GramMatrix g = random_gram(rng, n);
    TransferLedger led(g, ClusterView::all(n));
    while (led.c2_size() >= 2) {
      const auto c1v = to_vec(led.c1());
      const auto c2v = to_vec(led.c2());
      double best = -1.0;
      for (std::size_t c : c2v) {
        std::vector<std::size_t> a = c1v;
        a.push_back(c);
        std::vector<std::size_t> b;
        for (std::size_t x : c2v)
          if (x != c) b.push_back(x);
        best = std::max(best, testing::naive_dw(g, a, b));
      }
      const auto cand = led.best_transfer();
      EXPECT_TRUE(testing::close_rel(cand.dw, best, 1e-10));
      led.transfer(cand.index);
    }
  }
}

TEST(Ledger, TieGoesToSmallerIndex) {
  // Curves 1 and 3 are copies, as are 0 and 2: candidates tie pairwise.
  const auto data = testing::constant_curves({0.0, 3.0, 0.0, 3.0});
  const GramMatrix g = gram_matrix(data, KernelConfig{KernelFamily::laplacian, 1.0});
  const TransferLedger led(g, ClusterView::all(4));
  EXPECT_EQ(led.best_transfer().index, 0u);
}

TEST(Ledger, UpdateCountIsQuadratic) {
  Rng rng(8);
  for (std::size_t n : {10u, 20u, 40u}) {
    const GramMatrix g = random_gram(rng, n);
    TransferLedger led(g, ClusterView::all(n));
    while (led.c2_size() >= 2) led.transfer(led.best_transfer().index);
    // Two running sums per working-set member per transfer.
    EXPECT_EQ(led.kernel_updates(), static_cast<std::uint64_t>(2 * n * (n - 1)));
  }
}

TEST(Ledger, RejectsInvalidTransfers) {
  Rng rng(9);
  const GramMatrix g = random_gram(rng, 4);
  TransferLedger led(g, ClusterView({0, 1, 2}));
  EXPECT_THROW(led.transfer(3), PreconditionError);
  led.transfer(0);
  EXPECT_THROW(led.transfer(0), PreconditionError);
  led.transfer(1);
  EXPECT_THROW(led.transfer(2), PreconditionError);
  EXPECT_THROW(TransferLedger(g, ClusterView({1})), PreconditionError);
}

}  // namespace
}  // namespace curbs
