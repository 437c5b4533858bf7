#ifndef CURBS_EVAL_HPP
#define CURBS_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "curbs/kernel_space.hpp"

namespace curbs::eval {

// Fraction of observation pairs on which the two partitions agree about
// "same cluster" vs "different cluster". Labels are arbitrary integers.
double rand_index(std::span<const int> a, std::span<const int> b);

// Number of concordant pairs (exact).
std::int64_t concordant_pairs(std::span<const int> a, std::span<const int> b);

struct Method {
  enum class Kind { curbs1, curbs2 };
  Kind kind = Kind::curbs1;
  std::size_t j = 0;  // target cluster count for curbs2

  static Method unknown_k() { return {}; }
  static Method fixed_k(std::size_t j) { return {Kind::curbs2, j}; }
  std::string name() const;
};

struct ReplicationReport {
  std::string model;
  std::vector<std::size_t> sizes;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::string method;
  int true_k = 0;
  std::vector<double> rand_values;  // one per replication
  std::vector<int> khat;            // one per replication
  double mean_rand = 0.0;
  std::size_t k_less = 0;
  std::size_t k_equal = 0;
  std::size_t k_greater = 0;

  double rate_equal() const { return reps ? static_cast<double>(k_equal) / reps : 0.0; }
};

// Replication r uses datagen::derive_seed(seed, r). Single-population models
// score RI against the all-zero labelling.
ReplicationReport run_replications(const std::string& model_id, const std::vector<std::size_t>& sizes,
                                   std::size_t reps, std::uint64_t seed, const Method& method,
                                   const KernelConfig& config,
                                   std::size_t grid_points = 128);

std::string report_to_json(const ReplicationReport& report, int indent = 2);
// Header: model,sizes,method,reps,khat_less,khat_equal,khat_greater,mean_rand
void write_report_csv(std::ostream& out, const std::vector<ReplicationReport>& reports);

}  // namespace curbs::eval

#endif  // CURBS_EVAL_HPP
