#ifndef CURBS_DATAGEN_HPP
#define CURBS_DATAGEN_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "curbs/kernel_space.hpp"

namespace curbs::datagen {

// sine: sqrt(2) sin(j pi t).
// fourier: phi_1 = 1, phi_{2m} = sqrt(2) cos(2 pi m t), phi_{2m+1} = sqrt(2) sin(2 pi m t).
enum class BasisKind { sine, fourier };

// normal: N(0,1). student_t3: t with 3 degrees of freedom divided by sqrt(3).
enum class CoefficientLaw { normal, student_t3 };

// One population: X(t) = sum_j (sqrt(theta_j) Z_j + mu_j) phi_j(t) + mu(t).
struct PopulationSpec {
  std::vector<double> theta;             // length = truncation
  std::vector<double> mean_coefficients;  // length = truncation
  std::function<double(double)> mean_function;  // empty means 0
  BasisKind basis = BasisKind::sine;
};

struct ModelSpec {
  std::string id;
  std::size_t truncation = 0;
  CoefficientLaw law = CoefficientLaw::normal;
  std::vector<PopulationSpec> populations;

  std::size_t k() const { return populations.size(); }
};

// Registered ids: 1a 1b 2a 2b 3 4 5a 5b 6a 6b 7a 7b 8 N1 N2 N3 N4.
// Throws ParameterError for anything else.
const ModelSpec& model_spec(std::string_view id);
std::vector<std::string> model_ids();

std::vector<double> basis_eval(BasisKind kind, int j, const Grid& grid);

// Sample sizes[l] curves from population l (l = 0..K-1), populations in
// order, with ground-truth labels attached. Deterministic in `seed`.
FunctionalDataset generate(const ModelSpec& spec, const std::vector<std::size_t>& sizes,
                           const Grid& grid, std::uint64_t seed);

// Independent seed for replication `rep` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t rep);

inline constexpr std::size_t kDefaultGridPoints = 128;

}  // namespace curbs::datagen

#endif  // CURBS_DATAGEN_HPP
