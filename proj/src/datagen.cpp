#include "curbs/datagen.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>

#include "curbs/errors.hpp"

namespace curbs::datagen {

namespace {

using Theta = std::function<double(int)>;

PopulationSpec population(std::size_t truncation, const Theta& theta,
                          std::vector<double> mu = {}, std::function<double(double)> mean = {},
                          BasisKind basis = BasisKind::sine) {
  PopulationSpec p;
  p.theta.resize(truncation);
  for (std::size_t j = 1; j <= truncation; ++j) p.theta[j - 1] = theta(static_cast<int>(j));
  mu.resize(truncation, 0.0);
  p.mean_coefficients = std::move(mu);
  p.mean_function = std::move(mean);
  p.basis = basis;
  return p;
}

// c * (-1)^{j+1} for j = 1..3.
std::vector<double> alternating(double c) { return {c, -c, c}; }

Theta scaled(Theta f, double c) {
  return [f = std::move(f), c](int j) { return c * f(j); };
}

std::map<std::string, ModelSpec, std::less<>> build_registry() {
  const Theta exp3 = [](int j) { return std::exp(-j / 3.0); };
  const Theta inv2 = [](int j) { return std::pow(j, -2.0); };
  const Theta inv101 = [](int j) { return std::pow(j, -1.01); };
  const Theta inv105 = [](int j) { return std::pow(j, -1.05); };
  const Theta exp1 = [](int j) { return std::exp(-static_cast<double>(j)); };

  std::map<std::string, ModelSpec, std::less<>> r;
  auto add = [&r](std::string id, std::size_t t, CoefficientLaw law, std::vector<PopulationSpec> pops) {
    ModelSpec m;
    m.id = id;
    m.truncation = t;
    m.law = law;
    m.populations = std::move(pops);
    r.emplace(std::move(id), std::move(m));
  };
  const auto normal = CoefficientLaw::normal;
  const auto t3 = CoefficientLaw::student_t3;

  add("1a", 50, normal,
      {population(50, exp3, {}, [](double t) { return 2.0 * t; }),
       population(50, exp3, {}, [](double t) { return 6.0 * t * (1.0 - t); })});
  add("1b", 50, normal, {population(50, exp3), population(50, scaled(exp3, 3.0))});
  add("2a", 40, normal, {population(40, inv2), population(40, inv2, alternating(0.75))});
  add("2b", 40, normal, {population(40, inv2), population(40, scaled(inv2, 3.0))});
  add("3", 50, normal, {population(50, inv2), population(50, exp1)});
  add("4", 40, normal,
      {population(40, inv2), population(40, inv2, {}, {}, BasisKind::fourier)});
  add("5a", 40, normal,
      {population(40, exp3), population(40, exp3, {0.0, -0.45, 0.45, -0.09, 0.84, 0.60}),
       population(40, exp3, {0.0, -0.30, 0.60, -0.30, 0.60, -0.30})});
  add("5b", 40, normal,
      {population(40, exp3), population(40, scaled(exp3, 3.0)), population(40, scaled(exp3, 15.0))});
  add("6a", 50, normal,
      {population(50, inv101, {}, [](double t) { return 20.0 * std::pow(t, 1.5) * (1.0 - t); }),
       population(50, inv101, {}, [](double t) { return 20.0 * t * std::pow(1.0 - t, 1.5); }),
       population(50, inv101)});
  add("6b", 50, normal,
      {population(50, inv101), population(50, scaled(inv101, 3.0)),
       population(50, scaled(inv101, 9.0))});
  add("7a", 40, t3,
      {population(40, inv2), population(40, inv2, alternating(0.5)),
       population(40, inv2, alternating(1.0))});
  // Scale change only: mean coefficients are zero.
  add("7b", 40, t3,
      {population(40, inv2), population(40, scaled(inv2, 3.0)), population(40, scaled(inv2, 9.0))});
  add("8", 40, normal, {population(40, inv2), population(40, inv105), population(40, exp1)});
  add("N1", 50, normal, {population(50, exp3)});
  add("N2", 40, normal, {population(40, inv2)});
  add("N3", 50, normal, {population(50, inv101)});
  add("N4", 40, t3, {population(40, inv2)});
  return r;
}

const std::map<std::string, ModelSpec, std::less<>>& registry() {
  static const auto r = build_registry();
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

const ModelSpec& model_spec(std::string_view id) {
  const auto& r = registry();
  const auto it = r.find(id);
  if (it == r.end()) throw ParameterError("unknown model id '" + std::string(id) + "'");
  return it->second;
}

std::vector<std::string> model_ids() {
  // Registry order is lexicographic; keep the documented order instead.
  return {"1a", "1b", "2a", "2b", "3", "4", "5a", "5b", "6a", "6b", "7a", "7b", "8",
          "N1", "N2", "N3", "N4"};
}

std::vector<double> basis_eval(BasisKind kind, int j, const Grid& grid) {
  if (j < 1) throw ParameterError("basis index must be >= 1");
  const double pi = std::numbers::pi;
  const double root2 = std::numbers::sqrt2;
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (kind == BasisKind::sine) {
      out[i] = root2 * std::sin(j * pi * t);
    } else if (j == 1) {
      out[i] = 1.0;
    } else if (j % 2 == 0) {
      out[i] = root2 * std::cos(2.0 * pi * (j / 2) * t);
    } else {
      out[i] = root2 * std::sin(2.0 * pi * (j / 2) * t);
    }
  }
  return out;
}

FunctionalDataset generate(const ModelSpec& spec, const std::vector<std::size_t>& sizes,
                           const Grid& grid, std::uint64_t seed) {
  if (sizes.size() != spec.k()) {
    throw ParameterError("model " + spec.id + " has " + std::to_string(spec.k()) +
                         " populations but " + std::to_string(sizes.size()) + " sizes were given");
  }
  for (std::size_t s : sizes) {
    if (s == 0) throw ParameterError("population sizes must be positive");
  }

  boost::random::mt19937_64 engine(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  boost::random::student_t_distribution<double> student(3.0);
  const double t_scale = 1.0 / std::sqrt(3.0);
  auto draw = [&]() {
    return spec.law == CoefficientLaw::normal ? normal(engine) : student(engine) * t_scale;
  };

  const std::size_t m = grid.size();
  std::vector<Curve> curves;
  std::vector<int> labels;
  for (std::size_t l = 0; l < spec.k(); ++l) {
    const PopulationSpec& pop = spec.populations[l];
    std::vector<std::vector<double>> basis(spec.truncation);
    for (std::size_t j = 0; j < spec.truncation; ++j) {
      basis[j] = basis_eval(pop.basis, static_cast<int>(j + 1), grid);
    }
    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (pop.mean_function) mean[i] = pop.mean_function(grid[i]);
      for (std::size_t j = 0; j < spec.truncation; ++j) {
        mean[i] += pop.mean_coefficients[j] * basis[j][i];
      }
    }
    for (std::size_t rep = 0; rep < sizes[l]; ++rep) {
      std::vector<double> values = mean;
      for (std::size_t j = 0; j < spec.truncation; ++j) {
        const double coef = std::sqrt(pop.theta[j]) * draw();
        for (std::size_t i = 0; i < m; ++i) values[i] += coef * basis[j][i];
      }
      curves.emplace_back(std::move(values));
      labels.push_back(static_cast<int>(l));
    }
  }
  return FunctionalDataset(grid, std::move(curves), std::move(labels));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t rep) {
  return splitmix64(splitmix64(seed) ^ splitmix64(rep + 0x632BE59BD9B4E019ULL));
}

}  // namespace curbs::datagen
