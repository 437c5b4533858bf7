#include "curbs/eval.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <utility>

#include "json.hpp"

#include "curbs/curbs.hpp"
#include "curbs/datagen.hpp"
#include "curbs/errors.hpp"

namespace curbs::eval {

namespace {

std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(sizes[i]);
  }
  return out;
}

}  // namespace

std::int64_t concordant_pairs(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionError("label vectors differ in length");
  if (a.size() < 2) throw PreconditionError("rand index needs n >= 2");
  std::map<std::pair<int, int>, std::int64_t> joint;
  std::map<int, std::int64_t> ca;
  std::map<int, std::int64_t> cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  std::int64_t same_both = 0;
  for (const auto& [key, v] : joint) same_both += choose2(v);
  std::int64_t same_a = 0;
  for (const auto& [key, v] : ca) same_a += choose2(v);
  std::int64_t same_b = 0;
  for (const auto& [key, v] : cb) same_b += choose2(v);
  const std::int64_t total = choose2(static_cast<std::int64_t>(a.size()));
  // Agree-same pairs plus agree-different pairs.
  return same_both + (total - same_a - same_b + same_both);
}

double rand_index(std::span<const int> a, std::span<const int> b) {
  const std::int64_t c = concordant_pairs(a, b);
  return static_cast<double>(c) / static_cast<double>(choose2(static_cast<std::int64_t>(a.size())));
}

std::string Method::name() const {
  return kind == Kind::curbs1 ? "curbs1" : "curbs2(J=" + std::to_string(j) + ")";
}

ReplicationReport run_replications(const std::string& model_id, const std::vector<std::size_t>& sizes,
                                   std::size_t reps, std::uint64_t seed, const Method& method,
                                   const KernelConfig& config, std::size_t grid_points) {
  if (reps < 1) throw ParameterError("reps must be >= 1");
  const datagen::ModelSpec& spec = datagen::model_spec(model_id);
  if (method.kind == Method::Kind::curbs2 && method.j < 2) {
    throw ParameterError("curbs2 needs J >= 2");
  }
  const Grid grid = Grid::uniform(grid_points);

  ReplicationReport rep;
  rep.model = model_id;
  rep.sizes = sizes;
  rep.reps = reps;
  rep.seed = seed;
  rep.method = method.name();
  rep.true_k = static_cast<int>(spec.k());
  for (std::size_t r = 0; r < reps; ++r) {
    const FunctionalDataset data = datagen::generate(spec, sizes, grid, datagen::derive_seed(seed, r));
    const Clustering c = method.kind == Method::Kind::curbs1 ? curbs1(data, config)
                                                             : curbs2(data, method.j, config);
    rep.rand_values.push_back(rand_index(c.labels, *data.labels()));
    rep.khat.push_back(c.k);
    if (c.k < rep.true_k) {
      ++rep.k_less;
    } else if (c.k == rep.true_k) {
      ++rep.k_equal;
    } else {
      ++rep.k_greater;
    }
  }
  double sum = 0.0;
  for (double v : rep.rand_values) sum += v;
  rep.mean_rand = sum / static_cast<double>(reps);
  return rep;
}

std::string report_to_json(const ReplicationReport& r, int indent) {
  nlohmann::json j;
  j["model"] = r.model;
  j["sizes"] = r.sizes;
  j["reps"] = r.reps;
  j["seed"] = r.seed;
  j["method"] = r.method;
  j["true_k"] = r.true_k;
  j["mean_rand"] = r.mean_rand;
  j["khat_histogram"] = {{"less", r.k_less}, {"equal", r.k_equal}, {"greater", r.k_greater}};
  j["rand_values"] = r.rand_values;
  j["khat"] = r.khat;
  return j.dump(indent);
}

void write_report_csv(std::ostream& out, const std::vector<ReplicationReport>& reports) {
  out << "model,sizes,method,reps,khat_less,khat_equal,khat_greater,mean_rand\n";
  const auto old_precision = out.precision(6);
  for (const auto& r : reports) {
    out << r.model << ',' << join_sizes(r.sizes) << ',' << r.method << ',' << r.reps << ','
        << r.k_less << ',' << r.k_equal << ',' << r.k_greater << ',' << r.mean_rand << '\n';
  }
  out.precision(old_precision);
}

}  // namespace curbs::eval
