// curbs_cli: clustering, simulation, benchmarks and population-level checks.
//
// Exit codes: 0 ok, 2 input format, 3 degenerate data, 4 parameter error,
// 1 anything else.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curbs/curbs.hpp"
#include "curbs/datagen.hpp"
#include "curbs/errors.hpp"
#include "curbs/eval.hpp"
#include "curbs/io.hpp"
#include "curbs/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitFormat = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitParameter = 4;

struct RunConfig {
  std::string input;
  std::string output;
  std::string labels;
  std::string labels_output;
  std::string trace_csv;
  std::string kernel = "laplacian";
  std::string bandwidth = "median";
  std::size_t k = 0;
  std::uint64_t seed = 1;
  std::size_t reps = 20;
  std::string model;
  std::vector<std::size_t> sizes;
  std::string method = "curbs1";
  std::size_t grid_points = curbs::datagen::kDefaultGridPoints;
  std::size_t doublings = 8;
  std::string csv;
};

curbs::KernelConfig kernel_config(const RunConfig& cfg) {
  curbs::KernelConfig kc;
  if (cfg.kernel == "laplacian") {
    kc.family = curbs::KernelFamily::laplacian;
  } else if (cfg.kernel == "gaussian") {
    kc.family = curbs::KernelFamily::gaussian;
  } else {
    throw curbs::ParameterError("--kernel must be laplacian or gaussian");
  }
  if (cfg.bandwidth != "median") {
    std::size_t used = 0;
    double h = 0.0;
    try {
      h = std::stod(cfg.bandwidth, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cfg.bandwidth.size() || !(h > 0.0) || !std::isfinite(h)) {
      throw curbs::ParameterError("--bandwidth must be 'median' or a positive number");
    }
    kc.bandwidth = h;
  }
  return kc;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw curbs::FormatError("cannot write '" + path + "'");
  out << text << '\n';
}

std::string clustering_output(const curbs::Clustering& c, const RunConfig& cfg) {
  std::string text = curbs::io::clustering_to_json(c);
  if (!cfg.labels.empty()) {
    const auto truth = curbs::io::read_labels(fs::path(cfg.labels));
    if (truth.size() != c.labels.size()) {
      throw curbs::FormatError("labels file has " + std::to_string(truth.size()) +
                               " entries, data has " + std::to_string(c.labels.size()));
    }
    json j = json::parse(text);
    j["rand_index"] = curbs::eval::rand_index(c.labels, truth);
    text = j.dump(2);
  }
  if (!cfg.trace_csv.empty() && !c.traces.empty()) {
    std::ofstream out(cfg.trace_csv);
    if (!out) throw curbs::FormatError("cannot write '" + cfg.trace_csv + "'");
    curbs::write_trace_csv(out, c.traces.front());
  }
  return text;
}

int cmd_cluster(const RunConfig& cfg) {
  const auto data = curbs::io::read_curves_csv(fs::path(cfg.input));
  const auto c = curbs::curbs1(data, kernel_config(cfg));
  emit(cfg.output, clustering_output(c, cfg));
  return kExitOk;
}

int cmd_cluster_k(const RunConfig& cfg) {
  const auto data = curbs::io::read_curves_csv(fs::path(cfg.input));
  if (cfg.k < 2 || cfg.k > data.size()) {
    throw curbs::ParameterError("--k must satisfy 2 <= J <= n (n = " + std::to_string(data.size()) + ")");
  }
  const auto c = curbs::curbs2(data, cfg.k, kernel_config(cfg));
  emit(cfg.output, clustering_output(c, cfg));
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto& spec = curbs::datagen::model_spec(cfg.model);
  if (cfg.grid_points < 2) throw curbs::ParameterError("--grid-points must be >= 2");
  const auto data = curbs::datagen::generate(spec, cfg.sizes, curbs::Grid::uniform(cfg.grid_points),
                                             cfg.seed);
  if (cfg.output.empty() || cfg.output == "-") {
    curbs::io::write_curves_csv(std::cout, data, false);
  } else {
    curbs::io::write_curves_csv(fs::path(cfg.output), data, false);
  }
  std::string labels_path = cfg.labels_output;
  if (labels_path.empty() && !cfg.output.empty() && cfg.output != "-") {
    labels_path = cfg.output + ".labels";
  }
  if (!labels_path.empty()) curbs::io::write_labels(fs::path(labels_path), *data.labels());
  return kExitOk;
}

curbs::eval::Method method_of(const RunConfig& cfg) {
  if (cfg.method == "curbs1") return curbs::eval::Method::unknown_k();
  if (cfg.method == "curbs2") {
    if (cfg.k < 2) throw curbs::ParameterError("--method curbs2 needs --k >= 2");
    return curbs::eval::Method::fixed_k(cfg.k);
  }
  throw curbs::ParameterError("--method must be curbs1 or curbs2");
}

int cmd_bench(const RunConfig& cfg) {
  if (cfg.reps < 1) throw curbs::ParameterError("--reps must be >= 1");
  const auto report = curbs::eval::run_replications(cfg.model, cfg.sizes, cfg.reps, cfg.seed,
                                                    method_of(cfg), kernel_config(cfg),
                                                    cfg.grid_points);
  emit(cfg.output, curbs::eval::report_to_json(report));
  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv);
    if (!out) throw curbs::FormatError("cannot write '" + cfg.csv + "'");
    curbs::eval::write_report_csv(out, {report});
  }
  return kExitOk;
}

json bools(const std::vector<bool>& v) {
  json out = json::array();
  for (bool b : v) out.push_back(b);
  return out;
}

json condition_json(const curbs::oracle::ConditionReport& rep) {
  json j;
  auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
  j["k3_first_over_second"] = opt(rep.k3_first_over_second);
  j["k3_first_over_third"] = opt(rep.k3_first_over_third);
  j["k3_second_before_third"] = opt(rep.k3_second_before_third);
  j["k3_middle_increasing"] = opt(rep.k3_middle_increasing);
  j["k3_middle_decreasing"] = opt(rep.k3_middle_decreasing);
  j["first_pick"] = bools(rep.first_pick);
  j["next_pick"] = json::array();
  for (const auto& row : rep.next_pick) j["next_pick"].push_back(bools(row));
  j["segment_increasing"] = bools(rep.segment_increasing);
  j["segment_decreasing"] = bools(rep.segment_decreasing);
  j["exact_pick"] = json::array();
  for (const auto& row : rep.exact_pick) j["exact_pick"].push_back(bools(row));
  j["exact_order"] = rep.exact_order();
  return j;
}

int cmd_oracle_check(const RunConfig& cfg) {
  namespace oc = curbs::oracle;
  const std::string model = cfg.model.empty() ? "2a" : cfg.model;
  const std::vector<std::size_t> sizes = cfg.sizes.empty() ? std::vector<std::size_t>{100, 100}
                                                           : cfg.sizes;
  const auto& spec = curbs::datagen::model_spec(model);
  const auto data = curbs::datagen::generate(spec, sizes, curbs::Grid::uniform(cfg.grid_points),
                                             cfg.seed);
  const auto gram = curbs::gram_matrix(data, kernel_config(cfg));
  const auto setup = oc::PopulationSetup::from_labels(*data.labels());
  const auto eg = oc::embedding_gram(gram, setup);
  const auto d = eg.pairwise_d_matrix();
  const oc::Counts counts = setup.sizes;
  const std::size_t k = setup.k();

  json report;
  report["model"] = model;
  report["sizes"] = sizes;
  report["seed"] = cfg.seed;
  report["bandwidth"] = gram.bandwidth();
  json dj = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < k; ++j) row.push_back(d(i, j));
    dj.push_back(row);
  }
  report["pairwise_d"] = dj;
  bool all_pass = true;

  const auto empirical = curbs::transfer_trace(gram, curbs::ClusterView::all(gram.size()));
  std::vector<double> closed;
  if (k >= 2) {
    report["conditions"] = condition_json(oc::check_conditions(setup.sizes, d));
    const auto order = oc::certified_order(setup.sizes, d);
    report["certified_order"] = order ? json(*order) : json(nullptr);

    const auto star = oc::scc_star(eg, counts);
    json t1;
    t1["v_star"] = star.trace.v;
    t1["r_star"] = star.trace.r_stat;
    t1["h_star"] = star.trace.h;
    t1["n_max_star"] = star.trace.n_max;
    t1["n_min_star"] = star.trace.n_min ? json(*star.trace.n_min) : json(nullptr);
    t1["decision"] = star.decision == curbs::SccDecision::accept ? "accept" : "reject";
    const bool premise = oc::proportional_min_side(star.trace, counts);
    t1["proportional_min_side"] = premise;
    if (premise) {
      const bool pass = std::abs(star.trace.v - star.trace.r_stat) <=
                        1e-9 * std::max(1.0, std::abs(star.trace.r_stat));
      t1["v_equals_r"] = pass;
      all_pass = all_pass && pass;
    } else {
      t1["v_equals_r"] = nullptr;
    }
    report["single_cluster_check"] = t1;

    if (setup.n() >= 3) {
      const auto cross = oc::doubling_crossover(eg, setup.sizes, cfg.doublings);
      json cj;
      cj["n_values"] = cross.n_values;
      cj["n_min_star"] = cross.n_min_values;
      cj["h_star"] = cross.h_values;
      cj["crossover_n"] = cross.crossover_n ? json(*cross.crossover_n) : json(nullptr);
      report["doubling"] = cj;
    }

    const auto bs = oc::bs_star(eg, counts);
    if (order) {
      closed = oc::closed_form_curve(setup.sizes, d, *order);
      double worst = 0.0;
      for (std::size_t i = 0; i < closed.size(); ++i) {
        const double scale = std::max(1e-12, std::abs(closed[i]));
        worst = std::max(worst, std::abs(closed[i] - bs.trace.dw_star[i]) / scale);
      }
      const bool pass = worst <= 1e-9;
      report["closed_form"] = {{"max_rel_diff", worst}, {"pass", pass}};
      all_pass = all_pass && pass;
    }

    const auto c1 = oc::curbs1_star(eg, counts);
    const bool perfect = oc::is_perfect(c1, k);
    report["curbs1_star"] = {{"k_star", c1.k()}, {"perfect", perfect}};
    json c2 = json::array();
    for (std::size_t j = 2; j <= k + 2 && static_cast<std::int64_t>(j) <= setup.n(); ++j) {
      const auto res = oc::curbs2_star(eg, counts, j);
      c2.push_back({{"j", j}, {"pop", oc::satisfies_pop(res, k, j)}});
    }
    report["curbs2_star"] = c2;

    const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
    fs::create_directories(dir);
    std::ofstream curves(dir / "curves.csv");
    if (!curves) throw curbs::FormatError("cannot write curves.csv");
    curves.precision(17);
    curves << "r,dw,dw_star,closed_form\n";
    for (std::size_t i = 0; i < empirical.dw_values.size(); ++i) {
      curves << (i + 1) << ',' << empirical.dw_values[i] << ',' << bs.trace.dw_star[i] << ',';
      if (!closed.empty()) curves << closed[i];
      curves << '\n';
    }
  }
  report["all_pass"] = all_pass;
  const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  fs::create_directories(dir);
  emit((dir / "oracle_report.json").string(), report.dump(2));
  return all_pass ? kExitOk : kExitOther;
}

void add_kernel_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--kernel", cfg.kernel, "laplacian or gaussian");
  sub->add_option("--bandwidth", cfg.bandwidth, "'median' or a positive number");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel two-sample-distance clustering of functional data"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* cluster = app.add_subcommand("cluster", "cluster with an unknown number of groups");
  cluster->add_option("--input", cfg.input, "CSV of curves")->required();
  cluster->add_option("--output", cfg.output, "JSON output path (default stdout)");
  cluster->add_option("--labels", cfg.labels, "ground-truth labels for a Rand index");
  cluster->add_option("--trace-csv", cfg.trace_csv, "write the top-level split trace");
  add_kernel_flags(cluster, cfg);

  auto* cluster_k = app.add_subcommand("cluster-k", "cluster into exactly J groups");
  cluster_k->add_option("--input", cfg.input, "CSV of curves")->required();
  cluster_k->add_option("--output", cfg.output, "JSON output path (default stdout)");
  cluster_k->add_option("--k", cfg.k, "number of clusters J")->required();
  cluster_k->add_option("--labels", cfg.labels, "ground-truth labels for a Rand index");
  cluster_k->add_option("--trace-csv", cfg.trace_csv, "write the top-level split trace");
  add_kernel_flags(cluster_k, cfg);

  auto* simulate = app.add_subcommand("simulate", "sample curves from a simulation model");
  simulate->add_option("--model", cfg.model, "model id")->required();
  simulate->add_option("--sizes", cfg.sizes, "population sizes")->delimiter(',')->required();
  simulate->add_option("--seed", cfg.seed, "RNG seed");
  simulate->add_option("--output", cfg.output, "CSV output path (default stdout)");
  simulate->add_option("--labels-output", cfg.labels_output, "labels path (default <output>.labels)");
  simulate->add_option("--grid-points", cfg.grid_points, "grid size");

  auto* bench = app.add_subcommand("bench", "replicated simulation benchmark");
  bench->add_option("--model", cfg.model, "model id")->required();
  bench->add_option("--sizes", cfg.sizes, "population sizes")->delimiter(',')->required();
  bench->add_option("--reps", cfg.reps, "replications");
  bench->add_option("--seed", cfg.seed, "RNG seed");
  bench->add_option("--method", cfg.method, "curbs1 or curbs2");
  bench->add_option("--k", cfg.k, "J for curbs2");
  bench->add_option("--output", cfg.output, "JSON report path (default stdout)");
  bench->add_option("--csv", cfg.csv, "CSV report path");
  bench->add_option("--grid-points", cfg.grid_points, "grid size");
  add_kernel_flags(bench, cfg);

  auto* oracle = app.add_subcommand("oracle-check", "population-level checks on simulated data");
  oracle->add_option("--model", cfg.model, "model id (default 2a)");
  oracle->add_option("--sizes", cfg.sizes, "population sizes (default 100,100)")->delimiter(',');
  oracle->add_option("--seed", cfg.seed, "RNG seed");
  oracle->add_option("--output", cfg.output, "output directory (default .)");
  oracle->add_option("--doublings", cfg.doublings, "size doublings for the crossover scan");
  oracle->add_option("--grid-points", cfg.grid_points, "grid size");
  add_kernel_flags(oracle, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParameter;
  }

  try {
    if (cluster->parsed()) return cmd_cluster(cfg);
    if (cluster_k->parsed()) return cmd_cluster_k(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (oracle->parsed()) return cmd_oracle_check(cfg);
  } catch (const curbs::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const curbs::DegenerateDataError& e) {
    std::cerr << "degenerate data: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const curbs::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const curbs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
