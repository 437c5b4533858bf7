#include "curbs/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "curbs/errors.hpp"

namespace curbs::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, std::size_t line_no) {
  if (cell.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty cell");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE) {
    throw FormatError("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

FunctionalDataset read_curves_csv(std::istream& in) {
  std::optional<std::vector<double>> grid_points;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    auto cells = split_commas(line);
    if (!grid_points && rows.empty() && cells.front().rfind("t=", 0) == 0) {
      cells.front() = trim(cells.front().substr(2));
      std::vector<double> pts;
      for (const auto& c : cells) pts.push_back(parse_double(c, line_no));
      grid_points = std::move(pts);
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rows.front().size()) + " values, found " +
                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("no curves in input");
  const std::size_t m = rows.front().size();
  if (grid_points && grid_points->size() != m) {
    throw FormatError("grid header has " + std::to_string(grid_points->size()) +
                      " points but curves have " + std::to_string(m));
  }
  try {
    Grid grid = grid_points ? Grid(*grid_points) : Grid::uniform(m);
    std::vector<Curve> curves;
    curves.reserve(rows.size());
    for (auto& r : rows) curves.emplace_back(std::move(r));
    return FunctionalDataset(std::move(grid), std::move(curves));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
}

FunctionalDataset read_curves_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_curves_csv(in);
}

void write_curves_csv(std::ostream& out, const FunctionalDataset& data, bool with_grid_header) {
  const auto old_precision = out.precision(17);
  if (with_grid_header) {
    const auto pts = data.grid().points();
    for (std::size_t i = 0; i < pts.size(); ++i) out << (i ? "," : "t=") << pts[i];
    out << '\n';
  }
  for (const Curve& c : data.curves()) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out << ',';
      out << c[i];
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_curves_csv(const std::filesystem::path& path, const FunctionalDataset& data,
                      bool with_grid_header) {
  auto out = open_out(path);
  write_curves_csv(out, data, with_grid_header);
}

std::vector<int> read_labels(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(line.c_str(), &end, 10);
    if (end != line.c_str() + line.size() || errno == ERANGE) {
      if (labels.empty() && line_no == 1) continue;  // header
      throw FormatError("labels line " + std::to_string(line_no) + ": '" + line +
                        "' is not an integer");
    }
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) throw FormatError("no labels in input");
  return labels;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_labels(in);
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  for (int l : labels) out << l << '\n';
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  write_labels(out, labels);
}

std::string clustering_to_json(const Clustering& c, int indent) {
  nlohmann::json j;
  j["k"] = c.k;
  j["labels"] = c.labels;
  nlohmann::json traces = nlohmann::json::array();
  for (const SplitTrace& t : c.traces) {
    nlohmann::json jt;
    jt["order"] = t.order;
    jt["dw"] = t.dw_values;
    jt["n_max"] = t.n_max;
    jt["n_min"] = t.n_min ? nlohmann::json(*t.n_min) : nlohmann::json(nullptr);
    traces.push_back(std::move(jt));
  }
  j["traces"] = std::move(traces);
  return j.dump(indent);
}

Clustering clustering_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Clustering c;
    c.k = j.at("k").get<int>();
    c.labels = j.at("labels").get<std::vector<int>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad clustering JSON: ") + e.what());
  }
}

}  // namespace curbs::io
