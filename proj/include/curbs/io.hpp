#ifndef CURBS_IO_HPP
#define CURBS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "curbs/curbs.hpp"
#include "curbs/kernel_space.hpp"

namespace curbs::io {

// One curve per row, comma separated. An optional first row whose first cell
// starts with "t=" gives the grid ("t=0,0.5,1"); without it the grid is
// uniform on [0,1]. Blank lines are skipped. Throws FormatError on ragged
// rows, non-numeric cells, an invalid grid or an empty file.
FunctionalDataset read_curves_csv(std::istream& in);
FunctionalDataset read_curves_csv(const std::filesystem::path& path);

void write_curves_csv(std::ostream& out, const FunctionalDataset& data, bool with_grid_header = true);
void write_curves_csv(const std::filesystem::path& path, const FunctionalDataset& data,
                      bool with_grid_header = true);

// Single column of integers; an optional non-numeric header line is skipped.
std::vector<int> read_labels(std::istream& in);
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const std::vector<int>& labels);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

// {"k": .., "labels": [..], "traces": [{"order": [..], "dw": [..], "n_max": .., "n_min": ..}]}
std::string clustering_to_json(const Clustering& c, int indent = 2);
// Reads back k and labels (traces are not restored).
Clustering clustering_from_json(const std::string& text);

}  // namespace curbs::io

#endif  // CURBS_IO_HPP
