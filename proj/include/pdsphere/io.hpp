#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdsphere/analysis.hpp"
#include "pdsphere/density.hpp"
#include "pdsphere/embedding.hpp"
#include "pdsphere/persistence.hpp"
#include "pdsphere/sphere.hpp"

namespace pdsphere::io {

namespace fs = std::filesystem;

// Shortest text that reads back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Comma-separated table. Blank lines and lines starting with '#' are skipped.
struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws ParseError when absent.
  std::size_t column(const std::string& name) const;
  std::optional<std::size_t> find_column(const std::string& name) const;
};
// A first row that does not parse as numbers is treated as the header when
// numeric_body is set; otherwise the first row is always the header.
CsvTable read_csv(const fs::path& path, bool numeric_body);
void write_text(const fs::path& path, const std::string& text);

// Time series: one column, or several with a channel chosen by name or
// zero-based index.
std::vector<TimeSeries> read_time_series_channels(const fs::path& path);
TimeSeries read_time_series(const fs::path& path, const std::string& channel = "0");

void write_point_cloud(const fs::path& path, const PointCloud& cloud);
PointCloud read_point_cloud(const fs::path& path);

// Header "dim,birth,death"; essential bars are written with death "inf".
void write_diagrams(const fs::path& path, const DiagramPair& diagrams);
DiagramPair read_diagrams(const fs::path& path);

// K rows by K columns; row r holds death cell r (y grows downward).
void write_grid(const fs::path& path, const Grid& grid);
Grid read_grid(const fs::path& path);

// Binary 8-bit PGM scaled so the largest cell maps to 255.
void write_pgm(const fs::path& path, const Grid& grid);

// Header row ",label_1,...", then one labelled row per item.
void write_distance_matrix(const fs::path& path, const DistanceMatrix& matrix);
DistanceMatrix read_distance_matrix(const fs::path& path, Metric metric);

// Directory with mean.csv, component_NNN.csv and manifest.json.
void save_pga_model(const fs::path& dir, const PgaModel& model);
PgaModel load_pga_model(const fs::path& dir);

std::string bench_report_json(const BenchReport& report);
BenchReport parse_bench_report(const std::string& json);

}  // namespace pdsphere::io
