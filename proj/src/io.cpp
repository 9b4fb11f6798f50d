#include "pdsphere/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdsphere/error.hpp"

namespace pdsphere::io {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parses_as_double(const std::string& text) {
  try {
    parse_double(text);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

std::ifstream open_input(const fs::path& path) {
  if (!fs::exists(path)) throw FileNotFoundError("file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("cannot open: " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write: " + path.string());
  return out;
}

std::string where(const fs::path& path, std::size_t row) {
  return path.string() + ": row " + std::to_string(row + 1);
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError("empty numeric field");
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto res = std::from_chars(begin, t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ParseError("not a number: '" + t + "'");
  }
  return value;
}

std::optional<std::size_t> CsvTable::find_column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto idx = find_column(name);
  if (!idx) throw ParseError("missing column '" + name + "'");
  return *idx;
}

CsvTable read_csv(const fs::path& path, bool numeric_body) {
  auto in = open_input(path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split(t);
    if (first) {
      first = false;
      const bool numeric = !cells.empty() && std::all_of(cells.begin(), cells.end(), parses_as_double);
      if (!numeric_body || !numeric) {
        table.header = std::move(cells);
        continue;
      }
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

std::vector<TimeSeries> read_time_series_channels(const fs::path& path) {
  const auto table = read_csv(path, true);
  if (table.rows.empty()) throw ParseError(path.string() + ": no samples");
  const std::size_t width = table.rows.front().size();
  std::vector<std::vector<double>> columns(width);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != width) throw ParseError(where(path, r) + ": inconsistent column count");
    for (std::size_t c = 0; c < width; ++c) {
      try {
        columns[c].push_back(parse_double(table.rows[r][c]));
      } catch (const ParseError& e) {
        throw ParseError(where(path, r) + ": " + e.what());
      }
    }
  }
  std::vector<TimeSeries> out;
  for (std::size_t c = 0; c < width; ++c) {
    std::string name = c < table.header.size() ? table.header[c] : std::to_string(c);
    out.emplace_back(std::move(columns[c]), std::move(name));
  }
  return out;
}

TimeSeries read_time_series(const fs::path& path, const std::string& channel) {
  auto channels = read_time_series_channels(path);
  for (auto& ch : channels) {
    if (ch.name() == channel) return ch;
  }
  std::size_t index = 0;
  const auto res = std::from_chars(channel.data(), channel.data() + channel.size(), index);
  if (res.ec != std::errc() || res.ptr != channel.data() + channel.size()) {
    throw ParameterError("unknown channel '" + channel + "'");
  }
  if (index >= channels.size()) {
    throw ParameterError("channel index " + channel + " out of range (" +
                         std::to_string(channels.size()) + " channels)");
  }
  return channels[index];
}

void write_point_cloud(const fs::path& path, const PointCloud& cloud) {
  std::string text;
  for (std::size_t k = 0; k < cloud.dim(); ++k) text += (k ? ",x" : "x") + std::to_string(k);
  text += '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) text += ',';
      text += format_double(p[k]);
    }
    text += '\n';
  }
  write_text(path, text);
}

PointCloud read_point_cloud(const fs::path& path) {
  const auto table = read_csv(path, true);
  if (table.rows.empty()) throw ParseError(path.string() + ": point cloud has no points");
  const std::size_t dim = table.rows.front().size();
  std::vector<double> coords;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != dim) throw ParseError(where(path, r) + ": inconsistent dimension");
    for (const auto& cell : table.rows[r]) {
      try {
        coords.push_back(parse_double(cell));
      } catch (const ParseError& e) {
        throw ParseError(where(path, r) + ": " + e.what());
      }
    }
  }
  return PointCloud(dim, std::move(coords));
}

void write_diagrams(const fs::path& path, const DiagramPair& diagrams) {
  std::string text = "dim,birth,death\n";
  for (const auto* pd : {&diagrams.h0, &diagrams.h1}) {
    const std::string dim = pd == &diagrams.h0 ? "0" : "1";
    for (const auto& p : pd->pairs) {
      text += dim + ',' + format_double(p.birth) + ',' + format_double(p.death) + '\n';
    }
    for (double b : pd->essential) text += dim + ',' + format_double(b) + ",inf\n";
  }
  write_text(path, text);
}

DiagramPair read_diagrams(const fs::path& path) {
  const auto table = read_csv(path, false);
  const auto dim_col = table.column("dim");
  const auto birth_col = table.column("birth");
  const auto death_col = table.column("death");
  DiagramPair out;
  out.h0.homology_dim = 0;
  out.h1.homology_dim = 1;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) throw ParseError(where(path, r) + ": wrong field count");
    PersistenceDiagram* target = nullptr;
    if (row[dim_col] == "0") target = &out.h0;
    else if (row[dim_col] == "1") target = &out.h1;
    else throw ParseError(where(path, r) + ": dim must be 0 or 1");
    double birth = 0.0;
    double death = 0.0;
    try {
      birth = parse_double(row[birth_col]);
      death = parse_double(row[death_col]);
    } catch (const ParseError& e) {
      throw ParseError(where(path, r) + ": " + e.what());
    }
    if (!std::isfinite(birth) || birth < 0.0) throw ParseError(where(path, r) + ": invalid birth");
    if (std::isinf(death) && death > 0) {
      target->essential.push_back(birth);
    } else if (std::isfinite(death) && death > birth) {
      target->pairs.push_back({birth, death});
    } else if (!(std::isfinite(death) && death == birth)) {
      throw ParseError(where(path, r) + ": death must exceed birth");
    }
  }
  return out;
}

void write_grid(const fs::path& path, const Grid& grid) {
  std::string text;
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (c) text += ',';
      text += format_double(grid(r, c));
    }
    text += '\n';
  }
  write_text(path, text);
}

Grid read_grid(const fs::path& path) {
  const auto table = read_csv(path, true);
  if (!table.header.empty()) throw ParseError(path.string() + ": grid files have no header");
  const auto k = static_cast<Eigen::Index>(table.rows.size());
  if (k == 0) throw ParseError(path.string() + ": empty grid");
  Grid grid(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != k) {
      throw ParseError(where(path, static_cast<std::size_t>(r)) + ": grid must be square");
    }
    for (Eigen::Index c = 0; c < k; ++c) grid(r, c) = parse_double(row[static_cast<std::size_t>(c)]);
  }
  return grid;
}

void write_pgm(const fs::path& path, const Grid& grid) {
  const double top = grid.size() ? grid.maxCoeff() : 0.0;
  std::string data = "P5\n" + std::to_string(grid.cols()) + ' ' + std::to_string(grid.rows()) + "\n255\n";
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      const double v = top > 0.0 ? std::max(grid(r, c), 0.0) / top : 0.0;
      data += static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
  }
  write_text(path, data);
}

void write_distance_matrix(const fs::path& path, const DistanceMatrix& matrix) {
  std::string text;
  for (const auto& l : matrix.labels) text += ',' + l;
  text += '\n';
  for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
    text += matrix.labels[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) text += ',' + format_double(matrix.values(r, c));
    text += '\n';
  }
  write_text(path, text);
}

DistanceMatrix read_distance_matrix(const fs::path& path, Metric metric) {
  const auto table = read_csv(path, false);
  if (table.header.empty()) throw ParseError(path.string() + ": missing label header");
  DistanceMatrix out;
  out.metric = metric;
  out.labels.assign(table.header.begin() + 1, table.header.end());
  const auto n = static_cast<Eigen::Index>(out.labels.size());
  if (static_cast<Eigen::Index>(table.rows.size()) != n) throw ParseError(path.string() + ": matrix is not square");
  out.values.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != n + 1 || row[0] != out.labels[static_cast<std::size_t>(r)]) {
      throw ParseError(where(path, static_cast<std::size_t>(r)) + ": row label or width mismatch");
    }
    for (Eigen::Index c = 0; c < n; ++c) out.values(r, c) = parse_double(row[static_cast<std::size_t>(c + 1)]);
  }
  return out;
}

void save_pga_model(const fs::path& dir, const PgaModel& model) {
  fs::create_directories(dir);
  json manifest;
  manifest["grid"] = model.mean.resolution();
  manifest["sigma"] = model.mean.sigma();
  manifest["scale"] = model.mean.scale() ? json(*model.mean.scale()) : json(nullptr);
  manifest["variances"] = model.variances;
  manifest["mean"] = "mean.csv";
  write_grid(dir / "mean.csv", model.mean.grid());
  json files = json::array();
  for (std::size_t c = 0; c < model.components.size(); ++c) {
    char name[32];
    std::snprintf(name, sizeof name, "component_%03zu.csv", c);
    write_grid(dir / name, model.components[c].values());
    files.push_back(name);
  }
  manifest["components"] = files;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

PgaModel load_pga_model(const fs::path& dir) {
  auto in = open_input(dir / "manifest.json");
  json manifest;
  try {
    in >> manifest;
    const double sigma = manifest.at("sigma").get<double>();
    std::optional<double> scale;
    if (!manifest.at("scale").is_null()) scale = manifest.at("scale").get<double>();
    SqrtDensity mean(read_grid(dir / manifest.at("mean").get<std::string>()), sigma, scale);
    PgaModel model{mean, {}, manifest.at("variances").get<std::vector<double>>()};
    for (const auto& f : manifest.at("components")) {
      model.components.emplace_back(mean, read_grid(dir / f.get<std::string>()));
    }
    if (model.components.size() != model.variances.size()) {
      throw ParseError("component and variance counts differ");
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError((dir / "manifest.json").string() + ": " + e.what());
  }
}

std::string bench_report_json(const BenchReport& report) {
  auto timing = [](const MetricTiming& t) {
    return json{{"mean_seconds", t.mean_seconds},
                {"stddev_seconds", t.stddev_seconds},
                {"repetitions", t.repetitions}};
  };
  json j;
  j["parameters"] = {{"n_points", report.params.n_points},
                     {"grid", report.params.grid},
                     {"sigma", report.params.sigma},
                     {"trials", report.params.trials},
                     {"seed", report.params.seed}};
  j["pairs"] = report.pairs;
  j["hilbert"] = timing(report.hilbert);
  j["w1"] = timing(report.w1);
  j["speedup"] = report.hilbert.mean_seconds > 0 ? report.w1.mean_seconds / report.hilbert.mean_seconds : 0.0;
  return j.dump(2) + "\n";
}

BenchReport parse_bench_report(const std::string& text) {
  try {
    const auto j = json::parse(text);
    BenchReport r;
    const auto& p = j.at("parameters");
    r.params.n_points = p.at("n_points").get<int>();
    r.params.grid = p.at("grid").get<int>();
    r.params.sigma = p.at("sigma").get<double>();
    r.params.trials = p.at("trials").get<int>();
    r.params.seed = p.at("seed").get<std::uint64_t>();
    r.pairs = j.at("pairs").get<std::size_t>();
    auto timing = [](const json& t) {
      return MetricTiming{t.at("mean_seconds").get<double>(), t.at("stddev_seconds").get<double>(),
                          t.at("repetitions").get<int>()};
    };
    r.hilbert = timing(j.at("hilbert"));
    r.w1 = timing(j.at("w1"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench report: ") + e.what());
  }
}

}  // namespace pdsphere::io
