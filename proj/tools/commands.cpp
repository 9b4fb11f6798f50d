#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pdsphere/analysis.hpp"
#include "pdsphere/density.hpp"
#include "pdsphere/embedding.hpp"
#include "pdsphere/error.hpp"
#include "pdsphere/io.hpp"
#include "pdsphere/persistence.hpp"
#include "pdsphere/sphere.hpp"
#include "pdsphere/synthetic.hpp"
#include "pdsphere/wasserstein.hpp"

namespace pdsphere::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void print(const json& report) { std::cout << report.dump(2) << '\n'; }

std::string step_name(const std::string& prefix, std::size_t i, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu.%s", prefix.c_str(), i, ext.c_str());
  return buf;
}

// ---------------------------------------------------------------------------
// Shared option groups

struct DensityOptions {
  int grid = 64;
  double sigma = 0.05;
  std::string homology = "all";
  std::string scale = "auto";

  DensityParams params() const { return {grid, sigma}; }
  HomologySelection selection() const { return parse_homology_selection(homology); }
};

const CLI::Validator kScaleValidator(
    [](std::string& text) -> std::string {
      if (text == "auto") return {};
      try {
        const double v = io::parse_double(text);
        if (v > 0.0 && std::isfinite(v)) return {};
      } catch (const Error&) {
      }
      return "scale must be 'auto' or a positive number (got '" + text + "')";
    },
    "auto|POSITIVE", "scale");

void add_normalization_options(CLI::App* sub, DensityOptions& o) {
  sub->add_option("--homology", o.homology, "Homology to keep: 0, 1 or all")
      ->check(CLI::IsMember({"0", "1", "all"}))
      ->capture_default_str();
  sub->add_option("--scale", o.scale, "Normalization scale, or auto for the global maximum")
      ->check(kScaleValidator)
      ->capture_default_str();
}

void add_density_options(CLI::App* sub, DensityOptions& o) {
  sub->add_option("--grid", o.grid, "Grid resolution K")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  sub->add_option("--sigma", o.sigma, "Kernel bandwidth in normalized units")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_normalization_options(sub, o);
}

double resolve_scale(const DensityOptions& o, std::span<const DiagramPair> pairs) {
  return o.scale == "auto" ? global_scale(pairs) : io::parse_double(o.scale);
}

json density_json(const DensityOptions& o, double scale) {
  return {{"grid", o.grid},
          {"sigma", o.sigma},
          {"homology", o.homology},
          {"scale_policy", o.scale},
          {"scale", scale}};
}

// ---------------------------------------------------------------------------
// Manifests: CSV with columns id, label, diagram and optional cloud, score,
// channel. Paths are relative to the manifest. Rows sharing an id with
// different channel values are channels of one item.

struct Dataset {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::optional<double>> scores;
  std::vector<std::string> channels;
  std::vector<std::vector<DiagramPair>> per_channel;  // [channel][item]

  std::vector<DiagramPair> all_pairs() const {
    std::vector<DiagramPair> out;
    for (const auto& c : per_channel) out.insert(out.end(), c.begin(), c.end());
    return out;
  }
};

Dataset read_manifest(const fs::path& path) {
  const auto table = io::read_csv(path, false);
  const auto id_col = table.column("id");
  const auto diagram_col = table.column("diagram");
  const auto label_col = table.find_column("label");
  const auto score_col = table.find_column("score");
  const auto channel_col = table.find_column("channel");
  const fs::path base = path.parent_path();

  Dataset ds;
  std::map<std::string, std::size_t> item_index;
  std::map<std::string, std::size_t> channel_index;
  std::map<std::pair<std::size_t, std::size_t>, DiagramPair> cells;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(r + 2) + ": expected " +
                       std::to_string(table.header.size()) + " fields");
    }
    const std::string& id = row[id_col];
    const std::string channel = channel_col ? row[*channel_col] : "";
    auto [it, fresh] = item_index.emplace(id, ds.ids.size());
    if (fresh) {
      ds.ids.push_back(id);
      ds.labels.push_back(label_col ? row[*label_col] : "");
      ds.scores.push_back(score_col && !row[*score_col].empty()
                              ? std::optional<double>(io::parse_double(row[*score_col]))
                              : std::nullopt);
    }
    auto [cit, cfresh] = channel_index.emplace(channel, ds.channels.size());
    if (cfresh) ds.channels.push_back(channel);
    const auto key = std::make_pair(cit->second, it->second);
    if (cells.contains(key)) {
      throw ParseError(path.string() + ": duplicate entry for item '" + id + "' channel '" +
                       channel + "'");
    }
    fs::path diagram = row[diagram_col];
    if (diagram.is_relative()) diagram = base / diagram;
    cells.emplace(key, io::read_diagrams(diagram));
  }
  if (ds.ids.empty()) throw ParseError(path.string() + ": manifest lists no items");

  ds.per_channel.resize(ds.channels.size());
  for (std::size_t c = 0; c < ds.channels.size(); ++c) {
    for (std::size_t i = 0; i < ds.ids.size(); ++i) {
      auto it = cells.find({c, i});
      if (it == cells.end()) {
        throw ParseError(path.string() + ": item '" + ds.ids[i] + "' lacks channel '" +
                         ds.channels[c] + "'");
      }
      ds.per_channel[c].push_back(std::move(it->second));
    }
  }
  return ds;
}

std::vector<SqrtDensity> single_channel_densities(const Dataset& ds, const DensityOptions& o,
                                                  double scale, const char* command) {
  if (ds.channels.size() != 1) {
    throw ParameterError(std::string(command) + " needs a single-channel manifest");
  }
  const auto set = normalize_all(ds.per_channel[0], o.selection(), scale);
  return densify_all(set.diagrams, o.params());
}

// ---------------------------------------------------------------------------
// Commands

struct Command {
  CLI::App* sub;
  std::function<void()> run;
};

Command embed_command(CLI::App& app) {
  struct Opts {
    std::string input, output, channel = "0";
    std::size_t m = 2, tau = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("embed", "Delay-embed a time series into a point cloud");
  sub->add_option("--input", o->input, "Time-series CSV")->required();
  sub->add_option("--channel", o->channel, "Column name or zero-based index")
      ->capture_default_str();
  sub->add_option("--m", o->m, "Embedding dimension")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--tau", o->tau, "Delay in samples")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--output", o->output, "Point-cloud CSV")->required();
  return {sub, [o] {
            const auto series = io::read_time_series(o->input, o->channel);
            const auto cloud = delay_embed(series, o->m, o->tau);
            io::write_point_cloud(o->output, cloud);
            print({{"command", "embed"},
                   {"parameters", {{"m", o->m}, {"tau", o->tau}, {"channel", o->channel}}},
                   {"points", cloud.size()},
                   {"dim", cloud.dim()}});
          }};
}

Command persist_command(CLI::App& app) {
  struct Opts {
    std::string input, output;
    double max_scale = std::numeric_limits<double>::infinity();
    bool temporal = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("persist", "H0 and H1 persistence of a point cloud");
  sub->add_option("--input", o->input, "Point-cloud CSV")->required();
  sub->add_option("--max-scale", o->max_scale, "Largest Rips scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--temporal-links", o->temporal, "Link consecutive points at scale 0");
  sub->add_option("--output", o->output, "Diagram CSV")->required();
  return {sub, [o] {
            const auto cloud = io::read_point_cloud(o->input);
            const auto pairs = diagrams_of(cloud, {o->max_scale, o->temporal});
            io::write_diagrams(o->output, pairs);
            print({{"command", "persist"},
                   {"parameters",
                    {{"max_scale", io::format_double(o->max_scale)},
                     {"temporal_links", o->temporal}}},
                   {"h0", {{"finite", pairs.h0.pairs.size()}, {"essential", pairs.h0.essential.size()}}},
                   {"h1", {{"finite", pairs.h1.pairs.size()}, {"essential", pairs.h1.essential.size()}}}});
          }};
}

Command density_command(CLI::App& app) {
  struct Opts {
    std::string input, output;
    bool sqrt = false;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("density", "Kernel density of a diagram on a K x K grid");
  sub->add_option("--input", o->input, "Diagram CSV")->required();
  sub->add_option("--output", o->output, "Grid CSV")->required();
  sub->add_flag("--sqrt", o->sqrt, "Write the square-root density instead of the pdf");
  add_density_options(sub, o->d);
  return {sub, [o] {
            const std::vector<DiagramPair> pairs{io::read_diagrams(o->input)};
            const double scale = resolve_scale(o->d, pairs);
            const auto set = normalize_all(pairs, o->d.selection(), scale);
            const auto pdf = kde(set.diagrams[0], o->d.sigma, o->d.grid);
            io::write_grid(o->output, o->sqrt ? sqrt_transform(pdf).grid() : pdf.grid());
            print({{"command", "density"},
                   {"parameters", density_json(o->d, scale)},
                   {"points", set.diagrams[0].pairs.size()},
                   {"output", o->sqrt ? "sqrt" : "pdf"}});
          }};
}

Command dist_command(CLI::App& app) {
  struct Opts {
    std::string a, b, metric = "hilbert";
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("dist", "Distance between two diagrams");
  sub->add_option("--a", o->a, "First diagram CSV")->required();
  sub->add_option("--b", o->b, "Second diagram CSV")->required();
  sub->add_option("--metric", o->metric, "hilbert, w1 or w2")
      ->check(CLI::IsMember({"hilbert", "w1", "w2"}))
      ->capture_default_str();
  add_density_options(sub, o->d);
  return {sub, [o] {
            const std::vector<DiagramPair> pairs{io::read_diagrams(o->a), io::read_diagrams(o->b)};
            const double scale = resolve_scale(o->d, pairs);
            const auto set = normalize_all(pairs, o->d.selection(), scale);
            const Metric metric = parse_metric(o->metric);
            double value = 0.0;
            if (metric == Metric::kHilbert) {
              const auto dens = densify_all(set.diagrams, o->d.params());
              value = distance(dens[0], dens[1]);
            } else {
              value = wasserstein(set.diagrams[0], set.diagrams[1], metric == Metric::kW1 ? 1 : 2)
                          .distance;
            }
            print({{"command", "dist"},
                   {"parameters", density_json(o->d, scale)},
                   {"metric", o->metric},
                   {"distance", value}});
          }};
}

DistanceMatrix dataset_matrix(const Dataset& ds, const DensityOptions& o, double scale,
                              Metric metric) {
  std::vector<DistanceMatrix> per_channel;
  for (const auto& channel : ds.per_channel) {
    const auto set = normalize_all(channel, o.selection(), scale);
    per_channel.push_back(distance_matrix(set.diagrams, ds.ids, metric, o.params()));
  }
  return aggregate_mean(per_channel);
}

Command distmat_command(CLI::App& app) {
  struct Opts {
    std::string manifest, output, metric = "hilbert";
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("distmat", "Pairwise distance matrix over a manifest");
  sub->add_option("--manifest", o->manifest, "Manifest CSV")->required();
  sub->add_option("--output", o->output, "Matrix CSV; metadata goes to <output>.json")->required();
  sub->add_option("--metric", o->metric, "hilbert, w1 or w2")
      ->check(CLI::IsMember({"hilbert", "w1", "w2"}))
      ->capture_default_str();
  add_density_options(sub, o->d);
  return {sub, [o] {
            const auto ds = read_manifest(o->manifest);
            const auto all = ds.all_pairs();
            const double scale = resolve_scale(o->d, all);
            const auto m = dataset_matrix(ds, o->d, scale, parse_metric(o->metric));
            io::write_distance_matrix(o->output, m);
            const json meta{{"command", "distmat"},
                            {"parameters", density_json(o->d, scale)},
                            {"metric", o->metric},
                            {"items", ds.ids.size()},
                            {"channels", ds.channels}};
            io::write_text(o->output + ".json", meta.dump(2) + "\n");
            print(meta);
          }};
}

Command geodesic_command(CLI::App& app) {
  struct Opts {
    std::string from, to, output_dir;
    int steps = 5;
    bool alexandrov = false;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("geodesic", "Sample the sphere geodesic between two diagrams");
  sub->add_option("--from", o->from, "Start diagram CSV")->required();
  sub->add_option("--to", o->to, "End diagram CSV")->required();
  sub->add_option("--steps", o->steps, "Number of samples including both ends")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  sub->add_option("--output-dir", o->output_dir, "Directory for step_NNN.csv pdf grids")->required();
  sub->add_flag("--alexandrov", o->alexandrov,
                "Also write the matching-based diagram path as alexandrov_NNN.csv");
  add_density_options(sub, o->d);
  return {sub, [o] {
            const std::vector<DiagramPair> pairs{io::read_diagrams(o->from), io::read_diagrams(o->to)};
            const double scale = resolve_scale(o->d, pairs);
            const auto set = normalize_all(pairs, o->d.selection(), scale);
            const auto dens = densify_all(set.diagrams, o->d.params());
            fs::create_directories(o->output_dir);
            const fs::path dir = o->output_dir;
            const auto n = static_cast<std::size_t>(o->steps);

            std::vector<std::pair<PersistenceDiagram, PersistenceDiagram>> by_dim;
            if (o->alexandrov) {
              const auto sel = o->d.selection();
              for (int dim : {0, 1}) {
                const bool keep = sel == HomologySelection::kAll ||
                                  (dim == 0 ? sel == HomologySelection::kH0 : sel == HomologySelection::kH1);
                auto pick = [&](const DiagramPair& p) {
                  PersistenceDiagram pd = dim == 0 ? p.h0 : p.h1;
                  if (!keep) pd.pairs.clear(), pd.essential.clear();
                  return normalize_diagram(pd, scale);
                };
                by_dim.emplace_back(pick(pairs[0]), pick(pairs[1]));
              }
            }
            for (std::size_t i = 0; i < n; ++i) {
              const double s = static_cast<double>(i) / static_cast<double>(n - 1);
              const auto psi = geodesic(dens[0], dens[1], s);
              io::write_grid(dir / step_name("step", i, "csv"), to_pdf(psi).grid());
              if (o->alexandrov) {
                DiagramPair out;
                out.h0 = alexandrov_geodesic(by_dim[0].first, by_dim[0].second, s);
                out.h1 = alexandrov_geodesic(by_dim[1].first, by_dim[1].second, s);
                io::write_diagrams(dir / step_name("alexandrov", i, "csv"), out);
              }
            }
            print({{"command", "geodesic"},
                   {"parameters", density_json(o->d, scale)},
                   {"steps", n},
                   {"distance", distance(dens[0], dens[1])},
                   {"alexandrov", o->alexandrov}});
          }};
}

Command mean_command(CLI::App& app) {
  struct Opts {
    std::vector<std::string> inputs;
    std::string manifest, output;
    bool sqrt = false;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("mean", "Extrinsic mean of diagrams on the sphere");
  auto* in = sub->add_option("--inputs", o->inputs, "Diagram CSVs");
  auto* man = sub->add_option("--manifest", o->manifest, "Manifest CSV");
  in->excludes(man);
  sub->add_option("--output", o->output, "Grid CSV")->required();
  sub->add_flag("--sqrt", o->sqrt, "Write the square-root density instead of the pdf");
  add_density_options(sub, o->d);
  return {sub, [o] {
            Dataset ds;
            if (!o->manifest.empty()) {
              ds = read_manifest(o->manifest);
            } else {
              if (o->inputs.empty()) throw ParameterError("mean needs --inputs or --manifest");
              ds.channels = {""};
              ds.per_channel.resize(1);
              for (const auto& p : o->inputs) {
                ds.ids.push_back(p);
                ds.per_channel[0].push_back(io::read_diagrams(p));
              }
            }
            const double scale = resolve_scale(o->d, ds.all_pairs());
            const auto dens = single_channel_densities(ds, o->d, scale, "mean");
            const auto m = extrinsic_mean(dens);
            io::write_grid(o->output, o->sqrt ? m.grid() : to_pdf(m).grid());
            print({{"command", "mean"},
                   {"parameters", density_json(o->d, scale)},
                   {"items", dens.size()}});
          }};
}

void write_coords(const fs::path& path, const Dataset& ds, const Eigen::MatrixXd& coords) {
  std::string text = "id,label";
  for (Eigen::Index k = 0; k < coords.cols(); ++k) text += ",pc" + std::to_string(k + 1);
  text += '\n';
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    text += ds.ids[static_cast<std::size_t>(i)] + ',' + ds.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < coords.cols(); ++k) text += ',' + io::format_double(coords(i, k));
    text += '\n';
  }
  io::write_text(path, text);
}

Command pga_command(CLI::App& app) {
  struct Opts {
    std::string manifest, output_dir;
    std::size_t components = 2;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("pga", "Principal geodesic analysis of a manifest");
  sub->add_option("--manifest", o->manifest, "Manifest CSV")->required();
  sub->add_option("--components", o->components, "Number of components d")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--output-dir", o->output_dir, "Model directory; coords.csv is written alongside")
      ->required();
  add_density_options(sub, o->d);
  return {sub, [o] {
            const auto ds = read_manifest(o->manifest);
            const double scale = resolve_scale(o->d, ds.all_pairs());
            const auto dens = single_channel_densities(ds, o->d, scale, "pga");
            const auto f = pga_features(dens, o->components);
            fs::create_directories(o->output_dir);
            io::save_pga_model(o->output_dir, f.model);
            write_coords(fs::path(o->output_dir) / "coords.csv", ds, f.coords);
            print({{"command", "pga"},
                   {"parameters", density_json(o->d, scale)},
                   {"components", o->components},
                   {"variances", f.model.variances}});
          }};
}

Command knn_command(CLI::App& app) {
  struct Opts {
    std::string train, test, output, metric = "hilbert";
    int k = 1;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand(
      "knn", "k-nearest-neighbour classification (leave-one-out without --test)");
  sub->add_option("--train", o->train, "Training manifest CSV")->required();
  sub->add_option("--test", o->test, "Query manifest CSV");
  sub->add_option("--k", o->k, "Neighbours")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--metric", o->metric, "hilbert, w1 or w2")
      ->check(CLI::IsMember({"hilbert", "w1", "w2"}))
      ->capture_default_str();
  sub->add_option("--output", o->output, "Predictions CSV");
  add_density_options(sub, o->d);
  return {sub, [o] {
            const auto train = read_manifest(o->train);
            const Metric metric = parse_metric(o->metric);
            std::optional<Dataset> test;
            if (!o->test.empty()) test = read_manifest(o->test);
            auto all = train.all_pairs();
            if (test) {
              if (test->channels != train.channels) {
                throw ConfigurationError("test and training manifests have different channels");
              }
              const auto more = test->all_pairs();
              all.insert(all.end(), more.begin(), more.end());
            }
            const double scale = resolve_scale(o->d, all);

            std::vector<std::string> predicted;
            const Dataset& queries = test ? *test : train;
            if (!test) {
              predicted = knn_leave_one_out(dataset_matrix(train, o->d, scale, metric), train.labels, o->k);
            } else {
              Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(
                  static_cast<Eigen::Index>(test->ids.size()), static_cast<Eigen::Index>(train.ids.size()));
              for (std::size_t c = 0; c < train.channels.size(); ++c) {
                const auto ref = normalize_all(train.per_channel[c], o->d.selection(), scale);
                const auto qry = normalize_all(test->per_channel[c], o->d.selection(), scale);
                if (metric == Metric::kHilbert) {
                  cross += cross_distances(densify_all(qry.diagrams, o->d.params()),
                                           densify_all(ref.diagrams, o->d.params()));
                } else {
                  cross += cross_distances(qry.diagrams, ref.diagrams, metric);
                }
              }
              cross /= static_cast<double>(train.channels.size());
              predicted = knn_classify(cross, train.labels, o->k);
            }

            json report{{"command", "knn"},
                        {"parameters", density_json(o->d, scale)},
                        {"metric", o->metric},
                        {"k", o->k},
                        {"mode", test ? "test" : "leave-one-out"},
                        {"queries", queries.ids.size()}};
            const bool labelled = std::none_of(queries.labels.begin(), queries.labels.end(),
                                               [](const std::string& l) { return l.empty(); });
            if (labelled) report["accuracy"] = accuracy(predicted, queries.labels);
            if (!o->output.empty()) {
              std::string text = "id,label,predicted\n";
              for (std::size_t i = 0; i < predicted.size(); ++i) {
                text += queries.ids[i] + ',' + queries.labels[i] + ',' + predicted[i] + '\n';
              }
              io::write_text(o->output, text);
            }
            print(report);
          }};
}

Command regress_command(CLI::App& app) {
  struct Opts {
    std::string manifest, output;
    std::size_t components = 2;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("regress", "Leave-one-out regression of scores on PGA coordinates");
  sub->add_option("--manifest", o->manifest, "Manifest CSV with a score column")->required();
  sub->add_option("--components", o->components, "Number of PGA components")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--output", o->output, "Predictions CSV");
  add_density_options(sub, o->d);
  return {sub, [o] {
            const auto ds = read_manifest(o->manifest);
            Eigen::VectorXd scores(static_cast<Eigen::Index>(ds.ids.size()));
            for (std::size_t i = 0; i < ds.ids.size(); ++i) {
              if (!ds.scores[i]) throw ParseError("item '" + ds.ids[i] + "' has no score");
              scores(static_cast<Eigen::Index>(i)) = *ds.scores[i];
            }
            const double scale = resolve_scale(o->d, ds.all_pairs());
            const auto dens = single_channel_densities(ds, o->d, scale, "regress");
            const auto f = pga_features(dens, o->components);
            const auto r = loo_regression(f.coords, scores);
            if (!o->output.empty()) {
              std::string text = "id,score,predicted\n";
              for (std::size_t i = 0; i < ds.ids.size(); ++i) {
                const auto e = static_cast<Eigen::Index>(i);
                text += ds.ids[i] + ',' + io::format_double(scores(e)) + ',' +
                        io::format_double(r.predictions(e)) + '\n';
              }
              io::write_text(o->output, text);
            }
            print({{"command", "regress"},
                   {"parameters", density_json(o->d, scale)},
                   {"components", o->components},
                   {"pearson_r", std::isnan(r.pearson_r) ? json(nullptr) : json(r.pearson_r)},
                   {"ridge_used", r.ridge_used}});
          }};
}

Command bench_command(CLI::App& app) {
  struct Opts {
    BenchParams p;
    std::string output;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bench", "Time Hilbert and W1 distances on random diagrams");
  sub->add_option("--n", o->p.n_points, "Points per diagram")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--grid", o->p.grid, "Grid resolution K")->check(CLI::Range(2, 4096))->capture_default_str();
  sub->add_option("--sigma", o->p.sigma, "Kernel bandwidth")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--trials", o->p.trials, "Diagram pairs")->check(CLI::Range(10, 1000000))->capture_default_str();
  sub->add_option("--seed", o->p.seed, "Random seed")->capture_default_str();
  sub->add_option("--output", o->output, "Report JSON file");
  return {sub, [o] {
            const auto text = io::bench_report_json(benchmark(o->p));
            if (!o->output.empty()) io::write_text(o->output, text + "\n");
            std::cout << text << '\n';
          }};
}

Command heatmap_command(CLI::App& app) {
  struct Opts {
    std::string input, diagram, output;
    DensityOptions d;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("heatmap", "Write a grid or a diagram's density as a PGM image");
  auto* in = sub->add_option("--input", o->input, "Grid CSV");
  auto* dg = sub->add_option("--diagram", o->diagram, "Diagram CSV, densified first");
  in->excludes(dg);
  sub->add_option("--output", o->output, "PGM file")->required();
  add_density_options(sub, o->d);
  return {sub, [o] {
            Grid grid;
            json report{{"command", "heatmap"}};
            if (!o->input.empty()) {
              grid = io::read_grid(o->input);
            } else if (!o->diagram.empty()) {
              const std::vector<DiagramPair> pairs{io::read_diagrams(o->diagram)};
              const double scale = resolve_scale(o->d, pairs);
              const auto set = normalize_all(pairs, o->d.selection(), scale);
              grid = kde(set.diagrams[0], o->d.sigma, o->d.grid).grid();
              report["parameters"] = density_json(o->d, scale);
            } else {
              throw ParameterError("heatmap needs --input or --diagram");
            }
            io::write_pgm(o->output, grid);
            report["size"] = grid.rows();
            print(report);
          }};
}

Command synth_command(CLI::App& app) {
  struct Opts {
    SyntheticParams p;
    std::string output_dir;
    double max_scale = std::numeric_limits<double>::infinity();
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Generate the labelled synthetic point-cloud benchmark");
  sub->add_option("--classes", o->p.classes, "Number of classes (1-3)")->check(CLI::Range(1, 3))->capture_default_str();
  sub->add_option("--per-class", o->p.per_class, "Clouds per class")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", o->p.seed, "Random seed")->capture_default_str();
  sub->add_option("--min-points", o->p.min_points, "Fewest points per cloud")->capture_default_str();
  sub->add_option("--max-points", o->p.max_points, "Most points per cloud")->capture_default_str();
  sub->add_option("--noise", o->p.noise, "Gaussian jitter")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--max-scale", o->max_scale, "Largest Rips scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--output-dir", o->output_dir, "Output directory")->required();
  return {sub, [o] {
            const auto clouds = synthetic_benchmark(o->p);
            const fs::path dir = o->output_dir;
            fs::create_directories(dir / "clouds");
            fs::create_directories(dir / "diagrams");
            std::string manifest = "id,label,diagram,cloud\n";
            for (const auto& c : clouds) {
              const std::string cloud_rel = "clouds/" + c.id + ".csv";
              const std::string diagram_rel = "diagrams/" + c.id + ".csv";
              io::write_point_cloud(dir / cloud_rel, c.cloud);
              io::write_diagrams(dir / diagram_rel, diagrams_of(c.cloud, {o->max_scale, false}));
              manifest += c.id + ',' + c.label + ',' + diagram_rel + ',' + cloud_rel + '\n';
            }
            io::write_text(dir / "manifest.csv", manifest);
            print({{"command", "synth"},
                   {"parameters",
                    {{"classes", o->p.classes},
                     {"per_class", o->p.per_class},
                     {"seed", o->p.seed},
                     {"min_points", o->p.min_points},
                     {"max_points", o->p.max_points},
                     {"noise", o->p.noise},
                     {"max_scale", io::format_double(o->max_scale)}}},
                   {"items", clouds.size()}});
          }};
}

}  // namespace

std::function<void()> register_commands(CLI::App& app) {
  auto commands = std::make_shared<std::vector<Command>>(std::vector<Command>{
      embed_command(app), persist_command(app), density_command(app), dist_command(app),
      distmat_command(app), geodesic_command(app), mean_command(app), pga_command(app),
      knn_command(app), regress_command(app), bench_command(app), heatmap_command(app),
      synth_command(app)});
  return [commands] {
    for (const auto& c : *commands) {
      if (c.sub->parsed()) return c.run();
    }
  };
}

}  // namespace pdsphere::cli
