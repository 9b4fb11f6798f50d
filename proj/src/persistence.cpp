#include "pdsphere/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "pdsphere/error.hpp"

namespace pdsphere {
namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
  if (a.birth != b.birth) return a.birth < b.birth;
  if (a.dim != b.dim) return a.dim < b.dim;
  return a.vertices < b.vertices;
}

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void check_cloud(const PointCloud& cloud) {
  if (cloud.empty()) throw ParameterError("point cloud is empty");
}

// Edge list shared by build_rips and h0_unionfind so both see bit-identical
// births in the same order.
struct Edge {
  std::uint32_t a;
  std::uint32_t b;
  double birth;
};

std::vector<Edge> rips_edges(const PointCloud& cloud, double max_scale, bool temporal_links) {
  const auto n = static_cast<std::uint32_t>(cloud.size());
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (temporal_links && j == i + 1) {
        edges.push_back({i, j, 0.0});
        continue;
      }
      const double d = cloud.distance(i, j);
      if (d <= max_scale) edges.push_back({i, j, d});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.birth != y.birth) return x.birth < y.birth;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return edges;
}

// Sorted symmetric difference of two Z/2 columns, written into out.
void add_columns(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y,
                 std::vector<std::uint32_t>& out) {
  out.clear();
  std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void link(std::size_t child, std::size_t root) { parent_[child] = root; }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

HomologySelection parse_homology_selection(const std::string& text) {
  if (text == "0") return HomologySelection::kH0;
  if (text == "1") return HomologySelection::kH1;
  if (text == "all") return HomologySelection::kAll;
  throw ParameterError("homology selection must be 0, 1 or all (got '" + text + "')");
}

const char* to_string(HomologySelection selection) noexcept {
  switch (selection) {
    case HomologySelection::kH0: return "0";
    case HomologySelection::kH1: return "1";
    case HomologySelection::kAll: return "all";
  }
  return "?";
}

Filtration build_rips(const PointCloud& cloud, double max_scale, bool temporal_links) {
  check_cloud(cloud);
  if (!(max_scale > 0.0)) throw ParameterError("max_scale must be positive");

  const auto n = static_cast<std::uint32_t>(cloud.size());
  const auto edges = rips_edges(cloud, max_scale, temporal_links);

  Filtration f;
  f.vertex_count = n;
  for (std::uint32_t v = 0; v < n; ++v) f.simplices.push_back({{v, 0, 0}, 0, 0.0});

  constexpr double kAbsent = -1.0;
  std::vector<double> weight(static_cast<std::size_t>(n) * n, kAbsent);
  for (const auto& e : edges) {
    weight[static_cast<std::size_t>(e.a) * n + e.b] = e.birth;
    f.simplices.push_back({{e.a, e.b, 0}, 1, e.birth});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const double* row_i = weight.data() + static_cast<std::size_t>(i) * n;
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double wij = row_i[j];
      if (wij < 0.0) continue;
      const double* row_j = weight.data() + static_cast<std::size_t>(j) * n;
      for (std::uint32_t k = j + 1; k < n; ++k) {
        const double wik = row_i[k];
        const double wjk = row_j[k];
        if (wik < 0.0 || wjk < 0.0) continue;
        f.simplices.push_back({{i, j, k}, 2, std::max({wij, wik, wjk})});
      }
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(), simplex_less);
  return f;
}

namespace {

// Index of every face, resolved against the filtration order.
struct FaceIndex {
  std::vector<std::int64_t> vertex;
  std::unordered_map<std::uint64_t, std::uint32_t> edge;
};

FaceIndex index_faces(const Filtration& f) {
  FaceIndex index;
  std::uint32_t max_vertex = 0;
  for (const auto& s : f.simplices) {
    if (s.dim < 0 || s.dim > 2) throw StructuralError("simplex dimension must be 0, 1 or 2");
    if (!std::isfinite(s.birth) || s.birth < 0.0) {
      throw StructuralError("simplex birth must be finite and non-negative");
    }
    for (int k = 0; k <= s.dim; ++k) max_vertex = std::max(max_vertex, s.vertices[k]);
  }
  index.vertex.assign(static_cast<std::size_t>(max_vertex) + 1, -1);
  for (std::size_t i = 0; i < f.simplices.size(); ++i) {
    const auto& s = f.simplices[i];
    for (int k = 0; k < s.dim; ++k) {
      if (s.vertices[k] >= s.vertices[k + 1]) {
        throw StructuralError("simplex vertices must be strictly increasing");
      }
    }
    if (i > 0 && simplex_less(s, f.simplices[i - 1])) {
      throw StructuralError("filtration is not sorted by (birth, dim, vertices)");
    }
    if (s.dim == 0) {
      if (index.vertex[s.vertices[0]] != -1) throw StructuralError("duplicate vertex");
      index.vertex[s.vertices[0]] = static_cast<std::int64_t>(i);
    } else if (s.dim == 1) {
      const bool inserted =
          index.edge.emplace(edge_key(s.vertices[0], s.vertices[1]), static_cast<std::uint32_t>(i))
              .second;
      if (!inserted) throw StructuralError("duplicate edge");
    }
  }
  return index;
}

std::vector<std::uint32_t> boundary(const Filtration& f, const FaceIndex& index, std::size_t i) {
  const auto& s = f.simplices[i];
  std::vector<std::uint32_t> col;
  auto require = [&](std::int64_t face) {
    if (face < 0 || static_cast<std::size_t>(face) >= i) {
      throw StructuralError("simplex " + std::to_string(i) + " has a face that is missing or later");
    }
    const auto& fs = f.simplices[static_cast<std::size_t>(face)];
    if (fs.birth > s.birth) throw StructuralError("simplex is born before one of its faces");
    col.push_back(static_cast<std::uint32_t>(face));
  };
  auto edge_at = [&](std::uint32_t a, std::uint32_t b) -> std::int64_t {
    const auto it = index.edge.find(edge_key(a, b));
    return it == index.edge.end() ? -1 : static_cast<std::int64_t>(it->second);
  };
  if (s.dim == 1) {
    require(index.vertex[s.vertices[0]]);
    require(index.vertex[s.vertices[1]]);
  } else if (s.dim == 2) {
    require(edge_at(s.vertices[0], s.vertices[1]));
    require(edge_at(s.vertices[0], s.vertices[2]));
    require(edge_at(s.vertices[1], s.vertices[2]));
  }
  std::sort(col.begin(), col.end());
  return col;
}

}  // namespace

void validate_filtration(const Filtration& filtration) {
  const auto index = index_faces(filtration);
  for (std::size_t i = 0; i < filtration.simplices.size(); ++i) boundary(filtration, index, i);
}

DiagramPair compute_persistence(const Filtration& filtration) {
  const auto& simplices = filtration.simplices;
  const auto index = index_faces(filtration);
  const std::size_t n = simplices.size();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::vector<std::uint32_t>> reduced(n);
  std::vector<std::uint32_t> column_with_low(n, kNone);
  std::vector<bool> cleared(n, false);
  std::vector<std::uint32_t> scratch;

  // Triangles first so that killed edges can skip their own reduction.
  for (int dim = 2; dim >= 1; --dim) {
    for (std::size_t j = 0; j < n; ++j) {
      if (simplices[j].dim != dim || cleared[j]) continue;
      auto col = boundary(filtration, index, j);
      while (!col.empty()) {
        const std::uint32_t other = column_with_low[col.back()];
        if (other == kNone) break;
        add_columns(col, reduced[other], scratch);
        col.swap(scratch);
      }
      if (col.empty()) continue;
      const std::uint32_t low = col.back();
      column_with_low[low] = static_cast<std::uint32_t>(j);
      cleared[low] = true;
      reduced[j] = std::move(col);
    }
  }

  DiagramPair out;
  out.h0.homology_dim = 0;
  out.h1.homology_dim = 1;
  std::vector<bool> paired(n, false);
  for (std::size_t low = 0; low < n; ++low) {
    const std::uint32_t j = column_with_low[low];
    if (j == kNone) continue;
    paired[low] = true;
    paired[j] = true;
    const double birth = simplices[low].birth;
    const double death = simplices[j].birth;
    if (death == birth) continue;
    auto& target = simplices[low].dim == 0 ? out.h0 : out.h1;
    target.pairs.push_back({birth, death});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (paired[i] || simplices[i].dim > 1) continue;
    auto& target = simplices[i].dim == 0 ? out.h0 : out.h1;
    target.essential.push_back(simplices[i].birth);
  }
  return out;
}

PersistenceDiagram h0_unionfind(const PointCloud& cloud, bool temporal_links, double max_scale) {
  check_cloud(cloud);
  if (!(max_scale > 0.0)) throw ParameterError("max_scale must be positive");
  const auto edges = rips_edges(cloud, max_scale, temporal_links);

  PersistenceDiagram pd;
  pd.homology_dim = 0;
  UnionFind uf(cloud.size());
  // Every vertex is born at 0, so the elder rule reduces to index order.
  for (const auto& e : edges) {
    std::size_t ra = uf.find(e.a);
    std::size_t rb = uf.find(e.b);
    if (ra == rb) continue;
    if (ra > rb) std::swap(ra, rb);
    uf.link(rb, ra);
    if (e.birth > 0.0) pd.pairs.push_back({0.0, e.birth});
  }
  for (std::size_t v = 0; v < cloud.size(); ++v) {
    if (uf.find(v) == v) pd.essential.push_back(0.0);
  }
  return pd;
}

PersistenceDiagram normalize_diagram(const PersistenceDiagram& diagram, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("normalization scale must be positive and finite");
  }
  auto check = [&](double v) {
    if (v > scale) {
      throw RangeError("coordinate " + std::to_string(v) + " exceeds normalization scale " +
                       std::to_string(scale));
    }
  };
  PersistenceDiagram out;
  out.homology_dim = diagram.homology_dim;
  out.scale = scale;
  for (const auto& p : diagram.pairs) {
    check(p.birth);
    check(p.death);
    const PersistencePair q{p.birth / scale, p.death / scale};
    if (q.death > q.birth) out.pairs.push_back(q);
  }
  for (double b : diagram.essential) {
    check(b);
    const double nb = b / scale;
    if (nb < 1.0) out.pairs.push_back({nb, 1.0});
  }
  return out;
}

double global_scale(std::span<const PersistenceDiagram> diagrams) {
  double best = 0.0;
  for (const auto& d : diagrams) {
    for (const auto& p : d.pairs) best = std::max({best, p.birth, p.death});
    for (double b : d.essential) best = std::max(best, b);
  }
  return best > 0.0 ? best : 1.0;
}

double global_scale(std::span<const DiagramPair> diagrams) {
  std::vector<PersistenceDiagram> flat;
  flat.reserve(2 * diagrams.size());
  for (const auto& d : diagrams) {
    flat.push_back(d.h0);
    flat.push_back(d.h1);
  }
  return global_scale(std::span<const PersistenceDiagram>(flat));
}

PersistenceDiagram select_homology(const DiagramPair& diagrams, HomologySelection selection) {
  switch (selection) {
    case HomologySelection::kH0: return diagrams.h0;
    case HomologySelection::kH1: return diagrams.h1;
    case HomologySelection::kAll: break;
  }
  PersistenceDiagram out = diagrams.h0;
  out.homology_dim = kMixedDimensions;
  out.pairs.insert(out.pairs.end(), diagrams.h1.pairs.begin(), diagrams.h1.pairs.end());
  out.essential.insert(out.essential.end(), diagrams.h1.essential.begin(),
                       diagrams.h1.essential.end());
  if (diagrams.h0.scale != diagrams.h1.scale) {
    throw ConfigurationError("cannot combine diagrams normalized with different scales");
  }
  return out;
}

void validate_diagram(const PersistenceDiagram& diagram) {
  for (const auto& p : diagram.pairs) {
    if (!std::isfinite(p.birth) || !std::isfinite(p.death)) {
      throw ParameterError("diagram pair has a non-finite coordinate");
    }
    if (p.birth < 0.0) throw RangeError("diagram birth is negative");
    if (!(p.death > p.birth)) throw RangeError("diagram pair has death <= birth");
    if (diagram.normalized() && p.death > 1.0) {
      throw RangeError("normalized diagram coordinate exceeds 1");
    }
  }
  for (double b : diagram.essential) {
    if (!std::isfinite(b) || b < 0.0) throw RangeError("essential birth must be finite and >= 0");
  }
  if (diagram.normalized() && !diagram.essential.empty()) {
    throw RangeError("normalized diagram still carries essential bars");
  }
}

}  // namespace pdsphere
