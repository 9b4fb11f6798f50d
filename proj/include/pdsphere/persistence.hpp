#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdsphere/embedding.hpp"

namespace pdsphere {

struct Simplex {
  // Sorted ascending; only the first dim + 1 entries are meaningful.
  std::array<std::uint32_t, 3> vertices{};
  int dim = 0;
  double birth = 0.0;
};

// Simplices sorted by (birth, dim, lexicographic vertices). Every face
// precedes its cofaces.
struct Filtration {
  std::vector<Simplex> simplices;
  std::size_t vertex_count = 0;
};

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

inline constexpr int kMixedDimensions = -1;

struct PersistenceDiagram {
  int homology_dim = 0;  // 0, 1 or kMixedDimensions
  std::vector<PersistencePair> pairs;
  std::vector<double> essential;  // births of bars that never die
  std::optional<double> scale;    // set once normalized to [0,1]^2

  std::size_t size() const noexcept { return pairs.size() + essential.size(); }
  bool empty() const noexcept { return size() == 0; }
  bool normalized() const noexcept { return scale.has_value(); }
};

struct DiagramPair {
  PersistenceDiagram h0;
  PersistenceDiagram h1;
};

enum class HomologySelection { kH0, kH1, kAll };

HomologySelection parse_homology_selection(const std::string& text);
const char* to_string(HomologySelection selection) noexcept;

// Vietoris-Rips filtration up to triangles. Edges longer than max_scale are
// left out. With temporal_links, edges (t, t+1) enter at birth 0.
Filtration build_rips(const PointCloud& cloud, double max_scale, bool temporal_links);

// Throws StructuralError when the ordering or face invariants are broken.
void validate_filtration(const Filtration& filtration);

// Z/2 column reduction of the boundary matrix (with clearing). Zero
// persistence pairs are dropped.
DiagramPair compute_persistence(const Filtration& filtration);

// H0 through Kruskal's algorithm on the same edge order as build_rips.
PersistenceDiagram h0_unionfind(const PointCloud& cloud, bool temporal_links,
                                double max_scale = std::numeric_limits<double>::infinity());

// Divides every coordinate by scale. Essential bars become (birth / scale, 1).
PersistenceDiagram normalize_diagram(const PersistenceDiagram& diagram, double scale);

// Largest finite coordinate (births, deaths, essential births) across all
// diagrams; 1 when every coordinate is zero.
double global_scale(std::span<const PersistenceDiagram> diagrams);
double global_scale(std::span<const DiagramPair> diagrams);

PersistenceDiagram select_homology(const DiagramPair& diagrams, HomologySelection selection);

// Checks birth/death ordering and non-negativity, plus [0,1] range when
// normalized.
void validate_diagram(const PersistenceDiagram& diagram);

}  // namespace pdsphere
