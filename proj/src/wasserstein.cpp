#include "pdsphere/wasserstein.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "pdsphere/error.hpp"

namespace pdsphere {
namespace {

constexpr std::size_t kBruteForceLimit = 8;

void check_inputs(const PersistenceDiagram& x, const PersistenceDiagram& y, int q) {
  if (q != 1 && q != 2) throw ParameterError("Wasserstein order q must be 1 or 2");
  if (!x.essential.empty() || !y.essential.empty()) {
    throw ParameterError("Wasserstein distance needs finite diagrams; cap essential bars first");
  }
}

double ground_cost(const PersistencePair& a, const PersistencePair& b, int q) {
  const double db = a.birth - b.birth;
  const double dd = a.death - b.death;
  return q == 1 ? std::abs(db) + std::abs(dd) : db * db + dd * dd;
}

// Cost of sending a point to its orthogonal projection on the diagonal.
double diagonal_cost(const PersistencePair& a, int q) {
  const double gap = a.death - a.birth;
  return q == 1 ? std::abs(gap) : 0.5 * gap * gap;
}

double finish(double cost, int q) { return q == 1 ? cost : std::sqrt(cost); }

PersistencePair diagonal_projection(const PersistencePair& a) {
  const double mid = 0.5 * (a.birth + a.death);
  return {mid, mid};
}

}  // namespace

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw ShapeError("assignment cost matrix must be square");
  const auto n = static_cast<std::size_t>(cost.rows());
  if (n == 0) return {};
  if (!cost.allFinite()) throw ParameterError("assignment costs must be finite");

  // 1-based shortest augmenting path formulation; row 0 / column 0 are
  // sentinels.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double reduced = cost(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) - u[r] - v[c];
        if (reduced < minv[c]) {
          minv[c] = reduced;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t prev = way[col0];
      match[col0] = match[prev];
      col0 = prev;
    } while (col0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t c = 1; c <= n; ++c) row_to_col[match[c] - 1] = c - 1;
  return row_to_col;
}

double matching_cost(const PersistenceDiagram& x, const PersistenceDiagram& y,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs, int q) {
  double total = 0.0;
  for (const auto& [i, j] : pairs) {
    if (i != Matching::kDiagonal && j != Matching::kDiagonal) {
      total += ground_cost(x.pairs[i], y.pairs[j], q);
    } else if (i != Matching::kDiagonal) {
      total += diagonal_cost(x.pairs[i], q);
    } else if (j != Matching::kDiagonal) {
      total += diagonal_cost(y.pairs[j], q);
    }
  }
  return total;
}

WassersteinResult wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, int q) {
  check_inputs(x, y, q);
  const std::size_t n = x.pairs.size();
  const std::size_t m = y.pairs.size();
  const auto size = static_cast<Eigen::Index>(n + m);

  // Rows: X points, then diagonal slots for Y. Columns: Y points, then
  // diagonal slots for X. Diagonal-to-diagonal costs nothing.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < m; ++j) {
      cost(r, static_cast<Eigen::Index>(j)) = ground_cost(x.pairs[i], y.pairs[j], q);
    }
    cost.row(r).tail(static_cast<Eigen::Index>(n)).setConstant(diagonal_cost(x.pairs[i], q));
  }
  for (std::size_t j = 0; j < m; ++j) {
    cost.col(static_cast<Eigen::Index>(j)).tail(static_cast<Eigen::Index>(m))
        .setConstant(diagonal_cost(y.pairs[j], q));
  }

  const auto assignment = solve_assignment(cost);
  WassersteinResult result;
  std::vector<bool> y_matched(m, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t col = assignment[i];
    if (col < m) {
      result.matching.pairs.emplace_back(i, col);
      y_matched[col] = true;
    } else {
      result.matching.pairs.emplace_back(i, Matching::kDiagonal);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!y_matched[j]) result.matching.pairs.emplace_back(Matching::kDiagonal, j);
  }
  result.matching.cost = matching_cost(x, y, result.matching.pairs, q);
  result.distance = finish(result.matching.cost, q);
  return result;
}

double brute_force_wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, int q) {
  check_inputs(x, y, q);
  const std::size_t n = x.pairs.size();
  const std::size_t m = y.pairs.size();
  if (n + m > kBruteForceLimit) {
    throw ParameterError("brute-force oracle is limited to |X| + |Y| <= " +
                         std::to_string(kBruteForceLimit));
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(n);
  std::vector<bool> used(m, false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::function<void(std::size_t)> recurse = [&](std::size_t i) {
    if (i == n) {
      pairs.clear();
      for (std::size_t a = 0; a < n; ++a) pairs.emplace_back(a, choice[a]);
      for (std::size_t j = 0; j < m; ++j) {
        if (!used[j]) pairs.emplace_back(Matching::kDiagonal, j);
      }
      best = std::min(best, matching_cost(x, y, pairs, q));
      return;
    }
    choice[i] = Matching::kDiagonal;
    recurse(i + 1);
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      choice[i] = j;
      recurse(i + 1);
      used[j] = false;
    }
  };
  recurse(0);
  return finish(best, q);
}

PersistenceDiagram alexandrov_geodesic(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                       double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("geodesic parameter s must lie in [0,1]");
  const auto optimal = wasserstein(x, y, 2);

  PersistenceDiagram out;
  out.homology_dim = x.homology_dim == y.homology_dim ? x.homology_dim : kMixedDimensions;
  out.scale = x.scale == y.scale ? x.scale : std::nullopt;
  auto lerp = [s](const PersistencePair& a, const PersistencePair& b) {
    return PersistencePair{(1.0 - s) * a.birth + s * b.birth, (1.0 - s) * a.death + s * b.death};
  };
  for (const auto& [i, j] : optimal.matching.pairs) {
    PersistencePair p;
    if (i != Matching::kDiagonal && j != Matching::kDiagonal) {
      p = lerp(x.pairs[i], y.pairs[j]);
    } else if (i != Matching::kDiagonal) {
      p = lerp(x.pairs[i], diagonal_projection(x.pairs[i]));
    } else {
      p = lerp(diagonal_projection(y.pairs[j]), y.pairs[j]);
    }
    if (p.death > p.birth) out.pairs.push_back(p);
  }
  return out;
}

}  // namespace pdsphere
