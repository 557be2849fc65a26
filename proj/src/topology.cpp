#include "submetry/topology.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace submetry {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t i) {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

void UnionFind::unite(std::size_t i, std::size_t j) {
  i = find(i);
  j = find(j);
  if (i == j) return;
  if (rank_[i] < rank_[j]) std::swap(i, j);
  parent_[j] = i;
  if (rank_[i] == rank_[j]) ++rank_[i];
}

namespace {

// Node layout: piece i owns nodes 2i (start) and 2i+1 (end); isolated point j is
// node 2n + j.
std::vector<Vec3> node_positions(std::span<const CurvePiece> pieces, std::span<const Point> points) {
  std::vector<Vec3> pos;
  pos.reserve(2 * pieces.size() + points.size());
  for (const auto& piece : pieces) {
    pos.push_back(embed(point_on_piece(piece, 0.0)));
    pos.push_back(embed(point_on_piece(piece, 1.0)));
  }
  for (const auto& p : points) pos.push_back(embed(p));
  return pos;
}

}  // namespace

std::vector<Component> connected_components(std::span<const CurvePiece> pieces, std::span<const Point> points,
                                            double tol) {
  const std::size_t n = pieces.size();
  const std::vector<Vec3> pos = node_positions(pieces, points);
  UnionFind uf(pos.size());
  for (std::size_t i = 0; i < n; ++i) uf.unite(2 * i, 2 * i + 1);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      if ((pos[i] - pos[j]).norm() <= tol) uf.unite(i, j);
    }
  }

  std::vector<Component> out;
  std::vector<std::optional<std::size_t>> slot(pos.size());
  auto component_of = [&](std::size_t node) -> Component& {
    const std::size_t root = uf.find(node);
    if (!slot[root]) {
      slot[root] = out.size();
      out.emplace_back();
    }
    return out[*slot[root]];
  };
  for (std::size_t i = 0; i < n; ++i) component_of(2 * i).pieces.push_back(i);
  for (std::size_t j = 0; j < points.size(); ++j) component_of(2 * n + j).points.push_back(j);
  return out;
}

std::vector<Chain> order_into_chains(std::span<const CurvePiece> pieces, double tol) {
  const std::size_t n = pieces.size();
  const std::vector<Vec3> pos = node_positions(pieces, {});

  // partner[node] = the other piece's endpoint node that coincides with it.
  std::vector<std::optional<std::size_t>> partner(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    for (std::size_t j = i + 1; j < 2 * n; ++j) {
      if (i / 2 == j / 2) continue;
      if ((pos[i] - pos[j]).norm() > tol) continue;
      if (partner[i] || partner[j]) throw InvalidInput("order_into_chains: an endpoint is shared by more than two pieces");
      partner[i] = j;
      partner[j] = i;
    }
  }

  std::vector<bool> used(n, false);
  std::vector<Chain> chains;

  // Walks from `node` (an endpoint of an unused piece) through the piece to its
  // other end, then across the junction, appending oriented pieces.
  auto walk = [&](std::size_t node, Chain& chain) {
    while (true) {
      const std::size_t piece = node / 2;
      if (used[piece]) {
        chain.closed = true;
        return;
      }
      used[piece] = true;
      const bool forward = (node % 2 == 0);
      chain.pieces.push_back(forward ? pieces[piece] : reverse_piece(pieces[piece]));
      const std::size_t exit = forward ? node + 1 : node - 1;
      if (!partner[exit]) return;
      node = *partner[exit];
    }
  };

  // Open chains first, each walked from a free end; whatever remains is closed.
  for (std::size_t node = 0; node < 2 * n; ++node) {
    if (used[node / 2] || partner[node]) continue;
    Chain chain;
    walk(node, chain);
    chains.push_back(std::move(chain));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    Chain chain;
    walk(2 * i, chain);
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace submetry
