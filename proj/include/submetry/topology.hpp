#pragma once

#include "submetry/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace submetry {

/// Default tolerance for deciding that two piece endpoints coincide.
inline constexpr double kEndpointTol = 1e-10;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t i);
  void unite(std::size_t i, std::size_t j);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

struct Component {
  std::vector<std::size_t> pieces;
  std::vector<std::size_t> points;
};

/// Groups pieces (by endpoint matching) and isolated points (by coincidence with
/// an endpoint or another point) into connected components. Output is sorted by
/// smallest piece index, then smallest point index.
std::vector<Component> connected_components(std::span<const CurvePiece> pieces, std::span<const Point> points,
                                            double tol = kEndpointTol);

struct Chain {
  std::vector<CurvePiece> pieces;  // oriented so that end(i) == start(i + 1)
  bool closed = false;
};

/// Orders pieces into maximal chains by endpoint matching, reversing pieces as
/// needed. Open chains start at the free end whose piece has the lower index.
/// Throws if an endpoint is shared by more than two pieces.
std::vector<Chain> order_into_chains(std::span<const CurvePiece> pieces, double tol = kEndpointTol);

}  // namespace submetry
