#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "unimorph/triangulation.hpp"

namespace unimorph {

// Random planar triangulation grown by repeatedly dropping a new vertex into
// a uniformly chosen internal face. Vertices are 0..n-1 with boundary 0,1,2.
inline Triangulation randomTriangulation(VertexId n, std::mt19937_64& rng) {
  if (n < 3)
    throw Error(ErrorCode::Unhandled, "need at least three vertices");
  Triangulation t;
  t.boundary = {0, 1, 2};
  t.rotation[0] = {1, 2};
  t.rotation[1] = {2, 0};
  t.rotation[2] = {0, 1};
  std::vector<std::array<VertexId, 3>> faces = {{0, 1, 2}};
  for (VertexId v = 3; v < n; ++v) {
    std::size_t pick = static_cast<std::size_t>(rng() % faces.size());
    auto [a, b, c] = faces[pick];
    t.rotation[v] = {a, b, c};
    auto spliceAfter = [&](VertexId corner, VertexId successor) {
      std::vector<VertexId>& rot = t.rotation.at(corner);
      auto it = std::find(rot.begin(), rot.end(), successor);
      rot.insert(it + 1, v);
    };
    spliceAfter(a, b);
    spliceAfter(b, c);
    spliceAfter(c, a);
    faces[pick] = {a, b, v};
    faces.push_back({b, c, v});
    faces.push_back({c, a, v});
  }
  return t;
}

namespace detail {

// Exact Gaussian elimination with partial pivoting; columns beyond `m` are
// right-hand sides. The barycentric system below is always nonsingular.
inline void solveInPlace(std::vector<std::vector<Rational>>& mat,
                         std::size_t m) {
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && mat[piv][col] == 0) ++piv;
    if (piv == m)
      throw Error(ErrorCode::Unhandled, "singular embedding system");
    std::swap(mat[col], mat[piv]);
    for (std::size_t row = 0; row < m; ++row) {
      if (row == col || mat[row][col] == 0) continue;
      Rational f = mat[row][col] / mat[col][col];
      for (std::size_t j = col; j < mat[row].size(); ++j)
        mat[row][j] -= f * mat[col][j];
    }
  }
  for (std::size_t row = 0; row < m; ++row)
    for (std::size_t j = m; j < mat[row].size(); ++j)
      mat[row][j] /= mat[row][row];
}

}  // namespace detail

// Straight-line drawing where every internal vertex sits at a weighted
// barycenter of its neighbors, weights drawn uniformly from 1..8. Any
// positive weighting yields a valid drawing, so randomizing the weights
// gives an unbounded family of drawings of the same triangulation. Exact
// solutions carry huge denominators, so coordinates are snapped to the
// coarsest power-of-two grid that keeps every face strictly positive.
inline Drawing barycentricDrawing(const Triangulation& t,
                                  const std::array<Point, 3>& corners,
                                  std::mt19937_64& rng) {
  Drawing d;
  d.tri = t;
  for (int i = 0; i < 3; ++i) d.coords[t.boundary[i]] = corners[i];

  std::vector<VertexId> internal;
  std::map<VertexId, std::size_t> index;
  for (const auto& [v, _] : t.rotation)
    if (!t.isBoundary(v)) {
      index[v] = internal.size();
      internal.push_back(v);
    }
  std::size_t m = internal.size();
  if (m == 0) return d;

  std::vector<std::vector<Rational>> mat(
      m, std::vector<Rational>(m + 2, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    VertexId v = internal[i];
    for (VertexId w : t.rotation.at(v)) {
      Rational weight(1 + static_cast<long>(rng() % 8));
      mat[i][i] += weight;
      if (t.isBoundary(w)) {
        mat[i][m] += weight * d.at(w).x;
        mat[i][m + 1] += weight * d.at(w).y;
      } else {
        mat[i][index.at(w)] -= weight;
      }
    }
  }
  detail::solveInPlace(mat, m);

  Drawing exact = d;
  for (std::size_t i = 0; i < m; ++i)
    exact.coords[internal[i]] = {mat[i][m], mat[i][m + 1]};

  for (BigInt grid = BigInt(1) << 20;; grid <<= 10) {
    Drawing snapped = d;
    for (VertexId v : internal)
      snapped.coords[v] = {roundToDenominator(exact.at(v).x, grid),
                           roundToDenominator(exact.at(v).y, grid)};
    if (validateDrawing(snapped).empty()) return snapped;
    if (grid > (BigInt(1) << 120)) return exact;
  }
}

// Deterministic per (n, seed): one triangulation, two independently
// weighted drawings sharing the boundary triangle.
inline DrawingPair generatePair(VertexId n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Triangulation t = randomTriangulation(n, rng);
  std::array<Point, 3> corners = {Point{Rational(0), Rational(0)},
                                  Point{Rational(1024), Rational(0)},
                                  Point{Rational(512), Rational(1024)}};
  DrawingPair pair;
  pair.first = barycentricDrawing(t, corners, rng);
  pair.second = barycentricDrawing(t, corners, rng);
  return pair;
}

}  // namespace unimorph
