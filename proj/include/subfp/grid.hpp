#pragma once

#include <cmath>
#include <vector>

#include "subfp/util.hpp"

namespace subfp {

// Uniform node-centered grid on [-L, L]; cells are the dx-neighborhoods of
// the N nodes, interfaces sit halfway between consecutive nodes.
struct Grid {
  double L = 0.0;
  int N = 0;
  double dx = 0.0;

  double node(int i) const { return -L + i * dx; }
  double midpoint(int i) const { return node(i) + 0.5 * dx; }  // interface i | i+1

  std::vector<double> nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) xs[static_cast<std::size_t>(i)] = node(i);
    return xs;
  }
};

inline Grid build_grid(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw ConfigError("build_grid: L must be positive and finite, got " + format_g(L));
  if (N < 3)
    throw ConfigError("build_grid: N must be at least 3, got " + std::to_string(N));
  return Grid{L, N, 2.0 * L / (N - 1)};
}

// Grid function: node values paired with their grid.
struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(static_cast<std::size_t>(g.N), 0.0) {}
  Field(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
    if (v.size() != static_cast<std::size_t>(g.N))
      throw ConfigError("Field: value count does not match grid size");
  }

  int size() const { return grid.N; }
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

// dx * sum(f), compensated.
inline double discrete_mass(const Field& f) {
  NeumaierSum acc;
  for (double x : f.v) acc.add(x);
  return f.grid.dx * acc.value();
}

}  // namespace subfp
