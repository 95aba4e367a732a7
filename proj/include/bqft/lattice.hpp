#pragma once

#include <cstdint>
#include <vector>

#include "bqft/geometry.hpp"

namespace bqft {

/// Cell mask over a lattice window; row-major, row = time index.
struct Mask {
  int nt = 0, nx = 0;
  std::vector<uint8_t> cells;

  Mask() = default;
  Mask(int nt_, int nx_) : nt(nt_), nx(nx_), cells(size_t(nt_) * nx_, 0) {}
  uint8_t& at(int i, int j) { return cells[size_t(i) * nx + j]; }
  bool get(int i, int j) const { return cells[size_t(i) * nx + j] != 0; }
  size_t count() const;
  friend bool operator==(const Mask& a, const Mask& b) {
    return a.nt == b.nt && a.nx == b.nx && a.cells == b.cells;
  }
};

/// Uniform lattice with cell centers t = t_lo + (i+1/2)h, x = (j+1/2)h.
/// Causal steps go to (i+1, j-1), (i+1, j), (i+1, j+1), clipped to the
/// spatial range; a step along a wall column models a curve running on the
/// timelike boundary.
struct LatticeGrid {
  Spacetime M;
  Rat h;
  Rat t_lo;
  int nt = 0, nx = 0;
  bool right_open = false;  // half-plane: stepping past the last column escapes

  Rat u_of(int i, int j) const { return t_lo + Rat(i - j) * h; }
  Rat v_of(int i, int j) const { return t_lo + Rat(i + j + 1) * h; }
};

LatticeGrid make_grid(const Spacetime& M, const Rat& h, const Rat& t_min,
                      const Rat& t_max, const Rat& x_max = Rat(0));

/// Cells whose center belongs to S (exact rational membership, evaluated per
/// null diagonal so cost is linear in marked cells).
Mask rasterize(const LatticeGrid& g, const Region& S);
Mask valid_cells(const LatticeGrid& g);

/// BFS closure of the seed cells under causal steps; direction +1 future.
Mask bfs_cone(const LatticeGrid& g, const Mask& seeds, int direction);
/// Keeps cells whose full (clipped) 3x3 neighbourhood of valid cells is set.
Mask erode_mask(const LatticeGrid& g, const Mask& m);

/// Lattice Cauchy development: a cell belongs iff it cannot escape to the
/// future avoiding S, or cannot escape to the past avoiding S.
Mask development_mask(const LatticeGrid& g, const Mask& in_s);

LatticeGrid development_window(const Spacetime& M, const Region& S, const Rat& h);

/// Runs the lattice development and fits the mask back to an exact region
/// from a candidate list (the region itself, its causal hull, null-slab
/// completions, all of M); verifies the fit on a refined grid as well.
/// Throws DevelopmentFitFailed when no candidate matches.
Region lattice_fit_development(const Spacetime& M, const Region& S);

}  // namespace bqft
