#include "bqft/lattice.hpp"

#include <algorithm>
#include <cassert>

namespace bqft {

size_t Mask::count() const {
  size_t n = 0;
  for (uint8_t c : cells) n += c != 0;
  return n;
}

namespace {

using boost::multiprecision::cpp_int;

cpp_int rat_floor(const Rat& r) {
  cpp_int num = numerator(r), den = denominator(r);
  cpp_int q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

cpp_int rat_ceil(const Rat& r) { return -rat_floor(-r); }

int clamp_to_int(const cpp_int& v, int lo, int hi) {
  if (v < lo) return lo;
  if (v > hi) return hi;
  return int(v);
}

}  // namespace

LatticeGrid make_grid(const Spacetime& M, const Rat& h, const Rat& t_min, const Rat& t_max,
                      const Rat& x_max) {
  if (h <= 0) throw Error("BadGrid", "grid spacing must be positive");
  LatticeGrid g;
  g.M = M;
  g.h = h;
  g.t_lo = t_min;
  Rat span = t_max - t_min;
  g.nt = int(rat_ceil(span / h));
  if (g.nt < 1) g.nt = 1;
  switch (M.kind) {
    case Spacetime::Strip: {
      Rat cols = M.width / h;
      if (denominator(cols) != 1)
        throw Error("BadGrid", "grid spacing must divide the strip width");
      g.nx = int(numerator(cols));
      break;
    }
    case Spacetime::HalfPlane: {
      g.nx = int(rat_ceil(x_max / h));
      if (g.nx < 2) g.nx = 2;
      g.right_open = true;
      break;
    }
    case Spacetime::DiamondWithEdge: {
      g.nx = int(rat_ceil(M.radius / h));
      g.t_lo = -M.radius;
      g.nt = int(rat_ceil(2 * M.radius / h));
      break;
    }
  }
  return g;
}

Mask rasterize(const LatticeGrid& g, const Region& S) {
  Mask m(g.nt, g.nx);
  // iterate null diagonals u = const so each region section is evaluated once
  for (int d = -(g.nx - 1); d <= g.nt - 1; ++d) {
    Rat u = g.t_lo + Rat(d) * g.h;
    auto section = region_section(g.M, S, u);
    if (section.empty()) continue;
    int j_lo = std::max(0, -d);
    int j_hi = std::min(g.nx - 1, g.nt - 1 - d);
    for (const auto& L : section) {
      // v_j = t_lo + (d + 2j + 1) h; solve for the j range in exact arithmetic
      int ja = j_lo, jb = j_hi;
      if (L.lo.is_finite()) {
        Rat beta = ((L.lo.value - g.t_lo) / g.h - d - 1) / 2;
        cpp_int jmin = L.lo_closed ? rat_ceil(beta) : rat_floor(beta) + 1;
        ja = clamp_to_int(jmin, j_lo, j_hi + 1);
      }
      if (L.hi.is_finite()) {
        Rat beta = ((L.hi.value - g.t_lo) / g.h - d - 1) / 2;
        cpp_int jmax = L.hi_closed ? rat_floor(beta) : rat_ceil(beta) - 1;
        jb = clamp_to_int(jmax, j_lo - 1, j_hi);
      }
      for (int j = ja; j <= jb; ++j) m.at(d + j, j) = 1;
    }
  }
  return m;
}

Mask valid_cells(const LatticeGrid& g) {
  if (g.M.kind != Spacetime::DiamondWithEdge) {
    Mask m(g.nt, g.nx);
    std::fill(m.cells.begin(), m.cells.end(), 1);
    return m;
  }
  return rasterize(g, region_all(g.M));
}

Mask bfs_cone(const LatticeGrid& g, const Mask& seeds, int direction) {
  Mask valid = valid_cells(g);
  Mask out(g.nt, g.nx);
  auto step_row = [&](int i, int prev) {
    for (int j = 0; j < g.nx; ++j) {
      if (!valid.get(i, j)) continue;
      uint8_t v = seeds.get(i, j);
      if (!v && prev >= 0) {
        for (int dj = -1; dj <= 1 && !v; ++dj) {
          int j2 = j + dj;
          if (j2 >= 0 && j2 < g.nx && out.get(prev, j2)) v = 1;
        }
      }
      out.at(i, j) = v;
    }
  };
  if (direction >= 0) {
    for (int i = 0; i < g.nt; ++i) step_row(i, i - 1);
  } else {
    for (int i = g.nt - 1; i >= 0; --i) step_row(i, i + 1 < g.nt ? i + 1 : -1);
  }
  return out;
}

Mask erode_mask(const LatticeGrid& g, const Mask& m) {
  Mask valid = valid_cells(g);
  Mask out(g.nt, g.nx);
  for (int i = 0; i < g.nt; ++i)
    for (int j = 0; j < g.nx; ++j) {
      if (!m.get(i, j)) continue;
      bool keep = true;
      for (int di = -1; di <= 1 && keep; ++di)
        for (int dj = -1; dj <= 1 && keep; ++dj) {
          int i2 = i + di, j2 = j + dj;
          if (i2 < 0 || i2 >= g.nt || j2 < 0 || j2 >= g.nx) continue;
          if (!valid.get(i2, j2)) continue;
          if (!m.get(i2, j2)) keep = false;
        }
      out.at(i, j) = keep;
    }
  return out;
}

Mask development_mask(const LatticeGrid& g, const Mask& in_s) {
  Mask valid = valid_cells(g);
  auto escape_sweep = [&](int direction) {
    Mask esc(g.nt, g.nx);
    int i_start = direction > 0 ? g.nt - 1 : 0;
    int i_end = direction > 0 ? -1 : g.nt;
    int di = direction > 0 ? -1 : 1;
    for (int i = i_start; i != i_end; i += di) {
      for (int j = 0; j < g.nx; ++j) {
        if (!valid.get(i, j) || in_s.get(i, j)) continue;
        int i2 = i + direction;
        bool e = false;
        if (i2 < 0 || i2 >= g.nt) {
          e = true;  // window edge rows lie beyond the time support of S
        } else {
          for (int dj = -1; dj <= 1 && !e; ++dj) {
            int j2 = j + dj;
            if (j2 < 0) continue;  // left wall
            if (j2 >= g.nx) {
              if (g.right_open) e = true;  // no wall on the right
              continue;
            }
            if (!valid.get(i2, j2)) {
              e = true;  // curve exits M through a null edge
            } else if (esc.get(i2, j2)) {
              e = true;
            }
          }
        }
        esc.at(i, j) = e;
      }
    }
    return esc;
  };
  Mask esc_up = escape_sweep(+1);
  Mask esc_dn = escape_sweep(-1);
  Mask d(g.nt, g.nx);
  for (int i = 0; i < g.nt; ++i)
    for (int j = 0; j < g.nx; ++j)
      d.at(i, j) = valid.get(i, j) && (!esc_up.get(i, j) || !esc_dn.get(i, j));
  return d;
}

LatticeGrid development_window(const Spacetime& M, const Region& S, const Rat& h) {
  if (M.kind == Spacetime::DiamondWithEdge) return make_grid(M, h, 0, 0);
  auto [t0, t1] = region_t_extent(S);
  Rat spatial = M.kind == Spacetime::Strip ? M.width : region_x_extent(M, S) + (t1 - t0) + 1;
  Rat pad = (t1 - t0) + 2 * spatial + 4 * h;
  return make_grid(M, h, t0 - pad, t1 + pad, spatial + 2 * h);
}

Region lattice_fit_development(const Spacetime& M, const Region& S) {
  std::vector<Region> candidates;
  candidates.push_back(S);
  Region hull = region_intersect(M, causal_future(M, S), causal_past(M, S));
  candidates.push_back(hull);
  candidates.push_back(region_all(M));
  {
    // null-slab completions from the extents, useful on the bounded diamond
    auto [t0, t1] = region_t_extent(S);
    (void)t0;
    (void)t1;
    std::vector<Rat> ubs, vbs;
    for (const auto& c : S.cuts) ubs.push_back(c);
    for (const auto& list : S.slabs)
      for (const auto& iv : list) {
        if (iv.lo.kind == VEnd::Const && iv.lo.c.is_finite()) vbs.push_back(iv.lo.c.value);
        if (iv.hi.kind == VEnd::Const && iv.hi.c.is_finite()) vbs.push_back(iv.hi.c.value);
      }
    for (const Rat& b : ubs) {
      candidates.push_back(region_from_rects(
          M, {Rect{Bound::finite(b), Bound::pos_inf(), Bound::neg_inf(), Bound::pos_inf()}}));
      candidates.push_back(region_from_rects(
          M, {Rect{Bound::neg_inf(), Bound::finite(b), Bound::neg_inf(), Bound::pos_inf()}}));
    }
    for (const Rat& b : vbs) {
      candidates.push_back(region_from_rects(
          M, {Rect{Bound::neg_inf(), Bound::pos_inf(), Bound::finite(b), Bound::pos_inf()}}));
      candidates.push_back(region_from_rects(
          M, {Rect{Bound::neg_inf(), Bound::pos_inf(), Bound::neg_inf(), Bound::finite(b)}}));
    }
  }

  Rat h;
  switch (M.kind) {
    case Spacetime::Strip: h = M.width / 200; break;
    case Spacetime::HalfPlane: h = Rat(1, 128); break;
    case Spacetime::DiamondWithEdge: h = M.radius / 128; break;
  }

  auto matches = [&](const Rat& spacing, const Region& cand) {
    LatticeGrid g = development_window(M, S, spacing);
    Mask dm = development_mask(g, rasterize(g, S));
    return rasterize(g, cand) == dm;
  };

  for (const auto& cand : candidates) {
    if (matches(h, cand) && matches(h / 2, cand)) return cand;
  }
  throw Error("DevelopmentFitFailed",
              "no supported shape matches the lattice development of " + region_to_string(S));
}

}  // namespace bqft
