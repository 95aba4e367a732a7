#include "bqft/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "bqft/lattice.hpp"

namespace bqft {

Spacetime Spacetime::strip(Rat a, double scale) {
  if (a <= 0) throw Error("BadSpacetime", "strip width must be positive");
  Spacetime M;
  M.kind = Strip;
  M.width = std::move(a);
  M.scale = scale;
  return M;
}

Spacetime Spacetime::half_plane() {
  Spacetime M;
  M.kind = HalfPlane;
  return M;
}

Spacetime Spacetime::diamond_with_edge(Rat r) {
  if (r <= 0) throw Error("BadSpacetime", "diamond radius must be positive");
  Spacetime M;
  M.kind = DiamondWithEdge;
  M.radius = std::move(r);
  return M;
}

Rect Rect::of(Rat u0, Rat u1, Rat v0, Rat v1) {
  return Rect{Bound::finite(std::move(u0)), Bound::finite(std::move(u1)),
              Bound::finite(std::move(v0)), Bound::finite(std::move(v1))};
}

namespace {

Bound bound_add(const Bound& b, const Rat& d) {
  if (!b.is_finite()) return b;
  return Bound::finite(b.value + d);
}

Bound min_bound(const Bound& a, const Bound& b) { return a < b ? a : b; }
Bound max_bound(const Bound& a, const Bound& b) { return a < b ? b : a; }

// Evaluates a symbolic endpoint at u (Bound-valued so infinite slab ends work).
Bound eval_vend(const Spacetime& M, const VEnd& e, const Bound& u) {
  switch (e.kind) {
    case VEnd::Const: return e.c;
    case VEnd::DiagLo: return u;
    case VEnd::DiagHi: return bound_add(u, M.band());
  }
  return Bound{};
}

// Representative interior point of slab i (between cuts[i-1] and cuts[i]).
Rat slab_mid(const std::vector<Rat>& cuts, size_t i) {
  if (cuts.empty()) return 0;
  if (i == 0) return cuts.front() - 1;
  if (i == cuts.size()) return cuts.back() + 1;
  return (cuts[i - 1] + cuts[i]) / 2;
}

LineIval eval_slab_ival(const Spacetime& M, const SlabIval& iv, const Rat& b) {
  LineIval L;
  L.lo = eval_vend(M, iv.lo, Bound::finite(b));
  L.hi = eval_vend(M, iv.hi, Bound::finite(b));
  L.lo_closed = iv.lo.kind == VEnd::DiagLo;
  L.hi_closed = iv.hi.kind == VEnd::DiagHi;
  return L;
}

bool line_ival_empty(const LineIval& L) {
  if (L.lo < L.hi) return false;
  return true;  // closed-closed single points cannot arise here
}

void merge_line_ivals(std::vector<LineIval>& xs) {
  xs.erase(std::remove_if(xs.begin(), xs.end(), line_ival_empty), xs.end());
  std::sort(xs.begin(), xs.end(), [](const LineIval& a, const LineIval& b) {
    if (a.lo == b.lo) return a.lo_closed && !b.lo_closed;
    return a.lo < b.lo;
  });
  std::vector<LineIval> out;
  for (auto& x : xs) {
    if (!out.empty()) {
      LineIval& p = out.back();
      bool overlap = x.lo < p.hi || (x.lo == p.hi && (x.lo_closed || p.hi_closed));
      if (overlap) {
        if (p.hi < x.hi) {
          p.hi = x.hi;
          p.hi_closed = x.hi_closed;
        } else if (p.hi == x.hi) {
          p.hi_closed = p.hi_closed || x.hi_closed;
        }
        continue;
      }
    }
    out.push_back(x);
  }
  xs = std::move(out);
}

void merge_slab_ivals(const Spacetime& M, std::vector<SlabIval>& xs, const Rat& mid) {
  Bound bmid = Bound::finite(mid);
  xs.erase(std::remove_if(xs.begin(), xs.end(),
                          [&](const SlabIval& iv) {
                            return !(eval_vend(M, iv.lo, bmid) < eval_vend(M, iv.hi, bmid));
                          }),
           xs.end());
  std::sort(xs.begin(), xs.end(), [&](const SlabIval& a, const SlabIval& b) {
    return eval_vend(M, a.lo, bmid) < eval_vend(M, b.lo, bmid);
  });
  std::vector<SlabIval> out;
  for (auto& x : xs) {
    if (!out.empty()) {
      SlabIval& p = out.back();
      // Distinct symbols never agree at a slab midpoint (crossings are cuts),
      // so open touching intervals stay separate and only overlaps merge.
      if (eval_vend(M, x.lo, bmid) < eval_vend(M, p.hi, bmid)) {
        if (eval_vend(M, p.hi, bmid) < eval_vend(M, x.hi, bmid)) p.hi = x.hi;
        continue;
      }
    }
    out.push_back(x);
  }
  xs = std::move(out);
}

std::vector<LineIval> line_section_of_slab(const Spacetime& M,
                                           const std::vector<SlabIval>& ivs,
                                           const Rat& b) {
  std::vector<LineIval> out;
  for (const auto& iv : ivs) out.push_back(eval_slab_ival(M, iv, b));
  merge_line_ivals(out);
  return out;
}

// Removes breakpoints whose removal does not change the set; the survivors
// are intrinsic to the set, which makes the form canonical.
void merge_pass(const Spacetime& M, Region& R) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < R.cuts.size(); ++i) {
      if (!(R.slabs[i] == R.slabs[i + 1])) continue;
      if (!(R.lines[i] == line_section_of_slab(M, R.slabs[i], R.cuts[i]))) continue;
      R.cuts.erase(R.cuts.begin() + i);
      R.slabs.erase(R.slabs.begin() + i);
      R.lines.erase(R.lines.begin() + i);
      changed = true;
      break;
    }
  }
}

struct ClippedRect {
  Bound u0, u1, v0, v1;  // consts after clipping against any bounding box
};

std::vector<ClippedRect> clip_rects(const Spacetime& M, const std::vector<Rect>& rects) {
  std::vector<ClippedRect> out;
  for (const auto& r : rects) {
    ClippedRect c{r.u0, r.u1, r.v0, r.v1};
    if (M.kind == Spacetime::DiamondWithEdge) {
      Bound lo = Bound::finite(-M.radius), hi = Bound::finite(M.radius);
      c.u0 = max_bound(c.u0, lo);
      c.u1 = min_bound(c.u1, hi);
      c.v1 = min_bound(c.v1, hi);
    }
    if (!(c.u0 < c.u1) || !(c.v0 < c.v1)) continue;
    out.push_back(c);
  }
  return out;
}

Region build_from_clipped(const Spacetime& M, const std::vector<ClippedRect>& rects) {
  Region R;
  std::vector<Rat> cuts;
  const bool right_wall = M.has_right_wall();
  for (const auto& r : rects) {
    for (const Bound* b : {&r.u0, &r.u1, &r.v0, &r.v1}) {
      if (b->is_finite()) cuts.push_back(b->value);
    }
    if (right_wall) {
      if (r.v0.is_finite()) cuts.push_back(r.v0.value - M.band());
      if (r.v1.is_finite()) cuts.push_back(r.v1.value - M.band());
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  R.cuts = cuts;
  R.slabs.resize(cuts.size() + 1);
  R.lines.resize(cuts.size());

  for (size_t i = 0; i <= cuts.size(); ++i) {
    Rat mid = slab_mid(cuts, i);
    Bound bmid = Bound::finite(mid);
    auto& list = R.slabs[i];
    for (const auto& r : rects) {
      if (!(r.u0 < bmid && bmid < r.u1)) continue;
      SlabIval iv;
      // lower endpoint: max of the rectangle bound and the wall v >= u
      if (r.v0 < bmid)
        iv.lo = VEnd::diag_lo();
      else
        iv.lo = VEnd::konst(r.v0);
      // upper endpoint: min of the rectangle bound and, on the strip, v <= u+2a
      if (right_wall && bound_add(bmid, M.band()) < r.v1)
        iv.hi = VEnd::diag_hi();
      else
        iv.hi = VEnd::konst(r.v1);
      list.push_back(iv);
    }
    merge_slab_ivals(M, list, mid);
  }

  for (size_t i = 0; i < cuts.size(); ++i) {
    const Rat& b = cuts[i];
    Bound bb = Bound::finite(b);
    auto& list = R.lines[i];
    for (const auto& r : rects) {
      if (!(r.u0 < bb && bb < r.u1)) continue;
      LineIval L;
      if (r.v0 < bb) {
        L.lo = bb;
        L.lo_closed = true;
      } else {
        L.lo = r.v0;
      }
      Bound top = bound_add(bb, M.band());
      if (right_wall && top < r.v1) {
        L.hi = top;
        L.hi_closed = true;
      } else {
        L.hi = r.v1;
      }
      list.push_back(L);
    }
    merge_line_ivals(list);
  }

  merge_pass(M, R);
  return R;
}

std::vector<SlabIval> slab_section_at(const Region& A, const Rat& mid) {
  size_t i = std::upper_bound(A.cuts.begin(), A.cuts.end(), mid) - A.cuts.begin();
  return A.slabs[i];
}

std::vector<LineIval> line_section_at(const Spacetime& M, const Region& A, const Rat& u) {
  auto it = std::lower_bound(A.cuts.begin(), A.cuts.end(), u);
  if (it != A.cuts.end() && *it == u) return A.lines[it - A.cuts.begin()];
  return line_section_of_slab(M, slab_section_at(A, u), u);
}

std::vector<LineIval> line_union(std::vector<LineIval> a, const std::vector<LineIval>& b) {
  a.insert(a.end(), b.begin(), b.end());
  merge_line_ivals(a);
  return a;
}

std::vector<LineIval> line_intersect(const std::vector<LineIval>& a,
                                     const std::vector<LineIval>& b) {
  std::vector<LineIval> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      LineIval r;
      if (x.lo == y.lo) {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed && y.lo_closed;
      } else if (x.lo < y.lo) {
        r.lo = y.lo;
        r.lo_closed = y.lo_closed;
      } else {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed;
      }
      if (x.hi == y.hi) {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed && y.hi_closed;
      } else if (x.hi < y.hi) {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed;
      } else {
        r.hi = y.hi;
        r.hi_closed = y.hi_closed;
      }
      if (r.lo < r.hi) out.push_back(r);
    }
  merge_line_ivals(out);
  return out;
}

std::vector<SlabIval> slab_union(const Spacetime& M, std::vector<SlabIval> a,
                                 const std::vector<SlabIval>& b, const Rat& mid) {
  a.insert(a.end(), b.begin(), b.end());
  merge_slab_ivals(M, a, mid);
  return a;
}

std::vector<SlabIval> slab_intersect(const Spacetime& M, const std::vector<SlabIval>& a,
                                     const std::vector<SlabIval>& b, const Rat& mid) {
  Bound bmid = Bound::finite(mid);
  std::vector<SlabIval> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      SlabIval r;
      r.lo = eval_vend(M, x.lo, bmid) < eval_vend(M, y.lo, bmid) ? y.lo : x.lo;
      r.hi = eval_vend(M, x.hi, bmid) < eval_vend(M, y.hi, bmid) ? x.hi : y.hi;
      if (eval_vend(M, r.lo, bmid) < eval_vend(M, r.hi, bmid)) out.push_back(r);
    }
  merge_slab_ivals(M, out, mid);
  return out;
}

enum class BinOp { Union, Intersect };

Region overlay(const Spacetime& M, const Region& A, const Region& B, BinOp op) {
  std::vector<Rat> cuts = A.cuts;
  cuts.insert(cuts.end(), B.cuts.begin(), B.cuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Region R;
  R.cuts = cuts;
  R.slabs.resize(cuts.size() + 1);
  R.lines.resize(cuts.size());
  for (size_t i = 0; i <= cuts.size(); ++i) {
    Rat mid = slab_mid(cuts, i);
    auto la = slab_section_at(A, mid);
    auto lb = slab_section_at(B, mid);
    R.slabs[i] = op == BinOp::Union ? slab_union(M, std::move(la), lb, mid)
                                    : slab_intersect(M, la, lb, mid);
  }
  for (size_t i = 0; i < cuts.size(); ++i) {
    auto la = line_section_at(M, A, cuts[i]);
    auto lb = line_section_at(M, B, cuts[i]);
    R.lines[i] = op == BinOp::Union ? line_union(std::move(la), lb) : line_intersect(la, lb);
  }
  merge_pass(M, R);
  return R;
}

}  // namespace

bool Region::empty() const {
  for (const auto& s : slabs)
    if (!s.empty()) return false;
  for (const auto& l : lines)
    if (!l.empty()) return false;
  return true;
}

Region region_from_rects(const Spacetime& M, const std::vector<Rect>& rects) {
  return build_from_clipped(M, clip_rects(M, rects));
}

Region region_empty() {
  Region R;
  R.slabs.resize(1);
  return R;
}

Region region_all(const Spacetime& M) { return region_from_rects(M, {Rect{}}); }

Region region_union(const Spacetime& M, const Region& A, const Region& B) {
  return overlay(M, A, B, BinOp::Union);
}

Region region_intersect(const Spacetime& M, const Region& A, const Region& B) {
  return overlay(M, A, B, BinOp::Intersect);
}

bool region_subset(const Spacetime& M, const Region& A, const Region& B) {
  return region_intersect(M, A, B) == A;
}

std::vector<LineIval> region_section(const Spacetime& M, const Region& S, const Rat& u) {
  return line_section_at(M, S, u);
}

bool region_contains_point(const Spacetime& M, const Region& S, const Rat& u, const Rat& v) {
  for (const auto& L : line_section_at(M, S, u)) {
    Bound bv = Bound::finite(v);
    bool above = L.lo < bv || (L.lo_closed && L.lo == bv);
    bool below = bv < L.hi || (L.hi_closed && bv == L.hi);
    if (above && below) return true;
  }
  return false;
}

namespace {

struct Corner {
  Bound u, v;
};

// Lower-left corners of the slab pieces; J^+ of the region is the union of
// the open upward quadrants they span (line pieces are absorbed by their
// neighbouring slab pieces).
std::vector<Corner> lower_corners(const Spacetime& M, const Region& S) {
  std::vector<Corner> out;
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    Bound left = i == 0 ? Bound::neg_inf() : Bound::finite(S.cuts[i - 1]);
    for (const auto& iv : S.slabs[i]) out.push_back({left, eval_vend(M, iv.lo, left)});
  }
  return out;
}

std::vector<Corner> upper_corners(const Spacetime& M, const Region& S) {
  std::vector<Corner> out;
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    Bound right = i == S.cuts.size() ? Bound::pos_inf() : Bound::finite(S.cuts[i]);
    for (const auto& iv : S.slabs[i]) out.push_back({right, eval_vend(M, iv.hi, right)});
  }
  return out;
}

}  // namespace

Region causal_future(const Spacetime& M, const Region& S) {
  std::vector<Rect> rects;
  for (const auto& c : lower_corners(M, S))
    rects.push_back(Rect{c.u, Bound::pos_inf(), c.v, Bound::pos_inf()});
  return region_from_rects(M, rects);
}

Region causal_past(const Spacetime& M, const Region& S) {
  std::vector<Rect> rects;
  for (const auto& c : upper_corners(M, S))
    rects.push_back(Rect{Bound::neg_inf(), c.u, Bound::neg_inf(), c.v});
  return region_from_rects(M, rects);
}

Region chronological_future(const Spacetime& M, const Region& S) {
  // Coincides with the causal future for open rectangle unions in these flat
  // models; both are relatively open in M.
  return causal_future(M, S);
}

Region chronological_past(const Spacetime& M, const Region& S) {
  return causal_past(M, S);
}

bool point_cone_contains(const Spacetime& M, const Rat& pu, const Rat& pv, int direction,
                         const Rat& qu, const Rat& qv) {
  (void)M;
  if (direction >= 0) return qu >= pu && qv >= pv;
  return qu <= pu && qv <= pv;
}

bool is_causally_convex(const Spacetime& M, const Region& S) {
  Region hull = region_intersect(M, causal_future(M, S), causal_past(M, S));
  return region_subset(M, hull, S);
}

bool are_causally_disjoint(const Spacetime& M, const Region& S, const Region& T) {
  Region cones = region_union(M, causal_future(M, S), causal_past(M, S));
  return region_intersect(M, cones, T).empty();
}

bool is_interior(const Spacetime& M, const Region& S) {
  (void)M;
  for (const auto& list : S.slabs)
    for (const auto& iv : list)
      if (iv.lo.kind == VEnd::DiagLo || iv.hi.kind == VEnd::DiagHi) return false;
  for (const auto& list : S.lines)
    for (const auto& L : list)
      if (L.lo_closed || L.hi_closed) return false;
  return true;
}

namespace {

bool touches_left_wall(const Region& S) {
  for (const auto& list : S.slabs)
    for (const auto& iv : list)
      if (iv.lo.kind == VEnd::DiagLo) return true;
  for (const auto& list : S.lines)
    for (const auto& L : list)
      if (L.lo_closed) return true;
  return false;
}

bool touches_right_wall(const Region& S) {
  for (const auto& list : S.slabs)
    for (const auto& iv : list)
      if (iv.hi.kind == VEnd::DiagHi) return true;
  for (const auto& list : S.lines)
    for (const auto& L : list)
      if (L.hi_closed) return true;
  return false;
}

struct Extent {
  bool bounded = true;
  Bound u_lo = Bound::pos_inf(), u_hi = Bound::neg_inf();
  Bound v_lo = Bound::pos_inf(), v_hi = Bound::neg_inf();
};

Extent region_extent(const Spacetime& M, const Region& S) {
  Extent e;
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    Bound left = i == 0 ? Bound::neg_inf() : Bound::finite(S.cuts[i - 1]);
    Bound right = i == S.cuts.size() ? Bound::pos_inf() : Bound::finite(S.cuts[i]);
    for (const auto& iv : S.slabs[i]) {
      e.u_lo = min_bound(e.u_lo, left);
      e.u_hi = max_bound(e.u_hi, right);
      e.v_lo = min_bound(e.v_lo, eval_vend(M, iv.lo, left));
      e.v_hi = max_bound(e.v_hi, eval_vend(M, iv.hi, right));
    }
  }
  for (size_t i = 0; i < S.lines.size(); ++i) {
    Bound b = Bound::finite(S.cuts[i]);
    for (const auto& L : S.lines[i]) {
      e.u_lo = min_bound(e.u_lo, b);
      e.u_hi = max_bound(e.u_hi, b);
      e.v_lo = min_bound(e.v_lo, L.lo);
      e.v_hi = max_bound(e.v_hi, L.hi);
    }
  }
  e.bounded = !S.empty() && e.u_lo.is_finite() && e.u_hi.is_finite() &&
              e.v_lo.is_finite() && e.v_hi.is_finite();
  return e;
}

}  // namespace

bool region_bounded(const Region& S) {
  Spacetime dummy = Spacetime::strip(1);
  return region_extent(dummy, S).bounded;
}

Rat region_area(const Region& S) {
  if (!region_bounded(S)) throw Error("UnboundedRegion", "area of unbounded region");
  Spacetime dummy = Spacetime::strip(1);  // band size never enters: bounded pieces
  Rat area = 0;
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    if (S.slabs[i].empty()) continue;
    Rat L = S.cuts[i - 1], R = S.cuts[i];
    for (const auto& iv : S.slabs[i]) {
      auto lo_at = [&](const Rat& u) { return eval_vend(dummy, iv.lo, Bound::finite(u)).value; };
      auto hi_at = [&](const Rat& u) {
        Bound h = eval_vend(dummy, iv.hi, Bound::finite(u));
        return h.value;
      };
      // endpoints are affine in u, so the trapezoid rule is exact
      area += ((hi_at(L) - lo_at(L)) + (hi_at(R) - lo_at(R))) / 2 * (R - L);
    }
  }
  return area;
}

std::pair<Rat, Rat> region_t_extent(const Region& S) {
  Spacetime dummy = Spacetime::strip(1);
  if (S.empty()) throw Error("EmptyRegion", "t-extent of empty region");
  bool first = true;
  Rat tmin = 0, tmax = 0;
  auto feed = [&](const Bound& u, const Bound& v) {
    if (!u.is_finite() || !v.is_finite())
      throw Error("UnboundedRegion", "t-extent of unbounded region");
    Rat t = (u.value + v.value) / 2;
    if (first || t < tmin) tmin = t;
    if (first || t > tmax) tmax = t;
    first = false;
  };
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    Bound left = i == 0 ? Bound::neg_inf() : Bound::finite(S.cuts[i - 1]);
    Bound right = i == S.cuts.size() ? Bound::pos_inf() : Bound::finite(S.cuts[i]);
    for (const auto& iv : S.slabs[i]) {
      feed(left, eval_vend(dummy, iv.lo, left));
      feed(right, eval_vend(dummy, iv.hi, right));
    }
  }
  for (size_t i = 0; i < S.lines.size(); ++i)
    for (const auto& L : S.lines[i]) {
      feed(Bound::finite(S.cuts[i]), L.lo);
      feed(Bound::finite(S.cuts[i]), L.hi);
    }
  return {tmin, tmax};
}

Rat region_x_extent(const Spacetime& M, const Region& S) {
  if (S.empty()) return 0;
  Rat xmax = 0;
  bool have = false;
  auto feed = [&](const Bound& u, const Bound& v) {
    if (!u.is_finite() || !v.is_finite())
      throw Error("UnboundedRegion", "x-extent of unbounded region");
    Rat x = (v.value - u.value) / 2;
    if (!have || x > xmax) xmax = x;
    have = true;
  };
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    Bound left = i == 0 ? Bound::neg_inf() : Bound::finite(S.cuts[i - 1]);
    for (const auto& iv : S.slabs[i]) {
      if (iv.hi.kind == VEnd::DiagHi) {
        xmax = std::max(xmax, M.width);
        have = true;
        continue;
      }
      feed(left, iv.hi.c);
    }
  }
  for (size_t i = 0; i < S.lines.size(); ++i)
    for (const auto& L : S.lines[i]) feed(Bound::finite(S.cuts[i]), L.hi);
  return xmax;
}

std::string region_to_string(const Region& S) {
  std::ostringstream os;
  auto vend = [&](const VEnd& e) {
    switch (e.kind) {
      case VEnd::Const: return bound_to_string(e.c);
      case VEnd::DiagLo: return std::string("u");
      case VEnd::DiagHi: return std::string("u+2a");
    }
    return std::string();
  };
  os << "{";
  for (size_t i = 0; i < S.slabs.size(); ++i) {
    std::string left = i == 0 ? "-inf" : rat_to_string(S.cuts[i - 1]);
    std::string right = i == S.cuts.size() ? "inf" : rat_to_string(S.cuts[i]);
    if (!S.slabs[i].empty()) {
      os << " (" << left << "," << right << "):";
      for (const auto& iv : S.slabs[i]) os << "[" << vend(iv.lo) << "," << vend(iv.hi) << ")";
    }
    if (i < S.cuts.size() && !S.lines[i].empty()) {
      os << " u=" << rat_to_string(S.cuts[i]) << ":";
      for (const auto& L : S.lines[i])
        os << (L.lo_closed ? "[" : "(") << bound_to_string(L.lo) << "," << bound_to_string(L.hi)
           << (L.hi_closed ? "]" : ")");
    }
  }
  os << " }";
  return os.str();
}

namespace {

// True iff S equals a full null slab over its own u-span (any v).
bool is_u_slab(const Spacetime& M, const Region& S) {
  Extent e = region_extent(M, S);
  Region slab = region_from_rects(M, {Rect{e.u_lo, e.u_hi, Bound::neg_inf(), Bound::pos_inf()}});
  return S == slab;
}

bool is_v_slab(const Spacetime& M, const Region& S) {
  Extent e = region_extent(M, S);
  Region slab = region_from_rects(M, {Rect{Bound::neg_inf(), Bound::pos_inf(), e.v_lo, e.v_hi}});
  return S == slab;
}

bool is_single_rect(const Spacetime& M, const Region& S) {
  Extent e = region_extent(M, S);
  Region box = region_from_rects(M, {Rect{e.u_lo, e.u_hi, e.v_lo, e.v_hi}});
  return S == box;
}

}  // namespace

Region cauchy_development(const Spacetime& M, const Region& S) {
  if (S.empty()) return region_empty();
  Region all = region_all(M);
  if (S == all) return all;
  if (M.kind != Spacetime::DiamondWithEdge && (is_u_slab(M, S) || is_v_slab(M, S)))
    return all;  // null slabs trap every inextensible causal curve
  Extent e = region_extent(M, S);
  if (!e.bounded)
    throw Error("UnboundedRegion", "development of unbounded region without fast path");
  // A single diamond touching at most one wall is stable: causal curves can
  // always dodge it by running past the untouched side.  On the bounded
  // diamond spacetime no such escape is guaranteed, so it gets no fast path.
  if (M.kind == Spacetime::Strip && is_single_rect(M, S) &&
      !(touches_left_wall(S) && touches_right_wall(S)))
    return S;
  if (M.kind == Spacetime::HalfPlane && is_single_rect(M, S)) return S;
  return lattice_fit_development(M, S);
}

bool is_stable(const Spacetime& M, const Region& S) { return cauchy_development(M, S) == S; }

bool is_cauchy_inclusion(const Spacetime& M, const Region& U, const Region& U2) {
  if (!region_subset(M, U, U2))
    throw Error("NotAnInclusion", "cauchy inclusion check requires U subset U'");
  return cauchy_development(M, U) == cauchy_development(M, U2);
}

}  // namespace bqft
