#pragma once

#include <string>
#include <vector>

#include "bqft/rational.hpp"

namespace bqft {

struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

/// Flat 1+1-dimensional model spacetimes with a timelike boundary, in null
/// coordinates u = t - x, v = t + x.  The metric is the Minkowski one with
/// signature (-,+) and time orientation of increasing t; the boundary
/// consists of the lines x = 0 (v = u) and, for the strip, x = a (v = u+2a).
/// All geometric bounds are exact rationals in units where the strip width
/// is `width`; `scale` carries the physical length of one unit and is only
/// consulted by quadrature code.
struct Spacetime {
  enum Kind { Strip, HalfPlane, DiamondWithEdge };
  Kind kind = Strip;
  Rat width = 1;    // strip: band 0 <= v-u <= 2*width
  Rat radius = 1;   // diamond_with_edge: M = {u in (-r,r), v in (u, r)}
  double scale = 3.14159265358979323846;

  static Spacetime strip(Rat a = 1, double scale = 3.14159265358979323846);
  static Spacetime half_plane();
  static Spacetime diamond_with_edge(Rat r);

  bool has_right_wall() const { return kind == Strip; }
  Rat band() const { return 2 * width; }  // only meaningful for Strip
};

/// An open axis-aligned rectangle in null coordinates; the region it denotes
/// is its intersection with M.
struct Rect {
  Bound u0 = Bound::neg_inf(), u1 = Bound::pos_inf();
  Bound v0 = Bound::neg_inf(), v1 = Bound::pos_inf();
  static Rect of(Rat u0, Rat u1, Rat v0, Rat v1);
};

/// Symbolic endpoint of a v-interval on an open u-slab.  DiagLo means v = u
/// (attained: boundary points belong to M), DiagHi means v = u + 2a
/// (attained).  Const endpoints are open.
struct VEnd {
  enum Kind { Const, DiagLo, DiagHi };
  Kind kind = Const;
  Bound c;  // Const only

  static VEnd konst(Bound b) { return VEnd{Const, b}; }
  static VEnd diag_lo() { return VEnd{DiagLo, {}}; }
  static VEnd diag_hi() { return VEnd{DiagHi, {}}; }
  friend bool operator==(const VEnd& a, const VEnd& b) {
    return a.kind == b.kind && (a.kind != Const || a.c == b.c);
  }
};

struct SlabIval {
  VEnd lo, hi;
  friend bool operator==(const SlabIval& a, const SlabIval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

/// v-interval on a breakpoint line u = b; closed flags can only be set at
/// band endpoints (which belong to M).
struct LineIval {
  Bound lo, hi;
  bool lo_closed = false, hi_closed = false;
  friend bool operator==(const LineIval& a, const LineIval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
};

/// Canonical form of a finite union of open rectangles intersected with M:
/// a minimal set of u-breakpoints (`cuts`), the v-interval unions on the open
/// slabs between them (`slabs`, size cuts.size()+1, symbolic endpoints), and
/// the v-interval unions on the breakpoint lines themselves (`lines`).
/// Structural equality of canonical forms coincides with set equality.
struct Region {
  std::vector<Rat> cuts;
  std::vector<std::vector<SlabIval>> slabs;
  std::vector<std::vector<LineIval>> lines;

  bool empty() const;
  friend bool operator==(const Region& a, const Region& b) {
    return a.cuts == b.cuts && a.slabs == b.slabs && a.lines == b.lines;
  }
};

Region region_from_rects(const Spacetime& M, const std::vector<Rect>& rects);
Region region_empty();
Region region_all(const Spacetime& M);

Region region_union(const Spacetime& M, const Region& A, const Region& B);
Region region_intersect(const Spacetime& M, const Region& A, const Region& B);
bool region_subset(const Spacetime& M, const Region& A, const Region& B);
bool region_contains_point(const Spacetime& M, const Region& S, const Rat& u,
                           const Rat& v);
/// v-intervals of S on the line u = const (closed flags at band endpoints).
std::vector<LineIval> region_section(const Spacetime& M, const Region& S,
                                     const Rat& u);

bool region_bounded(const Region& S);
/// Area of the region (in the (u,v) plane); error for unbounded regions.
Rat region_area(const Region& S);
/// [t_min, t_max] over the closure; requires bounded.
std::pair<Rat, Rat> region_t_extent(const Region& S);
/// max x over the closure; requires bounded in x.
Rat region_x_extent(const Spacetime& M, const Region& S);

std::string region_to_string(const Region& S);

/// J^+_M(S): points reachable from S along future directed causal curves
/// (curves may run along the timelike boundary).  For these spatially convex
/// flat models this is the Minkowski cone union clipped to M.
Region causal_future(const Spacetime& M, const Region& S);
Region causal_past(const Spacetime& M, const Region& S);

/// I^{+/-}_M(S): largest open subset of J^{+/-}_M(S).  For open rectangle
/// unions the causal and chronological futures coincide as point sets; the
/// lattice oracle cross-checks this via an erosion sandwich.
Region chronological_future(const Spacetime& M, const Region& S);
Region chronological_past(const Spacetime& M, const Region& S);

/// Causal cone of a single (closed) point, used by oracles and the Green's
/// operator support checks.  +1 future, -1 past; membership is closed.
bool point_cone_contains(const Spacetime& M, const Rat& pu, const Rat& pv,
                         int direction, const Rat& qu, const Rat& qv);

bool is_causally_convex(const Spacetime& M, const Region& S);
bool are_causally_disjoint(const Spacetime& M, const Region& S,
                           const Region& T);
/// True iff S contains no boundary points of M.
bool is_interior(const Spacetime& M, const Region& S);

/// Cauchy development D(S): points p such that every inextensible future
/// directed causal curve from p meets S, together with the dual past
/// condition.  Closed-form fast paths (stable single rectangles, null slabs,
/// M itself) are used where valid; all other bounded shapes are resolved by
/// the lattice fixpoint oracle and fitted back to an exact region, failing
/// loudly when no supported shape matches.
Region cauchy_development(const Spacetime& M, const Region& S);

bool is_stable(const Spacetime& M, const Region& S);
/// D(U) == D(U') for an inclusion U \subseteq U'; error NotAnInclusion.
bool is_cauchy_inclusion(const Spacetime& M, const Region& U,
                         const Region& U2);

}  // namespace bqft
