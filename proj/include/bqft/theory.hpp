#pragma once

#include <map>

#include "bqft/algebra.hpp"
#include "bqft/catalog.hpp"
#include "bqft/report.hpp"

namespace bqft {

/// Algebra-valued functor on a chosen object set of a catalog (the localized
/// catalog for quantum field theories, its interior part for interior
/// theories, or the full catalog for the unlocalized variant with
/// time-slice data).  Morphism matrices are stored for non-identity
/// inclusions only.
struct Theory {
  const Catalog* cat = nullptr;
  std::vector<int> objects;  // catalog base indices
  std::vector<StarAlgebra> algebras;
  std::map<std::pair<int, int>, Mat> morphisms;  // positions (src, dst)
  std::vector<int> pos_of_base_;

  int pos_of_base(int base_idx) const { return pos_of_base_[base_idx]; }
  bool incl(int p, int q) const { return cat->incl[objects[p]][objects[q]]; }
  bool disjoint(int p, int q) const { return cat->disjoint[objects[p]][objects[q]]; }
  bool interior(int p) const { return cat->interior[objects[p]]; }
  bool cauchy(int p, int q) const { return cat->cauchy[objects[p]][objects[q]]; }
  Mat morphism(int p, int q) const;  // identity when p == q
  size_t size() const { return objects.size(); }
  void index_objects();
};

Theory make_theory(const Catalog& C, std::vector<int> objects,
                   std::vector<StarAlgebra> algebras,
                   std::map<std::pair<int, int>, Mat> morphisms);

Report check_functoriality(const Theory& T, double tol = kTolLin);
/// Causality: images of causally disjoint objects commute in every common
/// target (checked on all basis pairs with defined products).
Report check_causality(const Theory& T, double tol = kTolLin);
/// Time-slice: Cauchy inclusions act as isomorphisms (exact rank equality).
Report check_time_slice(const Theory& T, double tol = kTolLin);

/// Pullback along the localization functor D: extends a theory on the stable
/// objects to the full catalog by U |-> T(D(U)).
Theory pullback_D(const Theory& T);
/// Pullback along the subcategory embedding I: restriction to the stable
/// objects.
Theory pullback_I(const Theory& T_full);
/// Restriction to the interior stable objects.
Theory restrict_to_interior(const Theory& T);

/// Round trips of the two pullbacks against the adjunction unit/counit.
Report check_pullback_roundtrip(const Theory& T_localized, double tol = kTolLin);

/// Per-object two-sided star ideals with morphism restriction.
struct IdealFunctor {
  std::vector<TwoSidedStarIdeal> components;  // aligned with Theory::objects
};

void certify_ideal_functor(const Theory& T, const IdealFunctor& I, double tol = kTolLin);

struct QuotientTheory {
  Theory theory;
  std::vector<Mat> projections;
  std::vector<Mat> sections;
};

QuotientTheory quotient_theory(const Theory& T, const IdealFunctor& I, double tol = kTolLin);

struct AdditivityResult {
  bool additive = false;
  bool conclusive = true;  // false when the degree cap hid products
  int span_dim = 0;
  int alg_dim = 0;
};

/// Is T(V) generated by the images of interior-sourced morphisms?  Span
/// saturation under defined products, starting from those images.
AdditivityResult is_additive_at(const Theory& T, int pos, double tol = kTolLin);
bool is_additive(const Theory& T, double tol = kTolLin);

bool is_trivial_on_interior(const Theory& T, const IdealFunctor& I, double tol = kTolLin);

/// Conjugates every object algebra by a random change of basis; axiom checks
/// must be invariant under this.
Theory conjugate_theory(const Theory& T, std::mt19937& rng);

}  // namespace bqft
