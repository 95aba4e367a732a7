#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "bqft/geometry.hpp"
#include "bqft/report.hpp"

namespace bqft {

/// A finite curated instantiation of the poset of causally convex open
/// regions: objects, all inclusion morphisms, Cauchy flags, causal
/// disjointness, and cached Cauchy developments.  Construction closes the
/// object set under D and under the factorization regions D(V1 u V2) of
/// causally disjoint stable interior pairs.
struct Catalog {
  Spacetime M;
  std::vector<std::string> ids;
  std::vector<Region> regions;
  std::vector<Region> developments;
  std::vector<bool> stable;
  std::vector<bool> interior;
  std::vector<std::vector<bool>> incl;      // incl[i][j]: regions[i] <= regions[j]
  std::vector<std::vector<bool>> cauchy;    // for inclusion pairs: D(i) == D(j)
  std::vector<std::vector<bool>> disjoint;  // causal disjointness of objects

  size_t size() const { return regions.size(); }
  int index_of(const std::string& id) const;
  int find_region(const Region& r) const;  // -1 when absent
  /// Index of D(regions[i]) inside the catalog (closure guarantees presence).
  int development_index(int i) const;
};

struct CatalogOptions {
  size_t max_size = 64;
};

Catalog build_catalog(const Spacetime& M,
                      const std::vector<std::pair<std::string, Region>>& seeds,
                      const CatalogOptions& opts = {});

/// The full subcategory of regions stable under Cauchy development, together
/// with the localization functor D on objects.
struct LocalizedCatalog {
  const Catalog* base = nullptr;
  std::vector<int> objects;        // base indices of the stable objects
  std::vector<int> dev_to_local;   // base index -> position in `objects` of D(U)
  std::vector<int> local_of_base;  // base index -> position or -1

  size_t size() const { return objects.size(); }
  int base_index(int local) const { return objects[local]; }
  int local_index_of_base(int base_idx) const { return local_of_base[base_idx]; }
  bool incl(int a, int b) const;      // inclusion between local objects
  bool disjoint(int a, int b) const;  // causal disjointness between local objects
  bool interior(int a) const;
  const Region& region(int a) const;
};

LocalizedCatalog localize(const Catalog& C);

/// Positions (in the localized catalog) of the interior objects; the image of
/// the full orthogonal subcategory embedding.
std::vector<int> interior_objects(const LocalizedCatalog& L);

/// Verifies the reflective-localization structure on a concrete catalog:
/// unit components are Cauchy inclusions, counit components identities, both
/// triangle identities, Cauchy morphisms inverted by D, stored flags
/// consistent, and orthogonality preserved and detected by D and I.
/// `flag_overrides` lets tests inject deliberately wrong Cauchy flags.
Report check_adjunction_DI(const Catalog& C,
                           const std::map<std::pair<int, int>, bool>& flag_overrides = {});

/// Orthogonality preservation/detection of the interior embedding J.
Report check_embedding_J(const Catalog& C);

/// Factorization of a causally disjoint pair of interior stable inclusions
/// through the development of their union.
struct Factorization {
  int w = -1;  // base index of D(V1 u V2)
};
std::optional<Factorization> factor_through_interior(const Catalog& C, int v1, int v2, int v);

/// Functors from a finite poset into finite function algebras C^n, encoded by
/// slot sets and index maps; used as fixtures for the localization law that
/// precomposition with D is a bijection on natural transformations.
struct FuncAlgFunctor {
  std::vector<int> dims;                            // per object
  std::map<std::pair<int, int>, std::vector<int>> maps;  // (src,dst) -> slot map
};

FuncAlgFunctor random_local_functor(const LocalizedCatalog& L, std::mt19937& rng, int max_dim);
/// Exhaustively enumerates natural transformations between functors on the
/// localized catalog and between their D-pullbacks, and checks that
/// precomposition with D is a bijection.
Report check_localization_bijection(const Catalog& C, const FuncAlgFunctor& G,
                                    const FuncAlgFunctor& H);

nlohmann::json catalog_to_json(const Catalog& C);

}  // namespace bqft
