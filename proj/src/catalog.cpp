#include "bqft/catalog.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace bqft {

int Catalog::index_of(const std::string& id) const {
  for (size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return int(i);
  return -1;
}

int Catalog::find_region(const Region& r) const {
  for (size_t i = 0; i < regions.size(); ++i)
    if (regions[i] == r) return int(i);
  return -1;
}

int Catalog::development_index(int i) const {
  int j = find_region(developments[i]);
  if (j < 0) throw Error("CatalogNotClosed", "development of " + ids[i] + " missing");
  return j;
}

Catalog build_catalog(const Spacetime& M,
                      const std::vector<std::pair<std::string, Region>>& seeds,
                      const CatalogOptions& opts) {
  if (seeds.empty()) throw Error("EmptyCatalog", "no seed regions");
  Catalog C;
  C.M = M;
  for (const auto& [id, r] : seeds) {
    if (r.empty()) throw Error("EmptyRegion", "seed " + id + " is empty");
    if (!is_causally_convex(M, r)) throw Error("NotCausallyConvex", id);
    if (C.find_region(r) >= 0) throw Error("DuplicateRegion", id);
    C.ids.push_back(id);
    C.regions.push_back(r);
  }

  auto add_region = [&](const Region& r, const std::string& id) {
    if (C.find_region(r) >= 0) return false;
    if (C.size() >= opts.max_size)
      throw Error("ClosureOverflow", "catalog closure exceeded " + std::to_string(opts.max_size));
    C.ids.push_back(id);
    C.regions.push_back(r);
    return true;
  };

  // close under D and under developments of causally disjoint stable
  // interior pairs (the factorization regions)
  bool grew = true;
  while (grew) {
    grew = false;
    C.developments.resize(C.size());
    C.stable.assign(C.size(), false);
    C.interior.assign(C.size(), false);
    for (size_t i = 0; i < C.size(); ++i) {
      C.developments[i] = cauchy_development(M, C.regions[i]);
      C.stable[i] = C.developments[i] == C.regions[i];
      C.interior[i] = is_interior(M, C.regions[i]);
    }
    for (size_t i = 0; i < C.size(); ++i) {
      if (C.find_region(C.developments[i]) < 0) {
        grew |= add_region(C.developments[i], "D(" + C.ids[i] + ")");
      }
    }
    if (grew) continue;
    size_t n = C.size();
    for (size_t i = 0; i < n && !grew; ++i) {
      if (!C.stable[i] || !C.interior[i]) continue;
      for (size_t j = i + 1; j < n && !grew; ++j) {
        if (!C.stable[j] || !C.interior[j]) continue;
        if (!are_causally_disjoint(M, C.regions[i], C.regions[j])) continue;
        Region u = region_union(M, C.regions[i], C.regions[j]);
        Region w = cauchy_development(M, u);
        if (C.find_region(w) < 0) grew |= add_region(w, "D(" + C.ids[i] + "|" + C.ids[j] + ")");
      }
    }
  }

  size_t n = C.size();
  C.incl.assign(n, std::vector<bool>(n, false));
  C.cauchy.assign(n, std::vector<bool>(n, false));
  C.disjoint.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      C.incl[i][j] = region_subset(M, C.regions[i], C.regions[j]);
      if (C.incl[i][j]) C.cauchy[i][j] = C.developments[i] == C.developments[j];
      if (i != j) C.disjoint[i][j] = are_causally_disjoint(M, C.regions[i], C.regions[j]);
    }
  return C;
}

bool LocalizedCatalog::incl(int a, int b) const { return base->incl[objects[a]][objects[b]]; }
bool LocalizedCatalog::disjoint(int a, int b) const {
  return base->disjoint[objects[a]][objects[b]];
}
bool LocalizedCatalog::interior(int a) const { return base->interior[objects[a]]; }
const Region& LocalizedCatalog::region(int a) const { return base->regions[objects[a]]; }

LocalizedCatalog localize(const Catalog& C) {
  LocalizedCatalog L;
  L.base = &C;
  L.local_of_base.assign(C.size(), -1);
  for (size_t i = 0; i < C.size(); ++i)
    if (C.stable[i]) {
      L.local_of_base[i] = int(L.objects.size());
      L.objects.push_back(int(i));
    }
  L.dev_to_local.assign(C.size(), -1);
  for (size_t i = 0; i < C.size(); ++i) {
    int d = C.development_index(int(i));
    L.dev_to_local[i] = L.local_of_base[d];
  }
  return L;
}

std::vector<int> interior_objects(const LocalizedCatalog& L) {
  std::vector<int> out;
  for (size_t a = 0; a < L.size(); ++a)
    if (L.interior(int(a))) out.push_back(int(a));
  return out;
}

Report check_adjunction_DI(const Catalog& C,
                           const std::map<std::pair<int, int>, bool>& flag_overrides) {
  Report rep;
  rep.title = "localization adjunction D -| I";
  auto flag = [&](int i, int j) {
    auto it = flag_overrides.find({i, j});
    return it != flag_overrides.end() ? it->second : bool(C.cauchy[i][j]);
  };
  const Spacetime& M = C.M;
  for (size_t i = 0; i < C.size(); ++i) {
    const std::string& id = C.ids[i];
    int d = C.development_index(int(i));
    bool unit_cauchy = is_cauchy_inclusion(M, C.regions[i], C.developments[i]);
    rep.add("unit_cauchy(" + id + ")", unit_cauchy);
    rep.add("unit_flagged(" + id + ")", flag(int(i), d));
    // triangle D(eta_U): D(U) -> D(D(U)) must be the identity
    rep.add("triangle_D(" + id + ")",
            cauchy_development(M, C.developments[i]) == C.developments[i]);
    if (C.stable[i]) {
      rep.add("counit_identity(" + id + ")", C.developments[i] == C.regions[i]);
    }
  }
  // localization requirement (a): D inverts exactly the Cauchy morphisms
  for (size_t i = 0; i < C.size(); ++i)
    for (size_t j = 0; j < C.size(); ++j) {
      if (i == j || !C.incl[i][j]) continue;
      bool d_equal = C.developments[i] == C.developments[j];
      if (flag(int(i), int(j)) != d_equal)
        rep.add("cauchy_flag(" + C.ids[i] + "<=" + C.ids[j] + ")", false,
                d_equal ? "Cauchy morphism not flagged" : "flagged morphism is not Cauchy");
    }
  rep.add("cauchy_flags_consistent", rep.all_passed());
  // orthogonality preserved and detected by the localization functor
  bool orth = true;
  for (size_t i = 0; i < C.size() && orth; ++i)
    for (size_t j = 0; j < C.size() && orth; ++j) {
      if (i == j) continue;
      int di = C.development_index(int(i)), dj = C.development_index(int(j));
      bool before = C.disjoint[i][j];
      bool after = di == dj ? false : bool(C.disjoint[di][dj]);
      if (before != after) orth = false;
    }
  rep.add("orthogonality_preserved_detected_by_D", orth);
  return rep;
}

Report check_embedding_J(const Catalog& C) {
  Report rep;
  rep.title = "interior orthogonal subcategory embedding J";
  LocalizedCatalog L = localize(C);
  auto ints = interior_objects(L);
  bool ok = true;
  for (int a : ints)
    for (int b : ints) {
      if (a == b) continue;
      bool inside = are_causally_disjoint(C.M, L.region(a), L.region(b));
      if (inside != L.disjoint(a, b)) ok = false;
    }
  rep.add("orthogonality_preserved_and_detected", ok,
          "recomputed on " + std::to_string(ints.size()) + " interior objects");
  for (int a : ints)
    rep.add("object_fixed(" + C.ids[L.base_index(a)] + ")",
            L.region(a) == C.regions[L.base_index(a)]);
  return rep;
}

std::optional<Factorization> factor_through_interior(const Catalog& C, int v1, int v2, int v) {
  if (v1 < 0 || v2 < 0 || v < 0 || size_t(v1) >= C.size() || size_t(v2) >= C.size() ||
      size_t(v) >= C.size())
    throw Error("BadArgument", "object index out of range");
  if (!C.interior[v1] || !C.interior[v2] || !C.stable[v1] || !C.stable[v2] || !C.stable[v])
    throw Error("BadArgument", "factorization requires interior stable sources into a stable target");
  if (!C.incl[v1][v] || !C.incl[v2][v])
    throw Error("BadArgument", "sources must include into the target");
  if (!C.disjoint[v1][v2]) throw Error("NotDisjoint", C.ids[v1] + " vs " + C.ids[v2]);
  Region u = region_union(C.M, C.regions[v1], C.regions[v2]);
  Region w = cauchy_development(C.M, u);
  int wi = C.find_region(w);
  if (wi < 0) return std::nullopt;
  if (!C.interior[wi] || !C.stable[wi] || !is_causally_convex(C.M, w))
    throw Error("BadFactorization", "development of the union is not interior stable convex");
  if (!C.incl[v1][wi] || !C.incl[v2][wi] || !C.incl[wi][v])
    throw Error("BadFactorization", "inclusion chain through " + C.ids[wi] + " failed");
  return Factorization{wi};
}

FuncAlgFunctor random_local_functor(const LocalizedCatalog& L, std::mt19937& rng, int max_dim) {
  size_t n = L.size();
  // slot omega=0 lives everywhere; each extra slot lives on a random
  // down-closed set of objects, so inclusions restrict slot sets
  std::vector<std::vector<bool>> alive(max_dim, std::vector<bool>(n, false));
  alive[0].assign(n, true);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int w = 1; w < max_dim; ++w) {
    for (size_t a = 0; a < n; ++a)
      if (coin(rng) == 0) alive[w][a] = true;
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        if (alive[w][b] && L.incl(int(a), int(b))) alive[w][a] = true;
  }
  FuncAlgFunctor F;
  F.dims.resize(n);
  std::vector<std::vector<int>> slots(n);
  for (size_t a = 0; a < n; ++a) {
    for (int w = 0; w < max_dim; ++w)
      if (alive[w][a]) slots[a].push_back(w);
    F.dims[a] = int(slots[a].size());
  }
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b || !L.incl(int(a), int(b))) continue;
      std::vector<int> m(slots[b].size());
      for (size_t k = 0; k < slots[b].size(); ++k) {
        auto it = std::find(slots[a].begin(), slots[a].end(), slots[b][k]);
        m[k] = int(it - slots[a].begin());
      }
      F.maps[{int(a), int(b)}] = std::move(m);
    }
  return F;
}

namespace {

// Functor on a poset given by dims per object and slot maps per inclusion.
struct PosetFunctor {
  std::vector<int> dims;
  std::map<std::pair<int, int>, std::vector<int>> maps;
  std::vector<std::pair<int, int>> arrows;  // non-identity inclusions
};

// enumerate natural transformations F -> G (slot maps per object, contravariant)
std::vector<std::vector<std::vector<int>>> enumerate_nat(const PosetFunctor& F,
                                                         const PosetFunctor& G) {
  size_t n = F.dims.size();
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> comp(n);
  // all candidate slot maps per object
  auto candidates = [&](size_t a) {
    std::vector<std::vector<int>> cs;
    int kd = G.dims[a], kn = F.dims[a];
    std::vector<int> cur(kd, 0);
    while (true) {
      cs.push_back(cur);
      int p = kd - 1;
      while (p >= 0) {
        if (++cur[p] < kn) break;
        cur[p] = 0;
        --p;
      }
      if (p < 0) break;
    }
    return cs;
  };
  std::vector<std::vector<std::vector<int>>> cands(n);
  for (size_t a = 0; a < n; ++a) cands[a] = candidates(a);

  std::function<void(size_t)> rec = [&](size_t a) {
    if (out.size() > 2000000) throw Error("EnumerationBlowup", "too many natural transformations");
    if (a == n) {
      out.push_back(comp);
      return;
    }
    for (const auto& c : cands[a]) {
      comp[a] = c;
      bool ok = true;
      for (const auto& [s, t] : F.arrows) {
        // check each square once, when its later endpoint gets assigned
        if (size_t(std::max(s, t)) != a) continue;
        const auto& fm = F.maps.at({s, t});
        const auto& gm = G.maps.at({s, t});
        // G(t)-slots -> F(s)-slots two ways
        for (size_t k = 0; k < gm.size() && ok; ++k) {
          int lhs = comp[s][gm[k]];           // sigma_s after G-map
          int rhs = fm[comp[t][k]];           // F-map after sigma_t
          if (lhs != rhs) ok = false;
        }
        if (!ok) break;
      }
      if (ok) rec(a + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

Report check_localization_bijection(const Catalog& C, const FuncAlgFunctor& G,
                                    const FuncAlgFunctor& H) {
  Report rep;
  rep.title = "localization hom-set bijection";
  LocalizedCatalog L = localize(C);
  size_t nl = L.size(), nf = C.size();

  PosetFunctor Gl{G.dims, G.maps, {}}, Hl{H.dims, H.maps, {}};
  for (size_t a = 0; a < nl; ++a)
    for (size_t b = 0; b < nl; ++b)
      if (a != b && L.incl(int(a), int(b))) Gl.arrows.push_back({int(a), int(b)});
  Hl.arrows = Gl.arrows;

  // pullbacks along D to the full catalog
  PosetFunctor Gd, Hd;
  Gd.dims.resize(nf);
  Hd.dims.resize(nf);
  for (size_t u = 0; u < nf; ++u) {
    Gd.dims[u] = G.dims[L.dev_to_local[u]];
    Hd.dims[u] = H.dims[L.dev_to_local[u]];
  }
  for (size_t u = 0; u < nf; ++u)
    for (size_t w = 0; w < nf; ++w) {
      if (u == w || !C.incl[u][w]) continue;
      int du = L.dev_to_local[u], dw = L.dev_to_local[w];
      std::vector<int> gm, hm;
      if (du == dw) {
        gm.resize(G.dims[du]);
        hm.resize(H.dims[du]);
        for (int k = 0; k < G.dims[du]; ++k) gm[k] = k;
        for (int k = 0; k < H.dims[du]; ++k) hm[k] = k;
      } else {
        gm = G.maps.at({du, dw});
        hm = H.maps.at({du, dw});
      }
      Gd.maps[{int(u), int(w)}] = gm;
      Hd.maps[{int(u), int(w)}] = hm;
      Gd.arrows.push_back({int(u), int(w)});
    }
  Hd.arrows = Gd.arrows;

  auto nat_local = enumerate_nat(Gl, Hl);
  auto nat_full = enumerate_nat(Gd, Hd);

  // precompose with D
  std::vector<std::vector<std::vector<int>>> image;
  for (const auto& xi : nat_local) {
    std::vector<std::vector<int>> xd(nf);
    for (size_t u = 0; u < nf; ++u) xd[u] = xi[L.dev_to_local[u]];
    image.push_back(xd);
  }
  std::sort(image.begin(), image.end());
  bool injective = std::adjacent_find(image.begin(), image.end()) == image.end();
  auto full_sorted = nat_full;
  std::sort(full_sorted.begin(), full_sorted.end());
  bool surjective = image == full_sorted;

  rep.add("nat_counts", true,
          "local=" + std::to_string(nat_local.size()) + " full=" + std::to_string(nat_full.size()));
  rep.add("precomposition_injective", injective);
  rep.add("precomposition_surjective", surjective);
  return rep;
}

namespace {

nlohmann::json region_json(const Region& R) {
  nlohmann::json j;
  auto vend = [](const VEnd& e) -> nlohmann::json {
    switch (e.kind) {
      case VEnd::Const: return bound_to_string(e.c);
      case VEnd::DiagLo: return "u";
      case VEnd::DiagHi: return "u+2a";
    }
    return {};
  };
  j["cuts"] = nlohmann::json::array();
  for (const auto& c : R.cuts) j["cuts"].push_back(rat_to_string(c));
  j["slabs"] = nlohmann::json::array();
  for (const auto& list : R.slabs) {
    auto arr = nlohmann::json::array();
    for (const auto& iv : list) arr.push_back({{"lo", vend(iv.lo)}, {"hi", vend(iv.hi)}});
    j["slabs"].push_back(arr);
  }
  j["lines"] = nlohmann::json::array();
  for (const auto& list : R.lines) {
    auto arr = nlohmann::json::array();
    for (const auto& L : list)
      arr.push_back({{"lo", bound_to_string(L.lo)},
                     {"hi", bound_to_string(L.hi)},
                     {"lo_closed", L.lo_closed},
                     {"hi_closed", L.hi_closed}});
    j["lines"].push_back(arr);
  }
  return j;
}

}  // namespace

nlohmann::json catalog_to_json(const Catalog& C) {
  nlohmann::json j;
  j["objects"] = nlohmann::json::array();
  for (size_t i = 0; i < C.size(); ++i) {
    nlohmann::json o;
    o["id"] = C.ids[i];
    o["region"] = region_json(C.regions[i]);
    o["stable"] = bool(C.stable[i]);
    o["interior"] = bool(C.interior[i]);
    o["development"] = C.ids[C.development_index(int(i))];
    j["objects"].push_back(o);
  }
  auto morphisms = nlohmann::json::array();
  for (size_t i = 0; i < C.size(); ++i)
    for (size_t k = 0; k < C.size(); ++k)
      if (i != k && C.incl[i][k])
        morphisms.push_back(
            {{"src", C.ids[i]}, {"dst", C.ids[k]}, {"cauchy", bool(C.cauchy[i][k])}});
  j["morphisms"] = morphisms;
  auto orth = nlohmann::json::array();
  for (size_t i = 0; i < C.size(); ++i)
    for (size_t k = i + 1; k < C.size(); ++k)
      if (C.disjoint[i][k]) orth.push_back({C.ids[i], C.ids[k]});
  j["orthogonal_pairs"] = orth;
  return j;
}

}  // namespace bqft
