#include "bqft/theory.hpp"

#include <algorithm>

namespace bqft {

Mat Theory::morphism(int p, int q) const {
  if (p == q) return Mat::Identity(algebras[p].n, algebras[p].n);
  auto it = morphisms.find({p, q});
  if (it == morphisms.end())
    throw Error("MissingMorphism", cat->ids[objects[p]] + " -> " + cat->ids[objects[q]]);
  return it->second;
}

void Theory::index_objects() {
  pos_of_base_.assign(cat->size(), -1);
  for (size_t p = 0; p < objects.size(); ++p) pos_of_base_[objects[p]] = int(p);
}

Theory make_theory(const Catalog& C, std::vector<int> objects, std::vector<StarAlgebra> algebras,
                   std::map<std::pair<int, int>, Mat> morphisms) {
  Theory T;
  T.cat = &C;
  T.objects = std::move(objects);
  T.algebras = std::move(algebras);
  T.morphisms = std::move(morphisms);
  T.index_objects();
  return T;
}

Report check_functoriality(const Theory& T, double tol) {
  Report rep;
  rep.title = "functoriality";
  const Catalog& C = *T.cat;
  for (size_t p = 0; p < T.size(); ++p)
    for (size_t q = 0; q < T.size(); ++q) {
      if (p == q || !T.incl(int(p), int(q))) continue;
      std::string name = C.ids[T.objects[p]] + "->" + C.ids[T.objects[q]];
      std::string why;
      bool ok = morphism_valid(T.algebras[p], T.algebras[q], T.morphism(int(p), int(q)), tol, &why);
      rep.add("morphism(" + name + ")", ok, why);
    }
  for (size_t p = 0; p < T.size(); ++p)
    for (size_t q = 0; q < T.size(); ++q)
      for (size_t r = 0; r < T.size(); ++r) {
        if (p == q || q == r || p == r) continue;
        if (!T.incl(int(p), int(q)) || !T.incl(int(q), int(r))) continue;
        Mat lhs = T.morphism(int(q), int(r)) * T.morphism(int(p), int(q));
        Mat rhs = T.morphism(int(p), int(r));
        bool ok = (lhs - rhs).norm() <= tol * std::max(1.0, rhs.norm());
        if (!ok)
          rep.add("composition(" + C.ids[T.objects[p]] + "->" + C.ids[T.objects[q]] + "->" +
                      C.ids[T.objects[r]] + ")",
                  false);
      }
  rep.add("compositions_commute", rep.all_passed());
  return rep;
}

Report check_causality(const Theory& T, double tol) {
  Report rep;
  rep.title = "causality axiom";
  const Catalog& C = *T.cat;
  for (size_t p1 = 0; p1 < T.size(); ++p1)
    for (size_t p2 = p1 + 1; p2 < T.size(); ++p2) {
      if (!T.disjoint(int(p1), int(p2))) continue;
      for (size_t q = 0; q < T.size(); ++q) {
        if (!T.incl(int(p1), int(q)) || !T.incl(int(p2), int(q))) continue;
        Mat f1 = T.morphism(int(p1), int(q));
        Mat f2 = T.morphism(int(p2), int(q));
        const StarAlgebra& B = T.algebras[q];
        double worst = 0;
        for (int i = 0; i < T.algebras[p1].n; ++i)
          for (int j = 0; j < T.algebras[p2].n; ++j) {
            Vec a = f1.col(i), b = f2.col(j);
            int da = 0, db = 0;
            for (int k = 0; k < B.n; ++k) {
              if (std::abs(a(k)) > tol) da = std::max(da, B.degree[k]);
              if (std::abs(b(k)) > tol) db = std::max(db, B.degree[k]);
            }
            if (da + db > B.degree_cap) continue;
            worst = std::max(worst, (B.mul(a, b) - B.mul(b, a)).norm());
          }
        rep.add("commute(" + C.ids[T.objects[p1]] + "," + C.ids[T.objects[p2]] + " in " +
                    C.ids[T.objects[q]] + ")",
                worst <= tol, "max commutator " + std::to_string(worst), tol);
      }
    }
  if (rep.checks.empty()) rep.add("no_orthogonal_pairs", true);
  return rep;
}

Report check_time_slice(const Theory& T, double tol) {
  Report rep;
  rep.title = "time-slice axiom";
  const Catalog& C = *T.cat;
  for (size_t p = 0; p < T.size(); ++p)
    for (size_t q = 0; q < T.size(); ++q) {
      if (p == q || !T.incl(int(p), int(q)) || !T.cauchy(int(p), int(q))) continue;
      Mat f = T.morphism(int(p), int(q));
      bool iso = T.algebras[p].n == T.algebras[q].n && mat_rank(f, tol) == T.algebras[p].n;
      rep.add("cauchy_iso(" + C.ids[T.objects[p]] + "->" + C.ids[T.objects[q]] + ")", iso);
    }
  if (rep.checks.empty()) rep.add("no_cauchy_morphisms", true);
  return rep;
}

Theory pullback_D(const Theory& T) {
  const Catalog& C = *T.cat;
  std::vector<int> objects(C.size());
  for (size_t i = 0; i < C.size(); ++i) objects[i] = int(i);
  std::vector<StarAlgebra> algebras;
  for (size_t i = 0; i < C.size(); ++i) {
    int d = C.development_index(int(i));
    int p = T.pos_of_base(d);
    if (p < 0) throw Error("MissingObject", "development " + C.ids[d] + " not in theory");
    algebras.push_back(T.algebras[p]);
  }
  std::map<std::pair<int, int>, Mat> morphisms;
  for (size_t i = 0; i < C.size(); ++i)
    for (size_t j = 0; j < C.size(); ++j) {
      if (i == j || !C.incl[i][j]) continue;
      int pi = T.pos_of_base(C.development_index(int(i)));
      int pj = T.pos_of_base(C.development_index(int(j)));
      morphisms[{int(i), int(j)}] = T.morphism(pi, pj);
    }
  return make_theory(C, objects, std::move(algebras), std::move(morphisms));
}

Theory pullback_I(const Theory& T_full) {
  const Catalog& C = *T_full.cat;
  std::vector<int> objects;
  for (size_t i = 0; i < C.size(); ++i)
    if (C.stable[i]) objects.push_back(int(i));
  std::vector<StarAlgebra> algebras;
  std::map<std::pair<int, int>, Mat> morphisms;
  for (size_t a = 0; a < objects.size(); ++a)
    algebras.push_back(T_full.algebras[T_full.pos_of_base(objects[a])]);
  for (size_t a = 0; a < objects.size(); ++a)
    for (size_t b = 0; b < objects.size(); ++b) {
      if (a == b || !C.incl[objects[a]][objects[b]]) continue;
      morphisms[{int(a), int(b)}] =
          T_full.morphism(T_full.pos_of_base(objects[a]), T_full.pos_of_base(objects[b]));
    }
  return make_theory(C, std::move(objects), std::move(algebras), std::move(morphisms));
}

Theory restrict_to_interior(const Theory& T) {
  const Catalog& C = *T.cat;
  std::vector<int> objects;
  for (int b : T.objects)
    if (C.interior[b]) objects.push_back(b);
  std::vector<StarAlgebra> algebras;
  std::map<std::pair<int, int>, Mat> morphisms;
  for (size_t a = 0; a < objects.size(); ++a)
    algebras.push_back(T.algebras[T.pos_of_base(objects[a])]);
  for (size_t a = 0; a < objects.size(); ++a)
    for (size_t b = 0; b < objects.size(); ++b) {
      if (a == b || !C.incl[objects[a]][objects[b]]) continue;
      morphisms[{int(a), int(b)}] =
          T.morphism(T.pos_of_base(objects[a]), T.pos_of_base(objects[b]));
    }
  return make_theory(C, std::move(objects), std::move(algebras), std::move(morphisms));
}

Report check_pullback_roundtrip(const Theory& T, double tol) {
  Report rep;
  rep.title = "pullback round trips";
  const Catalog& C = *T.cat;
  Theory full = pullback_D(T);
  Theory back = pullback_I(full);
  // I* after D*: identity on the localized theory (D(V) = V for stable V)
  bool same = back.objects == T.objects;
  for (size_t p = 0; p < T.size() && same; ++p)
    same = back.algebras[p].n == T.algebras[p].n;
  rep.add("I_after_D_identity_objects", same);
  if (same) {
    double worst = 0;
    for (size_t p = 0; p < T.size(); ++p)
      for (size_t q = 0; q < T.size(); ++q) {
        if (p == q || !T.incl(int(p), int(q))) continue;
        worst = std::max(worst,
                         (back.morphism(int(p), int(q)) - T.morphism(int(p), int(q))).norm());
      }
    rep.add("I_after_D_identity_morphisms", worst <= tol);
  }
  // D* after I* on the full side: unit components T2(eta_U) are isomorphisms
  for (size_t i = 0; i < C.size(); ++i) {
    int d = C.development_index(int(i));
    if (int(i) == d) continue;
    // eta_U : U -> D(U) is a Cauchy inclusion, so the full theory must send
    // it to an isomorphism
    int pu = full.pos_of_base(int(i)), pd = full.pos_of_base(d);
    Mat f = full.morphism(pu, pd);
    bool iso = full.algebras[pu].n == full.algebras[pd].n && mat_rank(f, tol) == full.algebras[pu].n;
    rep.add("unit_iso(" + C.ids[i] + ")", iso);
  }
  return rep;
}

void certify_ideal_functor(const Theory& T, const IdealFunctor& I, double tol) {
  if (I.components.size() != T.size())
    throw Error("NotAnIdealFunctor", "component count mismatch");
  for (size_t p = 0; p < T.size(); ++p) {
    try {
      certify_ideal(T.algebras[p], I.components[p], tol);
    } catch (const Error& e) {
      throw Error("NotAnIdealFunctor",
                  "component " + T.cat->ids[T.objects[p]] + ": " + e.what());
    }
  }
  for (size_t p = 0; p < T.size(); ++p)
    for (size_t q = 0; q < T.size(); ++q) {
      if (p == q || !T.incl(int(p), int(q))) continue;
      Mat f = T.morphism(int(p), int(q));
      for (int c = 0; c < I.components[p].basis.cols(); ++c)
        if (!in_span(I.components[q].basis, f * I.components[p].basis.col(c), tol))
          throw Error("NotAnIdealFunctor", "morphism " + T.cat->ids[T.objects[p]] + "->" +
                                               T.cat->ids[T.objects[q]] +
                                               " does not restrict to the ideals");
    }
}

QuotientTheory quotient_theory(const Theory& T, const IdealFunctor& I, double tol) {
  certify_ideal_functor(T, I, tol);
  QuotientTheory out;
  std::vector<StarAlgebra> algebras;
  for (size_t p = 0; p < T.size(); ++p) {
    Quotient q = quotient_by_ideal(T.algebras[p], I.components[p], tol);
    algebras.push_back(q.algebra);
    out.projections.push_back(q.projection);
    out.sections.push_back(q.section);
  }
  std::map<std::pair<int, int>, Mat> morphisms;
  for (const auto& [pq, f] : T.morphisms) {
    morphisms[pq] = out.projections[pq.second] * f * out.sections[pq.first];
  }
  out.theory = make_theory(*T.cat, T.objects, std::move(algebras), std::move(morphisms));
  return out;
}

AdditivityResult is_additive_at(const Theory& T, int pos, double tol) {
  const StarAlgebra& B = T.algebras[pos];
  AdditivityResult res;
  res.alg_dim = B.n;
  if (B.n == 0) {
    res.additive = true;
    res.span_dim = 0;
    return res;
  }
  std::vector<Vec> seed{B.unit};
  for (size_t p = 0; p < T.size(); ++p) {
    if (!T.interior(int(p))) continue;
    if (int(p) != pos && !T.incl(int(p), pos)) continue;
    if (int(p) == pos) {
      res.additive = true;  // interior object includes into itself
      res.span_dim = B.n;
      return res;
    }
    Mat f = T.morphism(int(p), pos);
    for (int c = 0; c < f.cols(); ++c) seed.push_back(f.col(c));
  }
  Mat span(B.n, seed.size());
  for (size_t k = 0; k < seed.size(); ++k) span.col(k) = seed[k];
  Mat basis = orth_basis(span, tol);
  bool overflow = false;
  while (true) {
    std::vector<Vec> next;
    for (int a = 0; a < basis.cols(); ++a)
      for (int b = 0; b < basis.cols(); ++b) {
        Vec x = basis.col(a), y = basis.col(b);
        int dx = 0, dy = 0;
        for (int k = 0; k < B.n; ++k) {
          if (std::abs(x(k)) > tol) dx = std::max(dx, B.degree[k]);
          if (std::abs(y(k)) > tol) dy = std::max(dy, B.degree[k]);
        }
        if (dx + dy > B.degree_cap) {
          overflow = true;
          continue;
        }
        next.push_back(B.mul(x, y));
      }
    Mat bigger(B.n, basis.cols() + next.size());
    bigger.leftCols(basis.cols()) = basis;
    for (size_t k = 0; k < next.size(); ++k) bigger.col(basis.cols() + k) = next[k];
    Mat nb = orth_basis(bigger, tol);
    if (nb.cols() == basis.cols()) break;
    basis = nb;
  }
  res.span_dim = int(basis.cols());
  res.additive = res.span_dim == B.n;
  res.conclusive = res.additive || !overflow;
  return res;
}

bool is_additive(const Theory& T, double tol) {
  for (size_t p = 0; p < T.size(); ++p) {
    AdditivityResult r = is_additive_at(T, int(p), tol);
    if (!r.additive) return false;
  }
  return true;
}

bool is_trivial_on_interior(const Theory& T, const IdealFunctor& I, double tol) {
  (void)tol;
  for (size_t p = 0; p < T.size(); ++p)
    if (T.interior(int(p)) && I.components[p].dim() != 0) return false;
  return true;
}

Theory conjugate_theory(const Theory& T, std::mt19937& rng) {
  Theory out = T;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Mat> g(T.size()), gi(T.size());
  for (size_t p = 0; p < T.size(); ++p) {
    int n = T.algebras[p].n;
    Mat m = Mat::Identity(n, n);
    // unit-triangular perturbation keeps the matrix invertible and keeps
    // degree filtration compatible (only same-or-lower degree mixing)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (T.algebras[p].degree[i] <= T.algebras[p].degree[j] && i != j)
          m(i, j) += 0.2 * uni(rng);
    g[p] = m;
    gi[p] = m.inverse();
    out.algebras[p] = change_basis(T.algebras[p], m);
  }
  for (auto& [pq, f] : out.morphisms) f = gi[pq.second] * f * g[pq.first];
  return out;
}

}  // namespace bqft
