#include "bqft/extension.hpp"

#include <algorithm>

namespace bqft {

namespace {

constexpr double kEps = 1e-12;

void require_unit_first(const StarAlgebra& A, const std::string& where) {
  if (A.n == 0) return;
  Vec e0 = Vec::Unit(A.n, 0);
  if ((A.unit - e0).norm() > 1e-9)
    throw Error("UnitNotFirst", "algebra at " + where + " must carry its unit as basis 0");
}

ExtAlgebra build_ext_algebra(const Theory& A, int target_base, int max_len) {
  const Catalog& C = *A.cat;
  ExtAlgebra E;
  E.target = target_base;
  for (int b : A.objects)
    if (C.incl[b][target_base]) E.interior_below.push_back(b);

  std::vector<Letter> letters;
  for (int b : E.interior_below) {
    const StarAlgebra& alg = A.algebras[A.pos_of_base(b)];
    require_unit_first(alg, C.ids[b]);
    if (alg.degree_cap < max_len)
      throw Error("TruncationUnsound", "leaf cap at " + C.ids[b] + " below the tree truncation");
    for (int k = 1; k < alg.n; ++k) {
      Letter L;
      L.name = C.ids[b] + ":" + alg.name_of(k);
      L.degree = std::max(1, alg.degree[k]);
      E.letter_of[{b, k}] = int(letters.size());
      E.letter_region.push_back(b);
      E.letter_basis.push_back(k);
      letters.push_back(L);
    }
  }
  // star expansions need the final letter indices
  for (size_t l = 0; l < letters.size(); ++l) {
    int b = E.letter_region[l], k = E.letter_basis[l];
    const StarAlgebra& alg = A.algebras[A.pos_of_base(b)];
    Vec s = alg.star.col(k);
    bool self = (s - Vec::Unit(alg.n, k)).norm() <= 1e-12;
    letters[l].self_adjoint = self;
    if (!self) {
      letters[l].star_unit = s(0);
      for (int k2 = 1; k2 < alg.n; ++k2)
        if (std::abs(s(k2)) > kEps) letters[l].star[E.letter_of.at({b, k2})] = s(k2);
    }
  }

  WordAlgebra W = make_words(std::move(letters), max_len);

  // factorization relations: a contiguous block whose regions embed into a
  // common interior region below the target equals the pushforward of the
  // actual product there
  for (size_t widx = 1; widx < W.words.size(); ++widx) {
    const auto& word = W.words[widx];
    int len = int(word.size());
    for (int p = 0; p < len; ++p)
      for (int q = p; q < len; ++q) {
        for (int wreg : E.interior_below) {
          bool fits = true;
          for (int r = p; r <= q && fits; ++r)
            fits = C.incl[E.letter_region[word[r]]][wreg];
          if (!fits) continue;
          if (p == q && E.letter_region[word[p]] == wreg) continue;  // identity rewrite
          int posW = A.pos_of_base(wreg);
          const StarAlgebra& WA = A.algebras[posW];
          Vec y = WA.unit;
          for (int r = p; r <= q; ++r) {
            int b = E.letter_region[word[r]], k = E.letter_basis[word[r]];
            Vec img = b == wreg ? Vec(Vec::Unit(WA.n, k))
                                : Vec(A.morphism(A.pos_of_base(b), posW).col(k));
            y = WA.mul(y, img);
          }
          Vec row = Vec::Zero(W.words.size());
          row(widx) += 1.0;
          std::vector<int> prefix(word.begin(), word.begin() + p);
          std::vector<int> suffix(word.begin() + q + 1, word.end());
          auto splice = [&](int mid_letter) {
            auto nw = prefix;
            if (mid_letter >= 0) nw.push_back(mid_letter);
            nw.insert(nw.end(), suffix.begin(), suffix.end());
            int idx = W.word_of(nw);
            if (idx < 0) throw Error("TruncationUnsound", "replacement word missing");
            return idx;
          };
          if (std::abs(y(0)) > kEps) row(splice(-1)) -= y(0);
          for (int k = 1; k < WA.n; ++k)
            if (std::abs(y(k)) > kEps) row(splice(E.letter_of.at({wreg, k}))) -= y(k);
          W.add_relation(row);
        }
      }
  }
  E.pres = materialize(std::move(W));
  return E;
}

}  // namespace

ExtendedTheory ext_theory(const Theory& A, const ExtOptions& opts) {
  const Catalog& C = *A.cat;
  for (int b : A.objects)
    if (!C.interior[b] || !C.stable[b])
      throw Error("BadArgument", "ext input must live on interior stable objects");

  ExtendedTheory E;
  std::vector<int> objects;
  for (size_t i = 0; i < C.size(); ++i)
    if (C.stable[i]) objects.push_back(int(i));

  for (int v : objects) E.data.push_back(build_ext_algebra(A, v, opts.max_len));

  std::vector<StarAlgebra> algebras;
  for (const auto& d : E.data) algebras.push_back(d.pres.alg);

  std::map<std::pair<int, int>, Mat> morphisms;
  for (size_t a = 0; a < objects.size(); ++a)
    for (size_t b = 0; b < objects.size(); ++b) {
      if (a == b || !C.incl[objects[a]][objects[b]]) continue;
      const ExtAlgebra& Sa = E.data[a];
      const ExtAlgebra& Sb = E.data[b];
      std::vector<Vec> images;
      for (size_t l = 0; l < Sa.letter_region.size(); ++l) {
        auto it = Sb.letter_of.find({Sa.letter_region[l], Sa.letter_basis[l]});
        if (it == Sb.letter_of.end())
          throw Error("MissingFactorizationRegion",
                      "letter region " + C.ids[Sa.letter_region[l]] + " not below " +
                          C.ids[objects[b]]);
        Vec img = Vec::Zero(Sb.pres.W.words.size());
        img(Sb.pres.W.word_of({it->second})) = 1.0;
        images.push_back(std::move(img));
      }
      morphisms[{int(a), int(b)}] = induced_word_map(Sa.pres, Sb.pres, images);
    }
  E.theory = make_theory(C, std::move(objects), std::move(algebras), std::move(morphisms));
  return E;
}

Theory res_theory(const Theory& B) { return restrict_to_interior(B); }

Mat unit_component(const Theory& A, const ExtendedTheory& E, int interior_base) {
  int pos = E.theory.pos_of_base(interior_base);
  if (pos < 0) throw Error("MissingObject", "interior object not in the extension");
  const ExtAlgebra& D = E.data[pos];
  int n = A.algebras[A.pos_of_base(interior_base)].n;
  Mat out(D.pres.dim(), n);
  for (int k = 0; k < n; ++k) {
    Vec w = Vec::Zero(D.pres.W.words.size());
    if (k == 0) {
      w(0) = 1.0;
    } else {
      w(D.pres.W.word_of({D.letter_of.at({interior_base, k})})) = 1.0;
    }
    out.col(k) = D.pres.coords(std::move(w));
  }
  return out;
}

Mat counit_component(const Theory& B, const ExtendedTheory& E_of_resB, int pos) {
  const ExtAlgebra& D = E_of_resB.data[pos];
  int target = D.target;
  int bpos = B.pos_of_base(target);
  if (bpos < 0) throw Error("MissingObject", "target not in the ambient theory");
  const StarAlgebra& BA = B.algebras[bpos];
  std::vector<Vec> images;
  for (size_t l = 0; l < D.letter_region.size(); ++l) {
    int src = B.pos_of_base(D.letter_region[l]);
    Mat f = B.morphism(src, bpos);
    images.push_back(f.col(D.letter_basis[l]));
  }
  return evaluate_words(D.pres, BA, images);
}

namespace {

// splits unit components off every leaf and drops zero terms
TreeSum expand_units(const TreeSum& in) {
  TreeSum out;
  for (const auto& [c0, t0] : in) {
    std::vector<std::pair<Cplx, TreeTerm>> stack{{c0, TreeTerm{t0.target, {}}}};
    std::vector<std::pair<Cplx, TreeTerm>> done;
    // process leaves one at a time
    std::vector<TreeLeaf> pending = t0.leaves;
    for (const auto& leaf : pending) {
      std::vector<std::pair<Cplx, TreeTerm>> next;
      for (auto& [c, t] : stack) {
        Cplx u = leaf.element.size() > 0 ? leaf.element(0) : Cplx(0);
        Vec rest = leaf.element;
        if (rest.size() > 0) rest(0) = 0;
        if (std::abs(u) > kEps) next.push_back({c * u, t});
        if (rest.norm() > kEps) {
          TreeTerm t2 = t;
          t2.leaves.push_back({leaf.region, rest});
          next.push_back({c, t2});
        }
      }
      stack = std::move(next);
    }
    for (auto& x : stack) out.push_back(std::move(x));
  }
  return out;
}

int element_degree(const StarAlgebra& A, const Vec& x) {
  int d = 0;
  for (int k = 0; k < A.n; ++k)
    if (std::abs(x(k)) > kEps) d = std::max(d, std::max(1, A.degree[k]));
  return d;
}

}  // namespace

TreeSum normal_form(const Theory& A, const ExtAlgebra& E, const TreeSum& t0) {
  const Catalog& C = *A.cat;
  auto smaller_region = [&](int a, int b) {
    if (a == b) return a;
    Rat aa = region_area(C.regions[a]), ab = region_area(C.regions[b]);
    if (aa != ab) return aa < ab ? a : b;
    return a < b ? a : b;
  };

  TreeSum cur = expand_units(t0);
  for (int guard = 0; guard < 1000; ++guard) {
    bool changed = false;
    TreeSum next;
    for (auto& [c, t] : cur) {
      int len = int(t.leaves.size());
      // 1. leftmost longest contiguous block factoring through an interior
      //    region strictly below the target
      int bp = -1, bq = -1, bw = -1;
      for (int L = len; L >= 2 && bp < 0; --L)
        for (int p = 0; p + L <= len && bp < 0; ++p) {
          int q = p + L - 1;
          int best = -1;
          for (int wreg : E.interior_below) {
            bool fits = true;
            for (int r = p; r <= q && fits; ++r) fits = C.incl[t.leaves[r].region][wreg];
            if (!fits) continue;
            best = best < 0 ? wreg : smaller_region(best, wreg);
          }
          if (best >= 0) {
            bp = p;
            bq = q;
            bw = best;
          }
        }
      if (bp >= 0) {
        int posW = A.pos_of_base(bw);
        const StarAlgebra& WA = A.algebras[posW];
        Vec y = WA.unit;
        for (int r = bp; r <= bq; ++r) {
          const TreeLeaf& lf = t.leaves[r];
          Vec img = lf.region == bw ? lf.element
                                    : Vec(A.morphism(A.pos_of_base(lf.region), posW) * lf.element);
          y = WA.mul(y, img);
        }
        TreeTerm t2{t.target, {}};
        for (int r = 0; r < bp; ++r) t2.leaves.push_back(t.leaves[r]);
        t2.leaves.push_back({bw, y});
        for (int r = bq + 1; r < len; ++r) t2.leaves.push_back(t.leaves[r]);
        for (auto& x : expand_units({{c, t2}})) next.push_back(std::move(x));
        changed = true;
        continue;
      }
      // 2. push leaves to canonical maximal regions
      bool pushed = false;
      TreeTerm t3 = t;
      for (auto& lf : t3.leaves) {
        int best = lf.region;
        for (int wreg : E.interior_below) {
          if (!C.incl[lf.region][wreg]) continue;
          // maximal: not properly contained in another candidate
          bool maximal = true;
          for (int w2 : E.interior_below)
            if (w2 != wreg && C.incl[wreg][w2]) maximal = false;
          if (!maximal) continue;
          if (best == lf.region || wreg < best) best = wreg;
        }
        if (best != lf.region) {
          lf.element = A.morphism(A.pos_of_base(lf.region), A.pos_of_base(best)) * lf.element;
          lf.region = best;
          pushed = true;
        }
      }
      if (pushed) {
        for (auto& x : expand_units({{c, t3}})) next.push_back(std::move(x));
        changed = true;
        continue;
      }
      // 3. sort causally disjoint adjacent leaves (admissibility is
      //    oracle-verified against the materialized quotient)
      bool swapped = false;
      for (int r = 0; r + 1 < len && !swapped; ++r) {
        int ra = t.leaves[r].region, rb = t.leaves[r + 1].region;
        if (ra > rb && C.disjoint[ra][rb]) {
          TreeTerm t4 = t;
          std::swap(t4.leaves[r], t4.leaves[r + 1]);
          next.push_back({c, t4});
          swapped = true;
        }
      }
      if (swapped) {
        changed = true;
        continue;
      }
      next.push_back({c, t});
    }
    cur = std::move(next);
    if (!changed) return cur;
  }
  throw Error("RewriteDiverged", "tree rewriting did not terminate");
}

Vec tree_sum_word_vec(const Theory& A, const ExtAlgebra& E, const TreeSum& t) {
  (void)A;
  Vec out = Vec::Zero(E.pres.W.words.size());
  for (const auto& [c, term] : t) {
    std::map<std::vector<int>, Cplx> acc{{{}, c}};
    for (const auto& leaf : term.leaves) {
      std::map<std::vector<int>, Cplx> next;
      for (const auto& [w, cw] : acc) {
        if (leaf.element.size() > 0 && std::abs(leaf.element(0)) > kEps) {
          next[w] += cw * leaf.element(0);
        }
        for (int k = 1; k < leaf.element.size(); ++k) {
          if (std::abs(leaf.element(k)) < kEps) continue;
          auto w2 = w;
          w2.push_back(E.letter_of.at({leaf.region, k}));
          next[w2] += cw * leaf.element(k);
        }
      }
      acc = std::move(next);
    }
    for (const auto& [w, cw] : acc) {
      int idx = E.pres.W.word_of(w);
      if (idx < 0) throw Error("DegreeOverflow", "tree outside the truncation");
      out(idx) += cw;
    }
  }
  return out;
}

TreeSum tree_of_word(const ExtAlgebra& E, int word_idx) {
  TreeTerm t{E.target, {}};
  for (int l : E.pres.W.words[word_idx]) {
    int region = E.letter_region[l];
    int k = E.letter_basis[l];
    // leaf elements live in the region's algebra; reconstruct size from the
    // largest basis index used by this region's letters
    int n = k + 1;
    for (size_t l2 = 0; l2 < E.letter_basis.size(); ++l2)
      if (E.letter_region[l2] == region) n = std::max(n, E.letter_basis[l2] + 1);
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    t.leaves.push_back({region, e});
  }
  return {{Cplx(1, 0), t}};
}

int normal_form_span_dim(const Theory& A, const ExtAlgebra& E) {
  size_t nw = E.pres.W.words.size();
  Mat span(nw, nw);
  for (size_t w = 0; w < nw; ++w) {
    TreeSum nf = normal_form(A, E, tree_of_word(E, int(w)));
    span.col(w) = tree_sum_word_vec(A, E, nf);
  }
  return mat_rank(span, 1e-8);
}

StarAlgebra brute_force_quotient(const ExtAlgebra& E) { return E.pres.alg; }

Characterization characterize(const Theory& B, const ExtOptions& opts) {
  Characterization ch;
  ch.report.title = "characterization: additivity vs lambda";
  Theory resB = res_theory(B);
  ch.ext = ext_theory(resB, opts);
  const Catalog& C = *B.cat;
  size_t n = ch.ext.theory.size();

  ch.counit_kernel.components.resize(n);
  ch.counits.resize(n);
  for (size_t p = 0; p < n; ++p) {
    int base = ch.ext.theory.objects[p];
    ch.counits[p] = counit_component(B, ch.ext, int(p));
    ch.counit_kernel.components[p] = morphism_kernel(
        ch.ext.theory.algebras[p], B.algebras[B.pos_of_base(base)], ch.counits[p]);
  }
  certify_ideal_functor(ch.ext.theory, ch.counit_kernel);
  ch.report.add("counit_kernel_is_ideal_functor", true);
  ch.report.add("counit_kernel_trivial_on_interior",
                is_trivial_on_interior(ch.ext.theory, ch.counit_kernel));

  // counit naturality squares
  double worst = 0;
  for (size_t p = 0; p < n; ++p)
    for (size_t q = 0; q < n; ++q) {
      if (p == q || !ch.ext.theory.incl(int(p), int(q))) continue;
      int bp = B.pos_of_base(ch.ext.theory.objects[p]);
      int bq = B.pos_of_base(ch.ext.theory.objects[q]);
      Mat lhs = ch.counits[q] * ch.ext.theory.morphism(int(p), int(q));
      Mat rhs = B.morphism(bp, bq) * ch.counits[p];
      worst = std::max(worst, (lhs - rhs).norm());
    }
  ch.report.add("counit_naturality", worst <= 1e-8, "max defect " + std::to_string(worst));

  ch.quotient = quotient_theory(ch.ext.theory, ch.counit_kernel);
  ch.lambdas.resize(n);
  for (size_t p = 0; p < n; ++p) {
    int base = ch.ext.theory.objects[p];
    const StarAlgebra& BA = B.algebras[B.pos_of_base(base)];
    ch.lambdas[p] = ch.counits[p] * ch.quotient.sections[p];
    int qn = ch.quotient.theory.algebras[p].n;
    bool inj = mat_rank(ch.lambdas[p]) == qn;
    bool iso = inj && qn == BA.n;
    AdditivityResult ar = is_additive_at(B, B.pos_of_base(base));
    ObjectCharacterization row;
    row.pos = int(p);
    row.additive = ar.additive;
    row.additivity_conclusive = ar.conclusive;
    row.lambda_iso = iso;
    ch.rows.push_back(row);
    ch.report.add("lambda_injective(" + C.ids[base] + ")", inj);
    ch.report.add("agreement(" + C.ids[base] + ")", row.additive == row.lambda_iso,
                  std::string("additive=") + (row.additive ? "yes" : "no") + " lambda_iso=" +
                      (row.lambda_iso ? "yes" : "no") +
                      (ar.conclusive ? "" : " (additivity at cap)"));
  }
  return ch;
}

QuotientTheory functor_Q(const IQFTPair& p, double tol) {
  if (!is_trivial_on_interior(p.ext.theory, p.ideal))
    throw Error("IdealNotTrivialOnInterior", "Q requires a trivial-on-interior ideal");
  return quotient_theory(p.ext.theory, p.ideal, tol);
}

IQFTPair functor_S(const Theory& B, const ExtOptions& opts, double tol) {
  if (!is_additive(B, tol)) throw Error("NotAdditive", "S requires an additive theory");
  IQFTPair out;
  out.interior = res_theory(B);
  out.ext = ext_theory(out.interior, opts);
  size_t n = out.ext.theory.size();
  out.ideal.components.resize(n);
  for (size_t p = 0; p < n; ++p) {
    int base = out.ext.theory.objects[p];
    Mat eps = counit_component(B, out.ext, int(p));
    out.ideal.components[p] =
        morphism_kernel(out.ext.theory.algebras[p], B.algebras[B.pos_of_base(base)], eps);
  }
  return out;
}

Report roundtrip_check(const IQFTPair& p, const ExtOptions& opts, double tol, double exact_tol) {
  Report rep;
  rep.title = "Q/S round trips";
  const Catalog& C = *p.interior.cat;

  QuotientTheory Bq = functor_Q(p, tol);
  const Theory& B = Bq.theory;
  rep.add("Q_result_additive", is_additive(B, tol));
  rep.merge(check_causality(B, 1e-7));

  // QS ~ id via lambda
  Characterization ch = characterize(B, opts);
  bool lambda_all = true;
  for (const auto& row : ch.rows) lambda_all &= row.lambda_iso && row.additive;
  rep.add("QS_lambda_iso_everywhere", lambda_all);

  // SQ ~ id via ext(eta_A); mediating map = canonical projection
  Theory resExtA = res_theory(p.ext.theory);
  ExtendedTheory E2 = ext_theory(resExtA, opts);
  size_t n = p.ext.theory.size();
  double worst_q = 0;
  bool eta_iso = true, ideal_match = true;
  std::vector<Mat> eta;  // per interior object of A
  for (size_t pos = 0; pos < n; ++pos) {
    int base = p.ext.theory.objects[pos];
    if (!C.interior[base]) continue;
    Mat u = unit_component(p.interior, p.ext, base);
    int an = p.interior.algebras[p.interior.pos_of_base(base)].n;
    eta_iso &= u.cols() == an && u.rows() == an && mat_rank(u) == an;
  }
  rep.add("eta_components_iso", eta_iso);

  for (size_t pos = 0; pos < n; ++pos) {
    int base = p.ext.theory.objects[pos];
    // ext(eta_A) at this object: letters (W,k) of ext A(V) map through eta_W
    const ExtAlgebra& Sa = p.ext.data[pos];
    const ExtAlgebra& Sb = E2.data[pos];
    std::vector<Vec> images;
    for (size_t l = 0; l < Sa.letter_region.size(); ++l) {
      int wreg = Sa.letter_region[l];
      Mat u = unit_component(p.interior, p.ext, wreg);
      Vec y = u.col(Sa.letter_basis[l]);  // element of ext A(W) = res ext A(W)
      Vec img = Vec::Zero(Sb.pres.W.words.size());
      if (std::abs(y(0)) > 1e-14) img(0) += y(0);
      for (int k = 1; k < y.size(); ++k) {
        if (std::abs(y(k)) < 1e-14) continue;
        img(Sb.pres.W.word_of({Sb.letter_of.at({wreg, k})})) += y(k);
      }
      images.push_back(std::move(img));
    }
    Mat ext_eta = induced_word_map(Sa.pres, Sb.pres, images);

    // counit of B = ext A / I at this object (res B coincides with res ext A
    // because the ideal is trivial on the interior)
    Mat eps2 = counit_component(B, E2, int(pos));
    Mat mediating = eps2 * ext_eta;
    Mat proj = Bq.projections[pos];
    worst_q = std::max(worst_q, (mediating - proj).cwiseAbs().maxCoeff());

    // the extracted ideal ker eps2 matches ext(eta)(I)
    Mat ker = nullspace(eps2, tol);
    const Mat& I = p.ideal.components[pos].basis;
    bool match = mat_rank(ker, tol) == I.cols();
    Mat kb = orth_basis(ker, tol);
    for (int c = 0; c < I.cols() && match; ++c) match = in_span(kb, ext_eta * I.col(c), 1e-7);
    ideal_match &= match;
  }
  rep.add("mediating_equals_projection", worst_q <= exact_tol,
          "max entry defect " + std::to_string(worst_q), exact_tol);
  rep.add("extracted_ideal_matches", ideal_match);
  return rep;
}

}  // namespace bqft
