#pragma once

#include "bqft/presented.hpp"
#include "bqft/theory.hpp"

namespace bqft {

/// One leaf of a decorated tree: an interior region together with an element
/// of its algebra (coordinates in the theory's basis, no unit component
/// after expansion).
struct TreeLeaf {
  int region = -1;  // catalog base index
  Vec element;
};

/// Formal product of pushforwards of interior observables into `target`.
struct TreeTerm {
  int target = -1;  // catalog base index
  std::vector<TreeLeaf> leaves;
};

using TreeSum = std::vector<std::pair<Cplx, TreeTerm>>;

/// The extension algebra at one stable object: the free product of the
/// interior algebras below it, presented by the factorization relations and
/// materialized at the truncation level.
struct ExtAlgebra {
  int target = -1;
  std::vector<int> letter_region;
  std::vector<int> letter_basis;                  // basis index >= 1
  std::map<std::pair<int, int>, int> letter_of;   // (region, basis) -> letter
  std::vector<int> interior_below;                // catalog base indices
  PresentedAlgebra pres;
};

struct ExtOptions {
  int max_len = 3;  // truncation: total filtration degree of a tree
};

struct ExtendedTheory {
  Theory theory;  // on all stable objects
  std::vector<ExtAlgebra> data;
};

/// Universal extension of a theory on the interior stable objects to all
/// stable objects, computed as the quotient of formal leaf words by the
/// relations that merge blocks factoring through common interior regions.
/// Requires every object algebra of A to carry its unit as basis vector 0.
ExtendedTheory ext_theory(const Theory& A, const ExtOptions& opts = {});

/// Restriction: precomposition with the interior embedding.
Theory res_theory(const Theory& B);

/// eta_A at an interior object: a |-> [id, a]; constructed invertible.
Mat unit_component(const Theory& A, const ExtendedTheory& E, int interior_base);
/// epsilon_B at a stable object: [i, b] |-> B(i)(b).
Mat counit_component(const Theory& B, const ExtendedTheory& E_of_resB, int pos);

/// Rewriting normal form on tree sums: merge the leftmost longest block that
/// factors through a catalog interior region (smallest such region), push
/// leaves to canonical maximal regions, and sort causally disjoint adjacent
/// leaves.  Confluence is not assumed; span dimensions are validated against
/// the materialized quotient.
TreeSum normal_form(const Theory& A, const ExtAlgebra& E, const TreeSum& t);

/// Word-space vector of a tree sum (multilinear leaf expansion).
Vec tree_sum_word_vec(const Theory& A, const ExtAlgebra& E, const TreeSum& t);
/// Dimension of the span of rewriter normal forms of all basis words.
int normal_form_span_dim(const Theory& A, const ExtAlgebra& E);

TreeSum tree_of_word(const ExtAlgebra& E, int word_idx);

/// Brute-force materialized quotient at one object (the oracle for the
/// extension): dimension and algebra are those of E.pres.
StarAlgebra brute_force_quotient(const ExtAlgebra& E);

struct ObjectCharacterization {
  int pos = -1;
  bool additive = false;
  bool additivity_conclusive = true;
  bool lambda_iso = false;
};

struct Characterization {
  ExtendedTheory ext;          // ext res B
  IdealFunctor counit_kernel;  // ker eps_B, an ideal of ext res B
  QuotientTheory quotient;     // ext res B / ker eps_B
  std::vector<Mat> counits;
  std::vector<Mat> lambdas;
  std::vector<ObjectCharacterization> rows;
  Report report;
};

/// Computes ker eps_B, the quotient, the comparison maps lambda, and checks
/// that lambda is an isomorphism at V exactly when B is additive at V.
Characterization characterize(const Theory& B, const ExtOptions& opts = {});

struct IQFTPair {
  Theory interior;      // A on the interior stable objects
  ExtendedTheory ext;   // ext A
  IdealFunctor ideal;   // ideal of ext A, trivial on the interior
};

/// Q(A, I) = ext A / I; error IdealNotTrivialOnInterior.
QuotientTheory functor_Q(const IQFTPair& p, double tol = kTolLin);
/// S(B) = (res B, ker eps_B); error NotAdditive.
IQFTPair functor_S(const Theory& B, const ExtOptions& opts = {}, double tol = kTolLin);

/// Verifies QS(B) ~ B via lambda and SQ(A,I) ~ (A,I) via ext(eta_A), with
/// the mediating map equal to the canonical projection (matrix equality at
/// the truncation level).
Report roundtrip_check(const IQFTPair& p, const ExtOptions& opts = {}, double tol = kTolLin,
                       double exact_tol = 1e-12);

}  // namespace bqft
