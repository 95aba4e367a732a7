#pragma once

#include <map>
#include <vector>

#include "bqft/algebra.hpp"

namespace bqft {

/// Generator of a presented algebra.  `star` expands the adjoint of the
/// letter over letters plus a scalar (unit) part; an empty expansion with
/// star_unit 0 means the letter is self-adjoint.
struct Letter {
  std::string name;
  int degree = 1;  // must be >= 1
  std::map<int, Cplx> star;
  Cplx star_unit = 0.0;
  bool self_adjoint = true;
};

/// Free words over the letters up to a total degree cap, with a linear
/// rewrite system (echelonized relation rows).  Rewrite tails only contain
/// strictly smaller words in the graded-lex order, so one descending
/// substitution pass computes normal forms.
struct WordAlgebra {
  std::vector<Letter> letters;
  int degree_cap = 3;
  std::vector<std::vector<int>> words;  // graded-lex, index 0 = empty word
  std::map<std::vector<int>, int> index;
  std::map<int, std::map<int, Cplx>> rewrite;

  int word_of(const std::vector<int>& w) const;
  int word_degree(int idx) const;
  /// In-place normal form of a dense coefficient vector over words.
  void reduce(Vec& v) const;
  /// Adds one relation row (must sum to zero in the quotient); rows already
  /// implied reduce to nothing.
  void add_relation(const Vec& row);
  Vec dense(const std::map<int, Cplx>& sparse) const;
};

WordAlgebra make_words(std::vector<Letter> letters, int degree_cap);

/// Materialized quotient of a word algebra by its relation rows.
struct PresentedAlgebra {
  WordAlgebra W;
  StarAlgebra alg;                // basis = non-pivot words
  std::vector<int> q_words;       // quotient coordinate -> word index
  std::vector<int> coord_of_word; // word index -> quotient coordinate or -1

  /// Quotient coordinates of a reduced word vector.
  Vec coords(Vec word_vec) const;
  /// Dense word vector of a quotient element (canonical representatives).
  Vec word_vec(const Vec& q) const;
  int dim() const { return alg.n; }
};

PresentedAlgebra materialize(WordAlgebra W);

/// Matrix of the algebra map induced by sending each letter to an element of
/// the target presented algebra (given in target word coordinates including
/// the unit slot).  Multiplication happens by word concatenation before
/// reduction; degree overflow throws.
Mat induced_word_map(const PresentedAlgebra& src, const PresentedAlgebra& dst,
                     const std::vector<Vec>& letter_images_word_space);

/// Matrix of the evaluation map into an ordinary algebra, sending letters to
/// given elements and words to the corresponding products.
Mat evaluate_words(const PresentedAlgebra& src, const StarAlgebra& A,
                   const std::vector<Vec>& letter_images);

}  // namespace bqft
