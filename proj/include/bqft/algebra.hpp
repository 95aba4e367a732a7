#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "bqft/geometry.hpp"  // Error

namespace bqft {

using Cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Default tolerance for rank and null-space decisions.
inline constexpr double kTolLin = 1e-9;

int mat_rank(const Mat& m, double tol = kTolLin);
/// Orthonormal basis of the column span.
Mat orth_basis(const Mat& cols, double tol = kTolLin);
bool in_span(const Mat& basis, const Vec& v, double tol = kTolLin);
/// Coordinates of v in the (full-rank) column basis; error if outside span.
Vec solve_in_span(const Mat& basis, const Vec& v, double tol = kTolLin);
Mat nullspace(const Mat& m, double tol = kTolLin);

/// Finite-dimensional associative unital *-algebra over C given by sparse
/// structure constants.  A filtration degree per basis element with a cap
/// makes truncated (partial) algebras representable: products are defined
/// exactly when the degree sum fits the cap.  Genuine algebras use degree 0
/// everywhere.
struct StarAlgebra {
  int n = 0;
  std::vector<int> degree;
  int degree_cap = std::numeric_limits<int>::max();
  std::vector<std::vector<std::pair<int, Cplx>>> prod;  // (i*n+j) -> sparse vector
  Vec unit;
  Mat star;  // antilinear involution: x* = star * conj(x)
  std::vector<std::string> names;

  bool product_defined(int i, int j) const {
    return degree[i] + degree[j] <= degree_cap;
  }
  const std::vector<std::pair<int, Cplx>>& basis_product(int i, int j) const;
  Vec mul(const Vec& x, const Vec& y, double tol = kTolLin) const;
  Vec star_of(const Vec& x) const { return star * x.conjugate(); }
  std::string name_of(int i) const;

  /// Checks unit laws, star laws and associativity on all basis triples whose
  /// intermediate products are defined; throws on failure.
  void validate(double tol = kTolLin) const;
};

/// C^n with pointwise product and identity star (the function algebra).
StarAlgebra function_algebra(int n);
/// Full matrix algebra M_k(C) in the elementary-matrix basis.
StarAlgebra matrix_algebra(int k);
/// Conjugates the structure data by an invertible change of basis.
StarAlgebra change_basis(const StarAlgebra& A, const Mat& g);
/// Change of basis making the unit the basis vector 0.
StarAlgebra unit_first(const StarAlgebra& A, Mat* transform = nullptr);

/// Tensor product with the two canonical inclusions a |-> a x 1, b |-> 1 x b.
struct TensorAlgebra {
  StarAlgebra algebra;
  Mat incl_left, incl_right;
};
TensorAlgebra tensor_algebra(const StarAlgebra& A, const StarAlgebra& B);

bool morphism_valid(const StarAlgebra& A, const StarAlgebra& B, const Mat& f,
                    double tol = kTolLin, std::string* why = nullptr);

struct TwoSidedStarIdeal {
  Mat basis;  // n x k, orthonormal columns
  int dim() const { return int(basis.cols()); }
};

/// Certifies closure under products with basis elements (where defined) and
/// under star; throws NotAnIdeal with a witness otherwise.
void certify_ideal(const StarAlgebra& A, const TwoSidedStarIdeal& I, double tol = kTolLin);

/// Smallest star-closed two-sided ideal containing the generators, within
/// the defined products of a possibly truncated algebra.
TwoSidedStarIdeal ideal_generated_by(const StarAlgebra& A, const std::vector<Vec>& gens,
                                     double tol = kTolLin);

TwoSidedStarIdeal morphism_kernel(const StarAlgebra& A, const StarAlgebra& B, const Mat& f,
                                  double tol = kTolLin);

struct Quotient {
  StarAlgebra algebra;
  Mat projection;  // algebra.n x A.n
  Mat section;     // A.n x algebra.n, linear right inverse of projection
};

/// Quotient by a certified ideal; the zero algebra (n = 0) is produced when
/// the unit falls into the ideal.
Quotient quotient_by_ideal(const StarAlgebra& A, const TwoSidedStarIdeal& I,
                           double tol = kTolLin);

/// Finite symplectic space of labelled generators with antisymmetric form.
struct SymplecticSpace {
  std::vector<std::string> labels;
  Eigen::MatrixXd tau;

  int dim() const { return int(labels.size()); }
  void validate(double tol = kTolLin) const;
};

/// Element of a CCR polynomial algebra in the sorted-monomial basis.
struct CCRPolyAlgebra {
  SymplecticSpace space;
  int degree_cap = 4;
  std::vector<std::vector<int>> monomials;  // sorted, graded-lex, index 0 = 1
  StarAlgebra algebra;                      // materialized truncation
};

CCRPolyAlgebra ccr_poly_algebra(const SymplecticSpace& V, int degree_cap);

/// Normal form of an arbitrary generator word: sorted monomials obtained by
/// commuting letters with the i*tau correction.  Throws DegreeOverflow when
/// the word exceeds the cap.
Vec ccr_normal_form(const CCRPolyAlgebra& A, const std::vector<int>& word);

}  // namespace bqft
