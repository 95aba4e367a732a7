#include "bqft/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bqft {

int mat_rank(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

Mat orth_basis(const Mat& cols, double tol) {
  if (cols.cols() == 0) return Mat(cols.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

bool in_span(const Mat& basis, const Vec& v, double tol) {
  if (v.norm() <= tol) return true;
  if (basis.cols() == 0) return false;
  Vec res = v - basis * (basis.adjoint() * v);
  return res.norm() <= tol * std::max(1.0, v.norm());
}

Vec solve_in_span(const Mat& basis, const Vec& v, double tol) {
  Vec c = basis.colPivHouseholderQr().solve(v);
  if ((basis * c - v).norm() > tol * std::max(1.0, v.norm()))
    throw Error("NotInSpan", "vector outside subspace");
  return c;
}

Mat nullspace(const Mat& m, double tol) {
  if (m.cols() == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

const std::vector<std::pair<int, Cplx>>& StarAlgebra::basis_product(int i, int j) const {
  if (!product_defined(i, j))
    throw Error("DegreeOverflow", "basis product " + std::to_string(i) + "*" + std::to_string(j) +
                                      " exceeds the degree cap");
  return prod[size_t(i) * n + j];
}

Vec StarAlgebra::mul(const Vec& x, const Vec& y, double tol) const {
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(x(i)) <= tol) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(y(j)) <= tol) continue;
      for (const auto& [k, c] : basis_product(i, j)) out(k) += x(i) * y(j) * c;
    }
  }
  return out;
}

std::string StarAlgebra::name_of(int i) const {
  if (i < int(names.size()) && !names[i].empty()) return names[i];
  return "e" + std::to_string(i);
}

namespace {

Vec sparse_to_vec(const std::vector<std::pair<int, Cplx>>& s, int n) {
  Vec v = Vec::Zero(n);
  for (const auto& [k, c] : s) v(k) += c;
  return v;
}

}  // namespace

void StarAlgebra::validate(double tol) const {
  if (n == 0) return;  // one-point algebra
  Vec u = unit;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Unit(n, i);
    if ((mul(u, e) - e).norm() > tol || (mul(e, u) - e).norm() > tol)
      throw Error("NotUnital", "unit law fails at " + name_of(i));
    Vec s = star_of(e);
    if ((star_of(s) - e).norm() > tol)
      throw Error("StarNotInvolutive", "star^2 != id at " + name_of(i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!product_defined(i, j)) continue;
      Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j);
      Vec pij = sparse_to_vec(basis_product(i, j), n);
      // star anti-multiplicativity
      if ((star_of(pij) - mul(star_of(ej), star_of(ei))).norm() > tol)
        throw Error("StarNotAntimultiplicative", name_of(i) + "*" + name_of(j));
      for (int k = 0; k < n; ++k) {
        if (degree[i] + degree[j] + degree[k] > degree_cap) continue;
        Vec lhs = mul(pij, Vec::Unit(n, k));
        Vec rhs = mul(ei, mul(ej, Vec::Unit(n, k)));
        if ((lhs - rhs).norm() > tol * 10)
          throw Error("NotAssociative",
                      name_of(i) + "," + name_of(j) + "," + name_of(k));
      }
    }
}

StarAlgebra function_algebra(int n) {
  StarAlgebra A;
  A.n = n;
  A.degree.assign(n, 0);
  A.prod.assign(size_t(n) * n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == j) A.prod[size_t(i) * n + j] = {{i, 1.0}};
  A.unit = Vec::Ones(n);
  A.star = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) A.names.push_back("p" + std::to_string(i));
  return A;
}

StarAlgebra matrix_algebra(int k) {
  StarAlgebra A;
  A.n = k * k;
  A.degree.assign(A.n, 0);
  A.prod.assign(size_t(A.n) * A.n, {});
  auto idx = [k](int r, int c) { return r * k + c; };
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      for (int r2 = 0; r2 < k; ++r2)
        for (int c2 = 0; c2 < k; ++c2)
          if (c == r2) A.prod[size_t(idx(r, c)) * A.n + idx(r2, c2)] = {{idx(r, c2), 1.0}};
  A.unit = Vec::Zero(A.n);
  for (int r = 0; r < k; ++r) A.unit(idx(r, r)) = 1.0;
  A.star = Mat::Zero(A.n, A.n);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) A.star(idx(c, r), idx(r, c)) = 1.0;  // conjugate transpose
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      A.names.push_back("E" + std::to_string(r) + std::to_string(c));
  return A;
}

StarAlgebra change_basis(const StarAlgebra& A, const Mat& g) {
  StarAlgebra B = A;
  Mat gi = g.inverse();
  B.prod.assign(size_t(A.n) * A.n, {});
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      if (!A.product_defined(i, j)) continue;
      Vec p = A.mul(g.col(i), g.col(j));
      Vec q = gi * p;
      std::vector<std::pair<int, Cplx>> s;
      for (int k = 0; k < A.n; ++k)
        if (std::abs(q(k)) > 1e-14) s.push_back({k, q(k)});
      B.prod[size_t(i) * A.n + j] = s;
    }
  B.unit = gi * A.unit;
  B.star = gi * A.star * g.conjugate();
  return B;
}

bool morphism_valid(const StarAlgebra& A, const StarAlgebra& B, const Mat& f, double tol,
                    std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (f.rows() != B.n || f.cols() != A.n) return fail("shape mismatch");
  if (A.n == 0) return true;
  if (B.n == 0) return true;  // the one-point algebra absorbs everything
  if ((f * A.unit - B.unit).norm() > tol) return fail("not unital");
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      if (!A.product_defined(i, j)) continue;
      Vec p = sparse_to_vec(A.prod[size_t(i) * A.n + j], A.n);
      Vec lhs = f * p;
      Vec rhs = B.mul(f.col(i), f.col(j));
      if ((lhs - rhs).norm() > tol * 10)
        return fail("not multiplicative at " + A.name_of(i) + "*" + A.name_of(j));
    }
  if ((f * A.star - B.star * f.conjugate()).norm() > tol) return fail("not star-preserving");
  return true;
}

void certify_ideal(const StarAlgebra& A, const TwoSidedStarIdeal& I, double tol) {
  for (int c = 0; c < I.basis.cols(); ++c) {
    Vec x = I.basis.col(c);
    if (!in_span(I.basis, A.star_of(x), tol))
      throw Error("NotAnIdeal", "star escapes the subspace");
    for (int i = 0; i < A.n; ++i) {
      Vec e = Vec::Unit(A.n, i);
      int dx = 0;
      for (int k = 0; k < A.n; ++k)
        if (std::abs(x(k)) > tol) dx = std::max(dx, A.degree[k]);
      if (A.degree[i] + dx > A.degree_cap) continue;
      if (!in_span(I.basis, A.mul(e, x), tol))
        throw Error("NotAnIdeal", "left product by " + A.name_of(i) + " escapes");
      if (!in_span(I.basis, A.mul(x, e), tol))
        throw Error("NotAnIdeal", "right product by " + A.name_of(i) + " escapes");
    }
  }
}

TwoSidedStarIdeal ideal_generated_by(const StarAlgebra& A, const std::vector<Vec>& gens,
                                     double tol) {
  Mat span(A.n, gens.size());
  for (size_t k = 0; k < gens.size(); ++k) span.col(k) = gens[k];
  Mat basis = orth_basis(span, tol);
  while (true) {
    std::vector<Vec> next;
    for (int c = 0; c < basis.cols(); ++c) {
      Vec x = basis.col(c);
      next.push_back(A.star_of(x));
      int dx = 0;
      for (int k = 0; k < A.n; ++k)
        if (std::abs(x(k)) > tol) dx = std::max(dx, A.degree[k]);
      for (int i = 0; i < A.n; ++i) {
        if (A.degree[i] + dx > A.degree_cap) continue;
        Vec e = Vec::Unit(A.n, i);
        next.push_back(A.mul(e, x));
        next.push_back(A.mul(x, e));
      }
    }
    Mat bigger(A.n, basis.cols() + next.size());
    bigger.leftCols(basis.cols()) = basis;
    for (size_t k = 0; k < next.size(); ++k) bigger.col(basis.cols() + k) = next[k];
    Mat nb = orth_basis(bigger, tol);
    if (nb.cols() == basis.cols()) return TwoSidedStarIdeal{nb};
    basis = nb;
  }
}

TwoSidedStarIdeal morphism_kernel(const StarAlgebra& A, const StarAlgebra& B, const Mat& f,
                                  double tol) {
  TwoSidedStarIdeal I{A.n == 0 ? Mat(0, 0) : orth_basis(nullspace(f, tol), tol)};
  if (I.basis.rows() == 0) I.basis = Mat(A.n, 0);
  certify_ideal(A, I, tol);
  return I;
}

Quotient quotient_by_ideal(const StarAlgebra& A, const TwoSidedStarIdeal& I, double tol) {
  certify_ideal(A, I, tol);
  int k = I.dim();
  if (in_span(I.basis, A.unit, tol)) {
    // unit collapse: the one-point algebra
    Quotient Q;
    Q.algebra.n = 0;
    Q.algebra.degree_cap = A.degree_cap;
    Q.algebra.unit = Vec::Zero(0);
    Q.algebra.star = Mat::Zero(0, 0);
    Q.projection = Mat::Zero(0, A.n);
    Q.section = Mat::Zero(A.n, 0);
    return Q;
  }
  // complement coordinates = non-pivot rows of the ideal basis; greedy
  // elimination preferring rows != 0 keeps the unit as a quotient basis
  // vector whenever possible
  std::vector<int> pivots;
  {
    Mat b = I.basis;
    std::vector<int> order;
    for (int r = 1; r < A.n; ++r) order.push_back(r);
    order.push_back(0);
    std::vector<bool> used_col(b.cols(), false);
    for (int r : order) {
      int best = -1;
      double mag = tol;
      for (int c = 0; c < b.cols(); ++c) {
        if (used_col[c]) continue;
        if (std::abs(b(r, c)) > mag) {
          mag = std::abs(b(r, c));
          best = c;
        }
      }
      if (best < 0) continue;
      used_col[best] = true;
      pivots.push_back(r);
      for (int c = 0; c < b.cols(); ++c) {
        if (c == best) continue;
        Cplx f = b(r, c) / b(r, best);
        if (std::abs(f) > 0) b.col(c) -= f * b.col(best);
      }
    }
  }
  std::sort(pivots.begin(), pivots.end());
  std::vector<int> free;
  for (int i = 0; i < A.n; ++i)
    if (!std::binary_search(pivots.begin(), pivots.end(), i)) free.push_back(i);
  int m = int(free.size());
  if (k + m != A.n) throw Error("NotAnIdeal", "rank bookkeeping failed");

  Mat T(A.n, A.n);  // [ ideal basis | free unit vectors ]
  T.leftCols(k) = I.basis;
  for (int c = 0; c < m; ++c) T.col(k + c) = Vec::Unit(A.n, free[c]);
  Mat Tinv = T.inverse();

  Quotient Q;
  Q.projection = Tinv.bottomRows(m);
  Q.section = T.rightCols(m);
  StarAlgebra& B = Q.algebra;
  B.n = m;
  B.degree.resize(m);
  for (int c = 0; c < m; ++c) B.degree[c] = A.degree[free[c]];
  B.degree_cap = A.degree_cap;
  B.prod.assign(size_t(m) * m, {});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (!B.product_defined(i, j)) continue;
      Vec p = Q.projection * A.mul(Q.section.col(i), Q.section.col(j));
      std::vector<std::pair<int, Cplx>> s;
      for (int t = 0; t < m; ++t)
        if (std::abs(p(t)) > 1e-14) s.push_back({t, p(t)});
      B.prod[size_t(i) * m + j] = s;
    }
  B.unit = Q.projection * A.unit;
  B.star = Q.projection * A.star * Q.section.conjugate();
  for (int c = 0; c < m; ++c) B.names.push_back("[" + A.name_of(free[c]) + "]");
  B.validate(tol * 100);
  return Q;
}

void SymplecticSpace::validate(double tol) const {
  if (tau.rows() != dim() || tau.cols() != dim())
    throw Error("BadSymplecticSpace", "tau shape mismatch");
  for (int i = 0; i < dim(); ++i) {
    if (tau(i, i) != 0.0) throw Error("BadSymplecticSpace", "tau not zero on the diagonal");
    for (int j = 0; j < dim(); ++j)
      if (std::abs(tau(i, j) + tau(j, i)) > tol)
        throw Error("BadSymplecticSpace", "tau not antisymmetric at " + labels[i] + "," + labels[j]);
  }
}

namespace {

using Mono = std::vector<int>;

void enumerate_monomials(int gens, int cap, Mono& cur, int lo, std::vector<Mono>& out) {
  out.push_back(cur);
  if (int(cur.size()) == cap) return;
  for (int g = lo; g < gens; ++g) {
    cur.push_back(g);
    enumerate_monomials(gens, cap, cur, g, out);
    cur.pop_back();
  }
}

// m * phi_g as a combination of sorted monomials:
//   (h l) g = (h g) l + i tau(l, g) h      whenever l > g
// the recursion result (h g) only contains letters <= l, so appending l keeps
// words sorted.
std::map<Mono, Cplx> mono_times_gen(const SymplecticSpace& V, const Mono& m, int g) {
  if (m.empty() || m.back() <= g) {
    Mono r = m;
    r.push_back(g);
    return {{r, 1.0}};
  }
  Mono head(m.begin(), m.end() - 1);
  int last = m.back();
  std::map<Mono, Cplx> out;
  for (auto& [w, c] : mono_times_gen(V, head, g)) {
    Mono r = w;
    r.push_back(last);
    out[r] += c;
  }
  Cplx comm = Cplx(0, 1) * V.tau(last, g);
  if (comm != Cplx(0, 0)) out[head] += comm;
  return out;
}

}  // namespace

CCRPolyAlgebra ccr_poly_algebra(const SymplecticSpace& V, int degree_cap) {
  V.validate();
  CCRPolyAlgebra A;
  A.space = V;
  A.degree_cap = degree_cap;
  Mono cur;
  enumerate_monomials(V.dim(), degree_cap, cur, 0, A.monomials);
  std::sort(A.monomials.begin(), A.monomials.end(), [](const Mono& a, const Mono& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::map<Mono, int> index;
  for (size_t i = 0; i < A.monomials.size(); ++i) index[A.monomials[i]] = int(i);

  int n = int(A.monomials.size());
  StarAlgebra& S = A.algebra;
  S.n = n;
  S.degree.resize(n);
  for (int i = 0; i < n; ++i) S.degree[i] = int(A.monomials[i].size());
  S.degree_cap = degree_cap;
  S.prod.assign(size_t(n) * n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (S.degree[i] + S.degree[j] > degree_cap) continue;
      std::map<Mono, Cplx> acc{{A.monomials[i], 1.0}};
      for (int g : A.monomials[j]) {
        std::map<Mono, Cplx> next;
        for (const auto& [m, c] : acc)
          for (const auto& [m2, c2] : mono_times_gen(V, m, g)) next[m2] += c * c2;
        acc = std::move(next);
      }
      std::vector<std::pair<int, Cplx>> s;
      for (const auto& [m, c] : acc)
        if (std::abs(c) > 1e-15) s.push_back({index.at(m), c});
      S.prod[size_t(i) * n + j] = s;
    }
  S.unit = Vec::Unit(n, 0);
  S.star = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    // star reverses the word; generators are hermitian
    Mono rev(A.monomials[i].rbegin(), A.monomials[i].rend());
    std::map<Mono, Cplx> acc{{Mono{}, 1.0}};
    for (int g : rev) {
      std::map<Mono, Cplx> next;
      for (const auto& [m, c] : acc)
        for (const auto& [m2, c2] : mono_times_gen(V, m, g)) next[m2] += c * c2;
      acc = std::move(next);
    }
    for (const auto& [m, c] : acc)
      if (std::abs(c) > 1e-15) S.star(index.at(m), i) = c;
  }
  for (int i = 0; i < n; ++i) {
    std::string nm = "1";
    if (!A.monomials[i].empty()) {
      nm.clear();
      for (int g : A.monomials[i]) nm += "F" + V.labels[g];
    }
    S.names.push_back(nm);
  }
  S.validate();
  return A;
}

Vec ccr_normal_form(const CCRPolyAlgebra& A, const std::vector<int>& word) {
  if (int(word.size()) > A.degree_cap)
    throw Error("DegreeOverflow", "word of length " + std::to_string(word.size()) +
                                      " exceeds cap " + std::to_string(A.degree_cap));
  std::map<Mono, Cplx> acc{{Mono{}, 1.0}};
  for (int g : word) {
    if (g < 0 || g >= A.space.dim()) throw Error("BadArgument", "generator out of range");
    std::map<Mono, Cplx> next;
    for (const auto& [m, c] : acc)
      for (const auto& [m2, c2] : mono_times_gen(A.space, m, g)) next[m2] += c * c2;
    acc = std::move(next);
  }
  Vec out = Vec::Zero(A.algebra.n);
  for (const auto& [m, c] : acc) {
    auto it = std::lower_bound(A.monomials.begin(), A.monomials.end(), m,
                               [](const Mono& a, const Mono& b) {
                                 if (a.size() != b.size()) return a.size() < b.size();
                                 return a < b;
                               });
    out(it - A.monomials.begin()) += c;
  }
  return out;
}

}  // namespace bqft
