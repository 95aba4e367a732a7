#include "bqft/presented.hpp"

#include <algorithm>

namespace bqft {

namespace {

bool word_less(const std::vector<int>& a, const std::vector<int>& b,
               const std::vector<Letter>& letters) {
  int da = 0, db = 0;
  for (int l : a) da += letters[l].degree;
  for (int l : b) db += letters[l].degree;
  if (da != db) return da < db;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

WordAlgebra make_words(std::vector<Letter> letters, int degree_cap) {
  for (const auto& l : letters)
    if (l.degree < 1) throw Error("BadLetter", "letter degree must be >= 1: " + l.name);
  WordAlgebra W;
  W.letters = std::move(letters);
  W.degree_cap = degree_cap;
  std::vector<std::vector<int>> frontier{{}};
  W.words.push_back({});
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier) {
      int d = 0;
      for (int l : w) d += W.letters[l].degree;
      for (int l = 0; l < int(W.letters.size()); ++l) {
        if (d + W.letters[l].degree > degree_cap) continue;
        auto w2 = w;
        w2.push_back(l);
        W.words.push_back(w2);
        next.push_back(std::move(w2));
      }
    }
    frontier = std::move(next);
  }
  std::sort(W.words.begin(), W.words.end(),
            [&](const auto& a, const auto& b) { return word_less(a, b, W.letters); });
  for (size_t i = 0; i < W.words.size(); ++i) W.index[W.words[i]] = int(i);
  return W;
}

int WordAlgebra::word_of(const std::vector<int>& w) const {
  auto it = index.find(w);
  return it == index.end() ? -1 : it->second;
}

int WordAlgebra::word_degree(int idx) const {
  int d = 0;
  for (int l : words[idx]) d += letters[l].degree;
  return d;
}

void WordAlgebra::reduce(Vec& v) const {
  for (int i = int(words.size()) - 1; i >= 0; --i) {
    if (std::abs(v(i)) < 1e-14) continue;
    auto it = rewrite.find(i);
    if (it == rewrite.end()) continue;
    Cplx c = v(i);
    v(i) = 0;
    for (const auto& [j, t] : it->second) v(j) += c * t;
  }
}

void WordAlgebra::add_relation(const Vec& row) {
  Vec v = row;
  reduce(v);
  int pivot = -1;
  for (int i = int(words.size()) - 1; i >= 0; --i)
    if (std::abs(v(i)) > 1e-10) {
      pivot = i;
      break;
    }
  if (pivot < 0) return;  // already implied
  if (pivot == 0) throw Error("InconsistentPresentation", "relation forces 1 = 0");
  Cplx c = v(pivot);
  std::map<int, Cplx> tail;
  for (int i = 0; i < pivot; ++i)
    if (std::abs(v(i)) > 1e-14) tail[i] = -v(i) / c;
  rewrite[pivot] = std::move(tail);
}

Vec WordAlgebra::dense(const std::map<int, Cplx>& sparse) const {
  Vec v = Vec::Zero(words.size());
  for (const auto& [i, c] : sparse) v(i) += c;
  return v;
}

Vec PresentedAlgebra::coords(Vec word_vec) const {
  W.reduce(word_vec);
  Vec q = Vec::Zero(alg.n);
  for (int i = 0; i < word_vec.size(); ++i) {
    if (std::abs(word_vec(i)) < 1e-14) continue;
    if (coord_of_word[i] < 0)
      throw Error("ReductionFailed", "pivot word survived reduction");
    q(coord_of_word[i]) += word_vec(i);
  }
  return q;
}

Vec PresentedAlgebra::word_vec(const Vec& q) const {
  Vec v = Vec::Zero(W.words.size());
  for (int k = 0; k < q.size(); ++k) v(q_words[k]) += q(k);
  return v;
}

PresentedAlgebra materialize(WordAlgebra W) {
  PresentedAlgebra P;
  P.coord_of_word.assign(W.words.size(), -1);
  for (size_t i = 0; i < W.words.size(); ++i) {
    if (W.rewrite.count(int(i))) continue;
    P.coord_of_word[i] = int(P.q_words.size());
    P.q_words.push_back(int(i));
  }
  int n = int(P.q_words.size());
  StarAlgebra& A = P.alg;
  A.n = n;
  A.degree.resize(n);
  for (int k = 0; k < n; ++k) A.degree[k] = W.word_degree(P.q_words[k]);
  A.degree_cap = W.degree_cap;
  A.prod.assign(size_t(n) * n, {});
  P.W = std::move(W);

  auto word_nf_coords = [&](const std::vector<int>& w) {
    Vec v = Vec::Zero(P.W.words.size());
    int idx = P.W.word_of(w);
    if (idx < 0) throw Error("DegreeOverflow", "word outside the truncation");
    v(idx) = 1.0;
    return P.coords(std::move(v));
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (A.degree[i] + A.degree[j] > A.degree_cap) continue;
      std::vector<int> w = P.W.words[P.q_words[i]];
      const auto& w2 = P.W.words[P.q_words[j]];
      w.insert(w.end(), w2.begin(), w2.end());
      Vec q = word_nf_coords(w);
      std::vector<std::pair<int, Cplx>> s;
      for (int k = 0; k < n; ++k)
        if (std::abs(q(k)) > 1e-14) s.push_back({k, q(k)});
      A.prod[size_t(i) * n + j] = std::move(s);
    }
  A.unit = Vec::Zero(n);
  A.unit(P.coord_of_word[0] >= 0 ? P.coord_of_word[0] : 0) = 1.0;

  // star: reverse the word, expanding each letter's adjoint
  A.star = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const auto& w = P.W.words[P.q_words[k]];
    // terms: map word-vector built progressively
    std::map<std::vector<int>, Cplx> acc{{{}, 1.0}};
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      int l = *it;
      std::map<std::vector<int>, Cplx> next;
      const Letter& L = P.W.letters[l];
      for (const auto& [word, c] : acc) {
        if (L.self_adjoint) {
          auto nw = word;
          nw.push_back(l);
          next[nw] += c;
        } else {
          if (std::abs(L.star_unit) > 1e-15) next[word] += c * L.star_unit;
          for (const auto& [l2, c2] : L.star) {
            auto nw = word;
            nw.push_back(l2);
            next[nw] += c * c2;
          }
        }
      }
      acc = std::move(next);
    }
    Vec v = Vec::Zero(P.W.words.size());
    for (const auto& [word, c] : acc) {
      int idx = P.W.word_of(word);
      if (idx < 0) throw Error("DegreeOverflow", "star left the truncation");
      v(idx) += c;
    }
    A.star.col(k) = P.coords(std::move(v));
  }
  for (int k = 0; k < n; ++k) {
    std::string nm = "1";
    if (!P.W.words[P.q_words[k]].empty()) {
      nm.clear();
      for (int l : P.W.words[P.q_words[k]]) nm += P.W.letters[l].name + ".";
      nm.pop_back();
    }
    A.names.push_back(nm);
  }
  return P;
}

Mat induced_word_map(const PresentedAlgebra& src, const PresentedAlgebra& dst,
                     const std::vector<Vec>& letter_images_word_space) {
  Mat out(dst.dim(), src.dim());
  for (int k = 0; k < src.dim(); ++k) {
    const auto& w = src.W.words[src.q_words[k]];
    // progressive concatenation in the target word space
    Vec acc = Vec::Zero(dst.W.words.size());
    acc(0) = 1.0;
    for (int l : w) {
      const Vec& img = letter_images_word_space[l];
      Vec next = Vec::Zero(dst.W.words.size());
      for (int i = 0; i < acc.size(); ++i) {
        if (std::abs(acc(i)) < 1e-14) continue;
        for (int j = 0; j < img.size(); ++j) {
          if (std::abs(img(j)) < 1e-14) continue;
          std::vector<int> cat = dst.W.words[i];
          const auto& wj = dst.W.words[j];
          cat.insert(cat.end(), wj.begin(), wj.end());
          int idx = dst.W.word_of(cat);
          if (idx < 0) throw Error("DegreeOverflow", "letter image concatenation overflows");
          next(idx) += acc(i) * img(j);
        }
      }
      acc = std::move(next);
    }
    out.col(k) = dst.coords(std::move(acc));
  }
  return out;
}

Mat evaluate_words(const PresentedAlgebra& src, const StarAlgebra& A,
                   const std::vector<Vec>& letter_images) {
  Mat out(A.n, src.dim());
  for (int k = 0; k < src.dim(); ++k) {
    const auto& w = src.W.words[src.q_words[k]];
    Vec acc = A.unit;
    for (int l : w) acc = A.mul(acc, letter_images[l]);
    out.col(k) = acc;
  }
  return out;
}

}  // namespace bqft
