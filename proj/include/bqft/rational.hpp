#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace bqft {

/// Exact rational scalar used for all region bounds and lattice bookkeeping.
/// Floating point appears only in quadrature (klein_gordon).
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return static_cast<double>(r); }

/// Parses "3", "-3/4", "0.25"-free strings (integers and fractions only).
Rat parse_rat(const std::string& s);

std::string rat_to_string(const Rat& r);

/// A coordinate bound along one null axis: finite rational or +-infinity.
struct Bound {
  enum Kind { NegInf, Finite, PosInf };
  Kind kind = Finite;
  Rat value = 0;

  static Bound neg_inf() { return Bound{NegInf, 0}; }
  static Bound pos_inf() { return Bound{PosInf, 0}; }
  static Bound finite(Rat v) { return Bound{Finite, std::move(v)}; }

  bool is_finite() const { return kind == Finite; }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind == b.kind && (a.kind != Finite || a.value == b.value);
  }
  friend bool operator<(const Bound& a, const Bound& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.kind == Finite && a.value < b.value;
  }
  friend bool operator<=(const Bound& a, const Bound& b) { return a < b || a == b; }
};

std::string bound_to_string(const Bound& b);

}  // namespace bqft
