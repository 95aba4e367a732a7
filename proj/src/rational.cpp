#include "bqft/rational.hpp"

#include <sstream>

namespace bqft {

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational literal: '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string bound_to_string(const Bound& b) {
  switch (b.kind) {
    case Bound::NegInf: return "-inf";
    case Bound::PosInf: return "inf";
    default: return rat_to_string(b.value);
  }
}

}  // namespace bqft
