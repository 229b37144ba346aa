#pragma once

#include "fockarc/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fockarc {

/// 50 significant decimal digits. Used where double cannot hold the required
/// absolute accuracy (quadrature of large moments, alternating series).
using HighFloat = boost::multiprecision::cpp_bin_float_50;

inline HighFloat to_high(const Rational& r) {
  return HighFloat(r.get_num().get_str()) / HighFloat(r.get_den().get_str());
}

}  // namespace fockarc
