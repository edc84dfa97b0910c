#pragma once

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace kolmonet {

/// 50 significant decimal digits, exponent range far beyond double.
using Wide = boost::multiprecision::cpp_bin_float_50;

/// Scientific rendering with `digits` significant digits.
std::string to_string(const Wide& x, int digits = 20);

}  // namespace kolmonet
