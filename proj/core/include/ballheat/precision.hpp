#pragma once

#include <boost/multiprecision/float128.hpp>

namespace ballheat {

/// IEEE binary128, used where the oscillating spectral series has to resolve
/// kernel values far below the double rounding floor.
using quad = boost::multiprecision::float128;

enum class Precision { binary64, binary128 };

}  // namespace ballheat
