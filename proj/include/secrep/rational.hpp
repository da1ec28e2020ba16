#pragma once

#include <boost/rational.hpp>
#include <cstdint>

namespace secrep {

/// Exact rational arithmetic for bandwidth bounds; all decisions stay integral.
using Rational = boost::rational<std::int64_t>;

}  // namespace secrep
