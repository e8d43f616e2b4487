#pragma once

// Optional: a fixed high-precision binary float as a RealScalar, used to
// produce reference tables where double-word forward substitution itself
// loses digits (large p or points far from the square). Requires Boost.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "potrec/xprec.hpp"

namespace potrec {

/// About 300 significand bits, enough headroom for p = 120 at |z| <= 4.
using RefFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<90>,
                                               boost::multiprecision::et_off>;

template <>
struct real_traits<RefFloat> {
    static RefFloat pi() { return boost::math::constants::pi<RefFloat>(); }
    static RefFloat epsilon() { return std::numeric_limits<RefFloat>::epsilon(); }
    static double to_double(const RefFloat& x) { return x.convert_to<double>(); }
    static RefFloat from_double(double x) { return RefFloat(x); }
    static bool signbit(const RefFloat& x) { return boost::multiprecision::signbit(x) != 0; }
    static bool isnan(const RefFloat& x) { return boost::multiprecision::isnan(x); }
    static constexpr const char* name() noexcept { return "reference"; }
};

} // namespace potrec
