#pragma once

// Complex numbers over a RealScalar with the logarithm branch made explicit.
//
// The sign bit of a zero component is significant: it records which side of
// a branch cut a point sits on, and every operation here propagates it.

#include <cmath>

#include "potrec/errors.hpp"
#include "potrec/xprec.hpp"

namespace potrec {

template <RealScalar T>
struct BranchComplex {
    T re{};
    T im{};

    constexpr BranchComplex() = default;
    constexpr BranchComplex(T r) : re(r), im(0.0) {} // NOLINT: real embedding
    constexpr BranchComplex(T r, T i) : re(r), im(i) {}

    friend BranchComplex operator-(const BranchComplex& a) { return {-a.re, -a.im}; }

    friend BranchComplex operator+(const BranchComplex& a, const BranchComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BranchComplex operator-(const BranchComplex& a, const BranchComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    // Mixed real operands leave the imaginary part (and its zero sign) untouched.
    friend BranchComplex operator+(const BranchComplex& a, const T& b) { return {a.re + b, a.im}; }
    friend BranchComplex operator+(const T& b, const BranchComplex& a) { return {b + a.re, a.im}; }
    friend BranchComplex operator-(const BranchComplex& a, const T& b) { return {a.re - b, a.im}; }
    friend BranchComplex operator-(const T& b, const BranchComplex& a) { return {b - a.re, -a.im}; }

    friend BranchComplex operator*(const BranchComplex& a, const BranchComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BranchComplex operator*(const BranchComplex& a, const T& s) { return {a.re * s, a.im * s}; }
    friend BranchComplex operator*(const T& s, const BranchComplex& a) { return {a.re * s, a.im * s}; }
    friend BranchComplex operator/(const BranchComplex& a, const T& s) { return {a.re / s, a.im / s}; }

    friend BranchComplex operator/(const BranchComplex& a, const BranchComplex& b) {
        // Smith's algorithm.
        using std::abs;
        if (abs(b.im) <= abs(b.re)) {
            const T r = b.im / b.re;
            const T d = b.re + b.im * r;
            return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
        }
        const T r = b.re / b.im;
        const T d = b.re * r + b.im;
        return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
    }

    BranchComplex& operator+=(const BranchComplex& b) { return *this = *this + b; }
    BranchComplex& operator-=(const BranchComplex& b) { return *this = *this - b; }
    BranchComplex& operator*=(const BranchComplex& b) { return *this = *this * b; }
    BranchComplex& operator*=(const T& s) { return *this = *this * s; }

    friend bool operator==(const BranchComplex& a, const BranchComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

template <RealScalar T>
BranchComplex<T> conj(const BranchComplex<T>& z) {
    return {z.re, -z.im};
}

/// i * z, exact.
template <RealScalar T>
BranchComplex<T> mul_i(const BranchComplex<T>& z) {
    return {-z.im, z.re};
}

/// -i * z = (im z) - i (re z), exact including the sign of zeros.
///
/// For z = +0 + iy this yields y - 0i, i.e. the point sits just below the
/// negative real axis when y < 0, which is the limit taken from re z > 0.
template <RealScalar T>
BranchComplex<T> rotate_minus_i(const BranchComplex<T>& z) {
    return {z.im, -z.re};
}

template <RealScalar T>
BranchComplex<T> convert_from_double(double re, double im) {
    return {real_traits<T>::from_double(re), real_traits<T>::from_double(im)};
}

/// |z| with scaling by a power of two so intermediate squares cannot overflow.
template <RealScalar T>
T abs(const BranchComplex<T>& z) {
    using std::abs;
    using std::ldexp;
    using std::sqrt;
    const T ax = abs(z.re);
    const T ay = abs(z.im);
    const T m = ax < ay ? ay : ax;
    const double mh = to_double(m);
    if (mh == 0.0 || !std::isfinite(mh)) return m;
    int e = 0;
    std::frexp(mh, &e);
    // Scale the operands, not a factor: 2^-e itself overflows for subnormals.
    const T u = ldexp(ax, -e);
    const T v = ldexp(ay, -e);
    return ldexp(sqrt(u * u + v * v), e);
}

/// Principal logarithm, imaginary part in (-pi, pi].
///
/// On the negative real axis the sign of the zero imaginary part picks the
/// side: +0 gives +i pi, -0 gives -i pi.
template <RealScalar T>
BranchComplex<T> clog(const BranchComplex<T>& z) {
    using std::atan2;
    using std::log;
    if (z.re == T(0.0) && z.im == T(0.0)) throw DomainError("clog: logarithm of zero");
    return {log(abs(z)), atan2(z.im, z.re)};
}

/// Logarithm taking the lower limit on the cut: log|z| - i pi when z is a
/// negative real (either zero sign), principal log elsewhere.
template <RealScalar T>
BranchComplex<T> clog_minus(const BranchComplex<T>& z) {
    using std::log;
    if (z.re == T(0.0) && z.im == T(0.0)) throw DomainError("clog_minus: logarithm of zero");
    if (z.im == T(0.0) && z.re < T(0.0)) return {log(-z.re), -pi_v<T>()};
    return clog(z);
}

/// w log w with the limit value 0 at w = 0.
template <RealScalar T>
BranchComplex<T> xlog(const BranchComplex<T>& w) {
    if (w.re == T(0.0) && w.im == T(0.0)) return {};
    return w * clog(w);
}

/// w log_- w with the limit value 0 at w = 0.
template <RealScalar T>
BranchComplex<T> xlog_minus(const BranchComplex<T>& w) {
    if (w.re == T(0.0) && w.im == T(0.0)) return {};
    return w * clog_minus(w);
}

/// Regions in which the modified logarithmic integral relates to the
/// rotated logarithmic integral by a fixed correction.
enum class MRegion {
    RightOrTop, ///< x > 0 or y >= 1
    LeftBottom, ///< x <= 0 and y <= -1
    LeftStrip,  ///< x < 0 and -1 < y < 1
};

/// Regions for the strip correction of the square log-integral recurrence.
enum class BetaRegion {
    InSquare,          ///< |x| <= 1 and |y| <= 1
    LeftOfSquareStrip, ///< x < -1 and -1 < y < 1
    Elsewhere,
};

template <RealScalar T>
void require_not_nan(const BranchComplex<T>& z, const char* who) {
    if (real_traits<T>::isnan(z.re) || real_traits<T>::isnan(z.im))
        throw DomainError(std::string(who) + ": NaN component");
}

/// Classifies z for the modified logarithmic integral.
///
/// A zero real part is resolved by its sign bit for every y < 1: +0 behaves as
/// x > 0 and -0 as x < 0, consistent with rotate_minus_i feeding the principal
/// logarithm.
template <RealScalar T>
MRegion classify_m_region(const BranchComplex<T>& z) {
    require_not_nan(z, "classify_m_region");
    const T& x = z.re;
    const T& y = z.im;
    if (y >= T(1.0)) return MRegion::RightOrTop;
    const bool left = x < T(0.0) || (x == T(0.0) && real_traits<T>::signbit(x));
    if (!left) return MRegion::RightOrTop;
    return y <= T(-1.0) ? MRegion::LeftBottom : MRegion::LeftStrip;
}

template <RealScalar T>
BetaRegion classify_beta_region(const BranchComplex<T>& z) {
    require_not_nan(z, "classify_beta_region");
    using std::abs;
    const T& x = z.re;
    const T& y = z.im;
    if (abs(x) <= T(1.0) && abs(y) <= T(1.0)) return BetaRegion::InSquare;
    if (x < T(-1.0) && T(-1.0) < y && y < T(1.0)) return BetaRegion::LeftOfSquareStrip;
    return BetaRegion::Elsewhere;
}

} // namespace potrec
