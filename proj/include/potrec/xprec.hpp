#pragma once

// Precision-generic real scalars: the native double and a double-word type
// (unevaluated sum hi + lo of two doubles, ~106 significand bits).
//
// Arithmetic follows the error-free transformation algorithms of Joldes,
// Muller and Popescu; elementary functions take a native first guess and
// refine it once in double-word arithmetic.

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <utility>

#include "potrec/errors.hpp"

// Selects the exact product used by double-word multiplication. With
// POTREC_USE_FMA=0 the Dekker/Veltkamp splitting fallback is compiled in.
#ifndef POTREC_USE_FMA
#if defined(FP_FAST_FMA)
#define POTREC_USE_FMA 1
#else
#define POTREC_USE_FMA 0
#endif
#endif

namespace potrec {

/// Rounded result of an operation together with its exact rounding error.
struct TwoTerm {
    double value;
    double error;
};

/// s = fl(a + b) and e with a + b = s + e exactly (Knuth).
inline TwoTerm exact_two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

/// As exact_two_sum, requires |a| >= |b| (or a == 0).
inline TwoTerm fast_two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double e = b - (s - a);
    return {s, e};
}

namespace detail {

inline TwoTerm split(double a) noexcept {
    // Veltkamp splitting into two 26-bit halves.
    constexpr double factor = 134217729.0; // 2^27 + 1
    const double c = factor * a;
    const double hi = c - (c - a);
    return {hi, a - hi};
}

} // namespace detail

/// p = fl(a * b) and e with a * b = p + e exactly (barring underflow).
inline TwoTerm exact_two_prod(double a, double b) noexcept {
    const double p = a * b;
#if POTREC_USE_FMA
    return {p, std::fma(a, b, -p)};
#else
    const auto [ah, al] = detail::split(a);
    const auto [bh, bl] = detail::split(b);
    const double e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    return {p, e};
#endif
}

namespace detail {

// a * b + c, fused when FMA is enabled.
inline double mul_add(double a, double b, double c) noexcept {
#if POTREC_USE_FMA
    return std::fma(a, b, c);
#else
    return a * b + c;
#endif
}

} // namespace detail

/// A real number stored as hi + lo with |lo| <= ulp(hi)/2.
class DoubleWord {
public:
    constexpr DoubleWord() noexcept = default;
    constexpr DoubleWord(double x) noexcept : hi_(x) {} // NOLINT: implicit widening is the point
    constexpr DoubleWord(int x) noexcept : hi_(static_cast<double>(x)) {} // NOLINT

    /// Builds from an already normalized pair.
    static constexpr DoubleWord from_parts(double hi, double lo) noexcept {
        DoubleWord r;
        r.hi_ = hi;
        r.lo_ = lo;
        return r;
    }

    /// Normalizes an arbitrary pair.
    static DoubleWord normalize(double hi, double lo) noexcept {
        const auto [s, e] = exact_two_sum(hi, lo);
        return finite_or_special(s, e);
    }

    constexpr double hi() const noexcept { return hi_; }
    constexpr double lo() const noexcept { return lo_; }
    constexpr double to_double() const noexcept { return hi_ + lo_; }
    explicit constexpr operator double() const noexcept { return hi_ + lo_; }

    friend DoubleWord operator-(DoubleWord x) noexcept { return from_parts(-x.hi_, -x.lo_); }
    friend DoubleWord operator+(DoubleWord x) noexcept { return x; }

    friend DoubleWord operator+(DoubleWord x, DoubleWord y) noexcept {
        const auto [sh, sl] = exact_two_sum(x.hi_, y.hi_);
        if (!std::isfinite(sh)) return from_parts(sh, 0.0);
        const auto [th, tl] = exact_two_sum(x.lo_, y.lo_);
        const auto [vh, vl] = fast_two_sum(sh, sl + th);
        const auto [zh, zl] = fast_two_sum(vh, tl + vl);
        if (zh == 0.0) return from_parts(x.hi_ + y.hi_, 0.0);
        return from_parts(zh, zl);
    }

    friend DoubleWord operator+(DoubleWord x, double y) noexcept {
        const auto [sh, sl] = exact_two_sum(x.hi_, y);
        if (!std::isfinite(sh)) return from_parts(sh, 0.0);
        const auto [zh, zl] = fast_two_sum(sh, x.lo_ + sl);
        if (zh == 0.0) return from_parts(x.hi_ + y, 0.0);
        return from_parts(zh, zl);
    }
    friend DoubleWord operator+(double x, DoubleWord y) noexcept { return y + x; }

    friend DoubleWord operator-(DoubleWord x, DoubleWord y) noexcept { return x + (-y); }
    friend DoubleWord operator-(DoubleWord x, double y) noexcept { return x + (-y); }
    friend DoubleWord operator-(double x, DoubleWord y) noexcept { return (-y) + x; }

    friend DoubleWord operator*(DoubleWord x, DoubleWord y) noexcept {
        const auto [ch, cl] = exact_two_prod(x.hi_, y.hi_);
        if (!std::isfinite(ch)) return from_parts(ch, 0.0);
        const double tl0 = x.lo_ * y.lo_;
        const double tl1 = detail::mul_add(x.hi_, y.lo_, tl0);
        const double cl2 = detail::mul_add(x.lo_, y.hi_, tl1);
        const auto [zh, zl] = fast_two_sum(ch, cl + cl2);
        if (zh == 0.0) return from_parts(x.hi_ * y.hi_, 0.0);
        return from_parts(zh, zl);
    }

    friend DoubleWord operator*(DoubleWord x, double y) noexcept {
        const auto [ch, cl] = exact_two_prod(x.hi_, y);
        if (!std::isfinite(ch)) return from_parts(ch, 0.0);
        const double cl3 = detail::mul_add(x.lo_, y, cl);
        const auto [zh, zl] = fast_two_sum(ch, cl3);
        if (zh == 0.0) return from_parts(x.hi_ * y, 0.0);
        return from_parts(zh, zl);
    }
    friend DoubleWord operator*(double x, DoubleWord y) noexcept { return y * x; }

    friend DoubleWord operator/(DoubleWord x, double y) noexcept {
        const double th = x.hi_ / y;
        if (!std::isfinite(th) || y == 0.0) return from_parts(th, 0.0);
        const auto [ph, pl] = exact_two_prod(th, y);
        const double delta = ((x.hi_ - ph) - pl) + x.lo_;
        const auto [zh, zl] = fast_two_sum(th, delta / y);
        if (zh == 0.0) return from_parts(th, 0.0);
        return from_parts(zh, zl);
    }

    friend DoubleWord operator/(DoubleWord x, DoubleWord y) noexcept {
        const double th = x.hi_ / y.hi_;
        if (!std::isfinite(th) || y.hi_ == 0.0) return from_parts(th, 0.0);
        // Long division: one correction term from the exact remainder.
        const DoubleWord r = x - y * th;
        const double tl = r.hi_ / y.hi_;
        const auto [zh, zl] = fast_two_sum(th, tl);
        if (zh == 0.0) return from_parts(th, 0.0);
        // Second correction recovers the last bits lost in tl.
        const DoubleWord q = from_parts(zh, zl);
        const DoubleWord r2 = x - y * q;
        return q + r2.hi_ / y.hi_;
    }
    friend DoubleWord operator/(double x, DoubleWord y) noexcept { return DoubleWord(x) / y; }

    DoubleWord& operator+=(DoubleWord y) noexcept { return *this = *this + y; }
    DoubleWord& operator-=(DoubleWord y) noexcept { return *this = *this - y; }
    DoubleWord& operator*=(DoubleWord y) noexcept { return *this = *this * y; }
    DoubleWord& operator/=(DoubleWord y) noexcept { return *this = *this / y; }
    DoubleWord& operator+=(double y) noexcept { return *this = *this + y; }
    DoubleWord& operator-=(double y) noexcept { return *this = *this - y; }
    DoubleWord& operator*=(double y) noexcept { return *this = *this * y; }
    DoubleWord& operator/=(double y) noexcept { return *this = *this / y; }

    friend constexpr bool operator==(DoubleWord x, DoubleWord y) noexcept {
        return x.hi_ == y.hi_ && x.lo_ == y.lo_;
    }
    friend constexpr bool operator<(DoubleWord x, DoubleWord y) noexcept {
        return x.hi_ < y.hi_ || (x.hi_ == y.hi_ && x.lo_ < y.lo_);
    }
    friend constexpr bool operator>(DoubleWord x, DoubleWord y) noexcept { return y < x; }
    friend constexpr bool operator<=(DoubleWord x, DoubleWord y) noexcept { return !(y < x); }
    friend constexpr bool operator>=(DoubleWord x, DoubleWord y) noexcept { return !(x < y); }

private:
    static DoubleWord finite_or_special(double s, double e) noexcept {
        if (!std::isfinite(s)) return from_parts(s, 0.0);
        return from_parts(s, e);
    }

    double hi_ = 0.0;
    double lo_ = 0.0;
};

inline DoubleWord abs(DoubleWord x) noexcept { return std::signbit(x.hi()) ? -x : x; }
inline DoubleWord fabs(DoubleWord x) noexcept { return abs(x); }
inline bool signbit(DoubleWord x) noexcept { return std::signbit(x.hi()); }
inline bool isnan(DoubleWord x) noexcept { return std::isnan(x.hi()) || std::isnan(x.lo()); }
inline bool isfinite(DoubleWord x) noexcept { return std::isfinite(x.hi()); }

/// x * 2^e, exact.
inline DoubleWord ldexp(DoubleWord x, int e) noexcept {
    return DoubleWord::from_parts(std::ldexp(x.hi(), e), std::ldexp(x.lo(), e));
}

namespace dw_const {

inline constexpr DoubleWord pi = DoubleWord::from_parts(3.141592653589793, 1.2246467991473532e-16);
inline constexpr DoubleWord half_pi = DoubleWord::from_parts(1.5707963267948966, 6.123233995736766e-17);
inline constexpr DoubleWord ln2 = DoubleWord::from_parts(0.6931471805599453, 2.3190468138462996e-17);

} // namespace dw_const

namespace detail {

template <std::size_t N>
std::array<DoubleWord, N> inverse_factorials() {
    std::array<DoubleWord, N> out{};
    DoubleWord fact = 1.0;
    for (std::size_t n = 0; n < N; ++n) {
        if (n > 0) fact = fact * static_cast<double>(n);
        out[n] = DoubleWord(1.0) / fact;
    }
    return out;
}

inline const std::array<DoubleWord, 28>& inv_fact() {
    static const auto table = inverse_factorials<28>();
    return table;
}

// exp(r) - 1 for |r| <~ 4e-4 by Taylor series.
inline DoubleWord expm1_small(DoubleWord r) noexcept {
    const auto& f = inv_fact();
    DoubleWord s = f[10];
    for (int n = 9; n >= 1; --n) s = s * r + f[static_cast<std::size_t>(n)];
    return s * r;
}

// sin and cos for |r| <= pi/4.
inline std::pair<DoubleWord, DoubleWord> sin_cos_reduced(DoubleWord r) noexcept {
    const auto& f = inv_fact();
    const DoubleWord r2 = r * r;
    DoubleWord s = f[27];
    DoubleWord c = f[26];
    for (int n = 25; n >= 1; n -= 2) s = f[static_cast<std::size_t>(n)] - r2 * s;
    for (int n = 24; n >= 0; n -= 2) c = f[static_cast<std::size_t>(n)] - r2 * c;
    return {s * r, c};
}

// log(x) = 2 atanh((x-1)/(x+1)) for x near 1, keeps relative accuracy.
inline DoubleWord log_near_one(DoubleWord x) noexcept {
    const DoubleWord u = (x - 1.0) / (x + 1.0);
    const DoubleWord u2 = u * u;
    // |u| < 1/31, so terms past u^26 are below the double-word rounding level.
    static const auto inv_odd = [] {
        std::array<DoubleWord, 14> t{};
        for (std::size_t m = 0; m < t.size(); ++m) t[m] = DoubleWord(1.0) / static_cast<double>(2 * m + 1);
        return t;
    }();
    DoubleWord s = inv_odd.back();
    for (std::size_t m = inv_odd.size() - 1; m-- > 0;) s = inv_odd[m] + u2 * s;
    return ldexp(u * s, 1);
}

} // namespace detail

inline DoubleWord exp(DoubleWord x) {
    if (isnan(x)) return x;
    if (x.hi() > 709.78) return std::numeric_limits<double>::infinity();
    if (x.hi() < -745.2) return 0.0;
    const double k = std::nearbyint(x.hi() / dw_const::ln2.hi());
    DoubleWord r = x - dw_const::ln2 * k;
    constexpr int squarings = 10;
    r = ldexp(r, -squarings);
    DoubleWord p = detail::expm1_small(r);
    for (int i = 0; i < squarings; ++i) p = ldexp(p, 1) + p * p;
    return ldexp(p + 1.0, static_cast<int>(k));
}

inline DoubleWord log(DoubleWord x) {
    if (isnan(x)) return x;
    if (!(x.hi() > 0.0)) throw DomainError("log: argument must be positive");
    if (std::isinf(x.hi())) return x;
    if (std::fabs(x.hi() - 1.0) < 0.0625) return detail::log_near_one(x);
    const DoubleWord y = std::log(x.hi());
    // Newton step on exp(y) = x.
    return y + (x * exp(-y) - 1.0);
}

inline DoubleWord sqrt(DoubleWord x) {
    if (isnan(x)) return x;
    if (x.hi() < 0.0) throw DomainError("sqrt: argument must be non-negative");
    if (x.hi() == 0.0 || std::isinf(x.hi())) return DoubleWord(x.hi());
    const double y0 = std::sqrt(x.hi());
    const auto [sq, sqe] = exact_two_prod(y0, y0);
    const DoubleWord residual = (x - sq) - sqe;
    return DoubleWord(y0) + residual.hi() / (2.0 * y0);
}

/// sin and cos of x; argument reduction by multiples of pi/2 assumes moderate |x|.
inline std::pair<DoubleWord, DoubleWord> sin_cos(DoubleWord x) noexcept {
    const double k = std::nearbyint(x.hi() / dw_const::half_pi.hi());
    const DoubleWord r = x - dw_const::half_pi * k;
    const auto [s, c] = detail::sin_cos_reduced(r);
    switch (static_cast<int>(std::fmod(k, 4.0) + 4.0) % 4) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
    }
}

inline DoubleWord sin(DoubleWord x) noexcept { return sin_cos(x).first; }
inline DoubleWord cos(DoubleWord x) noexcept { return sin_cos(x).second; }

/// Principal argument of x + iy in (-pi, pi]; the sign of a zero y selects +-pi.
inline DoubleWord atan2(DoubleWord y, DoubleWord x) {
    if (isnan(x) || isnan(y)) return std::numeric_limits<double>::quiet_NaN();
    if (y.hi() == 0.0 && x.hi() == 0.0) throw DomainError("atan2: both arguments are zero");
    if (y.hi() == 0.0) {
        if (x.hi() > 0.0) return DoubleWord(y.hi());
        return std::signbit(y.hi()) ? -dw_const::pi : dw_const::pi;
    }
    if (x.hi() == 0.0) return y.hi() > 0.0 ? dw_const::half_pi : -dw_const::half_pi;
    const DoubleWord t0 = std::atan2(y.hi(), x.hi());
    const auto [s, c] = sin_cos(t0);
    // tan of the residual angle; atan(t) = t to double-word accuracy here.
    const DoubleWord num = y * c - x * s;
    const DoubleWord den = x * c + y * s;
    return t0 + num / den;
}

/// Per-type constants and conversions the library needs from a real scalar.
template <class T>
struct real_traits;

template <>
struct real_traits<double> {
    static constexpr double pi() noexcept { return 3.141592653589793; }
    static constexpr double epsilon() noexcept { return std::numeric_limits<double>::epsilon(); }
    static constexpr double to_double(double x) noexcept { return x; }
    static constexpr double from_double(double x) noexcept { return x; }
    static bool signbit(double x) noexcept { return std::signbit(x); }
    static bool isnan(double x) noexcept { return std::isnan(x); }
    static constexpr const char* name() noexcept { return "double"; }
};

template <>
struct real_traits<DoubleWord> {
    static constexpr DoubleWord pi() noexcept { return dw_const::pi; }
    // 2^-104: unit roundoff of the double-word format is 2^-105.
    static constexpr DoubleWord epsilon() noexcept { return 4.930380657631324e-32; }
    static constexpr double to_double(DoubleWord x) noexcept { return x.to_double(); }
    static constexpr DoubleWord from_double(double x) noexcept { return x; }
    static bool signbit(DoubleWord x) noexcept { return std::signbit(x.hi()); }
    static bool isnan(DoubleWord x) noexcept { return potrec::isnan(x); }
    static constexpr const char* name() noexcept { return "doubleword"; }
};

/// The precision-generic real number contract.
template <class T>
concept RealScalar = std::copyable<T> && requires(T a, T b, double d) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a / b } -> std::convertible_to<T>;
    { -a } -> std::convertible_to<T>;
    { a < b } -> std::convertible_to<bool>;
    { a == b } -> std::convertible_to<bool>;
    { real_traits<T>::pi() } -> std::convertible_to<T>;
    { real_traits<T>::epsilon() } -> std::convertible_to<T>;
    { real_traits<T>::to_double(a) } -> std::convertible_to<double>;
    { real_traits<T>::from_double(d) } -> std::convertible_to<T>;
    { real_traits<T>::signbit(a) } -> std::convertible_to<bool>;
};

template <RealScalar T>
constexpr T pi_v() {
    return real_traits<T>::pi();
}

template <RealScalar T>
double to_double(const T& x) {
    return real_traits<T>::to_double(x);
}

/// Runtime precision selector for the non-template front ends.
enum class Precision { Double, DoubleWord };

} // namespace potrec
