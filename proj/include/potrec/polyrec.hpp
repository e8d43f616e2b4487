#pragma once

// Legendre and ultraspherical polynomial sequences by forward three-term
// recurrence.

#include <string>
#include <vector>

#include "potrec/errors.hpp"
#include "potrec/xprec.hpp"

namespace potrec {

enum class PolyFamily { Legendre, Ultraspherical };

/// Values p_0(x), ..., p_n(x) of one polynomial family at a point.
template <RealScalar T>
struct PolySeq {
    PolyFamily family = PolyFamily::Legendre;
    double lambda = 0.0; ///< ultraspherical index; unused for Legendre
    std::vector<T> values;

    const T& operator[](std::size_t k) const { return values[k]; }
    std::size_t size() const { return values.size(); }
};

namespace detail {

inline void require_degree(int n, const char* who) {
    if (n < 0) throw DomainError(std::string(who) + ": degree must be non-negative");
}

} // namespace detail

/// P_0(x), ..., P_n(x) from x P_k = k/(2k+1) P_{k-1} + (k+1)/(2k+1) P_{k+1}.
template <RealScalar T>
PolySeq<T> legendre_seq(const T& x, int n) {
    detail::require_degree(n, "legendre_seq");
    PolySeq<T> out{PolyFamily::Legendre, 0.0, {}};
    out.values.resize(static_cast<std::size_t>(n) + 1);
    auto& p = out.values;
    p[0] = T(1.0);
    if (n >= 1) p[1] = x;
    for (int k = 1; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        p[ku + 1] = (T(2.0 * k + 1.0) * x * p[ku] - T(static_cast<double>(k)) * p[ku - 1]) /
                    T(static_cast<double>(k + 1));
    }
    return out;
}

/// True for the ultraspherical indices the library supports: 3/2, -1/2, -3/2.
inline bool supported_ultra_index(double lambda) {
    return lambda == 1.5 || lambda == -0.5 || lambda == -1.5;
}

/// C_0^{(lambda)}(x), ..., C_n^{(lambda)}(x), started from C_0 = 1,
/// C_1 = 2 lambda x for every supported lambda (including the negative ones).
template <RealScalar T>
PolySeq<T> ultra_seq(double lambda, const T& x, int n) {
    detail::require_degree(n, "ultra_seq");
    if (!supported_ultra_index(lambda))
        throw DomainError("ultra_seq: unsupported index " + std::to_string(lambda));
    PolySeq<T> out{PolyFamily::Ultraspherical, lambda, {}};
    out.values.resize(static_cast<std::size_t>(n) + 1);
    auto& c = out.values;
    // 2 lambda is an odd integer, so every recurrence coefficient is an integer.
    const int two_lambda = static_cast<int>(2.0 * lambda);
    c[0] = T(1.0);
    if (n >= 1) c[1] = T(static_cast<double>(two_lambda)) * x;
    for (int k = 1; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const T a = T(static_cast<double>(2 * k + two_lambda));
        const T b = T(static_cast<double>(k + two_lambda - 1));
        c[ku + 1] = (a * x * c[ku] - b * c[ku - 1]) / T(static_cast<double>(k + 1));
    }
    return out;
}

/// C^{(-1/2)} from the piecewise closed form: 1, -x, then
/// (1 - x^2) C_{k-2}^{(3/2)}(x) / (k (k-1)).
template <RealScalar T>
PolySeq<T> ultra_mhalf_explicit(const T& x, int n) {
    detail::require_degree(n, "ultra_mhalf_explicit");
    PolySeq<T> out{PolyFamily::Ultraspherical, -0.5, {}};
    out.values.resize(static_cast<std::size_t>(n) + 1);
    auto& c = out.values;
    c[0] = T(1.0);
    if (n >= 1) c[1] = -x;
    if (n >= 2) {
        const auto c32 = ultra_seq<T>(1.5, x, n - 2);
        const T w = T(1.0) - x * x;
        for (int k = 2; k <= n; ++k)
            c[static_cast<std::size_t>(k)] =
                w * c32.values[static_cast<std::size_t>(k - 2)] / T(static_cast<double>(k) * (k - 1));
    }
    return out;
}

} // namespace potrec
