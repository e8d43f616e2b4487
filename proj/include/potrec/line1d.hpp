#pragma once

// Integrals over [-1,1] against Legendre polynomials:
//   S_k(z) = int P_k(t)/(z-t) dt,     L_k(z) = int log(z-t) P_k(t) dt,
//   M_k(z) = int log(z-it) P_k(t) dt, and the Stieltjes transform of C_k^{(-1/2)}.
// All sequences are produced by forward substitution of their three-term
// recurrences.

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "potrec/branchlog.hpp"
#include "potrec/errors.hpp"
#include "potrec/polyrec.hpp"
#include "potrec/xprec.hpp"

namespace potrec {

enum class SeqKind { Stieltjes, Log, ModLog, StieltjesUltraMHalf };

template <RealScalar T>
struct SeqTable {
    SeqKind kind = SeqKind::Stieltjes;
    BranchComplex<T> point;
    std::vector<BranchComplex<T>> values;

    const BranchComplex<T>& operator[](std::size_t k) const { return values[k]; }
    std::size_t size() const { return values.size(); }
};

namespace detail {

template <RealScalar T>
T num(double v) {
    return T(v);
}

template <RealScalar T>
bool is_point(const BranchComplex<T>& z, double re, double im) {
    return z.re == T(re) && z.im == T(im);
}

template <RealScalar T>
void require_off_endpoints(const BranchComplex<T>& z, const char* who) {
    require_not_nan(z, who);
    if (is_point(z, 1.0, 0.0) || is_point(z, -1.0, 0.0))
        throw SingularPointError(std::string(who) + ": z is an endpoint of [-1,1]");
}

template <RealScalar T>
void require_off_imag_endpoints(const BranchComplex<T>& z, const char* who) {
    require_not_nan(z, who);
    if (is_point(z, 0.0, 1.0) || is_point(z, 0.0, -1.0))
        throw SingularPointError(std::string(who) + ": z is one of +-i");
}

template <RealScalar T>
T log1p_real(const T& x) {
    if constexpr (std::is_same_v<T, double>) {
        return std::log1p(x);
    } else {
        using std::log;
        return log(T(1.0) + x);
    }
}

/// log(z+1) - log(z-1). Off [-1,1] this equals the principal
/// log((z+1)/(z-1)) = log1p(2/(z-1)), which is evaluated for |z| >= 2 where
/// the plain difference cancels.
template <RealScalar T>
BranchComplex<T> log_ratio(const BranchComplex<T>& z) {
    using std::atan2;
    const T one(1.0);
    const T two(2.0);
    if (abs(z) < two) return clog(z + one) - clog(z - one);
    const BranchComplex<T> w = BranchComplex<T>(two) / (z - one);
    const T m = w.re * (two + w.re) + w.im * w.im; // |1+w|^2 - 1
    return {log1p_real(m) / two, atan2(w.im, one + w.re)};
}

/// L_0(z) = (z+1)log(z+1) - (z-1)log(z-1) - 2, regrouped as
/// z (log(z+1) - log(z-1)) + log(z+1) + log(z-1) - 2 far from the segment.
template <RealScalar T>
BranchComplex<T> log0(const BranchComplex<T>& z) {
    const T one(1.0);
    if (abs(z) < T(2.0)) return xlog(z + one) - xlog(z - one) - T(2.0);
    return z * log_ratio(z) + clog(z + one) + clog(z - one) - T(2.0);
}

/// The region constant multiplying i pi in M_0.
inline double m_region_constant(MRegion r) {
    switch (r) {
    case MRegion::RightOrTop: return 1.0;
    case MRegion::LeftBottom: return -3.0;
    case MRegion::LeftStrip: return -1.0;
    }
    return 1.0;
}

} // namespace detail

/// lambda_k(z): the inhomogeneity of the L_k recurrence.
template <RealScalar T>
BranchComplex<T> lambda_coeff(int k, const BranchComplex<T>& z) {
    if (k < 0) throw DomainError("lambda_coeff: negative index");
    const T one(1.0);
    if (k == 0) return xlog(z - one) + xlog(z + one);
    if (k == 1) return BranchComplex<T>(T(-2.0) / T(3.0));
    return {};
}

/// mu_0..mu_n for the M_k recurrence, including the strip correction.
template <RealScalar T>
std::vector<BranchComplex<T>> mu_coeffs(const BranchComplex<T>& z, int n) {
    if (n < 0) throw DomainError("mu_coeffs: negative length");
    using C = BranchComplex<T>;
    std::vector<C> mu(static_cast<std::size_t>(n) + 1);
    const C i_unit(T(0.0), T(1.0));
    mu[0] = xlog(z - i_unit) + xlog_minus(z + i_unit);
    if (n >= 1) mu[1] = C(T(0.0), T(-2.0) / T(3.0));
    if (classify_m_region(z) == MRegion::LeftStrip) {
        const auto c = ultra_seq<T>(-0.5, z.im, n + 1);
        const T two_pi_x = T(2.0) * pi_v<T>() * z.re;
        for (int k = 0; k <= n; ++k)
            mu[static_cast<std::size_t>(k)].im -= two_pi_x * c.values[static_cast<std::size_t>(k + 1)];
    }
    return mu;
}

template <RealScalar T>
BranchComplex<T> mu_coeff(int k, const BranchComplex<T>& z) {
    if (k < 0) throw DomainError("mu_coeff: negative index");
    return mu_coeffs(z, k)[static_cast<std::size_t>(k)];
}

template <RealScalar T>
SeqTable<T> stieltjes_seq(const BranchComplex<T>& z, int n) {
    if (n < 0) throw DomainError("stieltjes_seq: negative length");
    detail::require_off_endpoints(z, "stieltjes_seq");
    using C = BranchComplex<T>;
    SeqTable<T> out{SeqKind::Stieltjes, z, std::vector<C>(static_cast<std::size_t>(n) + 1)};
    auto& s = out.values;
    s[0] = detail::log_ratio(z);
    C prev{};
    for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        C rhs = z * s[ku];
        if (k == 0) rhs = rhs - T(2.0);
        const C next = (rhs * detail::num<T>(2.0 * k + 1.0) - prev * detail::num<T>(k)) /
                       detail::num<T>(k + 1.0);
        prev = s[ku];
        s[ku + 1] = next;
    }
    return out;
}

/// Stieltjes transforms of C_k^{(-1/2)}, from the moments (2, 0, 2/3, 0, ...).
template <RealScalar T>
SeqTable<T> ultra_stieltjes_mhalf_seq(const BranchComplex<T>& z, int n) {
    if (n < 0) throw DomainError("ultra_stieltjes_mhalf_seq: negative length");
    detail::require_off_endpoints(z, "ultra_stieltjes_mhalf_seq");
    using C = BranchComplex<T>;
    SeqTable<T> out{SeqKind::StieltjesUltraMHalf, z, std::vector<C>(static_cast<std::size_t>(n) + 1)};
    auto& s = out.values;
    s[0] = detail::log_ratio(z);
    C prev{};
    for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        C rhs = z * s[ku];
        if (k == 0) rhs = rhs - T(2.0);
        if (k == 2) rhs = rhs - T(2.0) / T(3.0);
        s[ku + 1] = (rhs * detail::num<T>(2.0 * k - 1.0) - prev * detail::num<T>(k - 2.0)) /
                    detail::num<T>(k + 1.0);
        prev = s[ku];
    }
    return out;
}

/// L_0..L_n. The endpoints z = +-1 are admitted through the 0 log 0 = 0 limit.
template <RealScalar T>
SeqTable<T> log_seq(const BranchComplex<T>& z, int n) {
    if (n < 0) throw DomainError("log_seq: negative length");
    require_not_nan(z, "log_seq");
    using C = BranchComplex<T>;
    SeqTable<T> out{SeqKind::Log, z, std::vector<C>(static_cast<std::size_t>(n) + 1)};
    auto& l = out.values;
    l[0] = detail::log0(z);
    if (n == 0) return out;
    const C lam0 = lambda_coeff(0, z);
    const C lam1 = lambda_coeff(1, z);
    C prev{};
    for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        C rhs = z * l[ku];
        if (k == 0) rhs = rhs - lam0;
        if (k == 1) rhs = rhs - lam1;
        l[ku + 1] = (rhs * detail::num<T>(2.0 * k + 1.0) - prev * detail::num<T>(k - 1.0)) /
                    detail::num<T>(k + 2.0);
        prev = l[ku];
    }
    return out;
}

/// M_0..M_n: seeded from the rotated L_0 with the region correction, then
/// forward substitution with mu_k.
template <RealScalar T>
SeqTable<T> modlog_seq(const BranchComplex<T>& z, int n) {
    if (n < 0) throw DomainError("modlog_seq: negative length");
    detail::require_off_imag_endpoints(z, "modlog_seq");
    using C = BranchComplex<T>;
    SeqTable<T> out{SeqKind::ModLog, z, std::vector<C>(static_cast<std::size_t>(n) + 1)};
    auto& m = out.values;
    const MRegion region = classify_m_region(z);
    const T pi = pi_v<T>();
    C m0 = detail::log0(rotate_minus_i(z));
    m0.im += pi * T(detail::m_region_constant(region));
    if (region == MRegion::LeftStrip) m0.im += T(2.0) * pi * z.im; // C_1^{(-1/2)}(y) = -y
    m[0] = m0;
    if (n == 0) return out;
    const auto mu = mu_coeffs(z, n - 1);
    C prev{};
    for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const C a = rotate_minus_i((z * m[ku] - mu[ku]) * detail::num<T>(2.0 * k + 1.0));
        m[ku + 1] = (a - prev * detail::num<T>(k - 1.0)) / detail::num<T>(k + 2.0);
        prev = m[ku];
    }
    return out;
}

/// M_0..M_n entrywise from L_k(-iz) plus the region corrections. Used as a
/// cross-check of modlog_seq.
template <RealScalar T>
SeqTable<T> modlog_direct(const BranchComplex<T>& z, int n) {
    if (n < 0) throw DomainError("modlog_direct: negative length");
    detail::require_off_imag_endpoints(z, "modlog_direct");
    const MRegion region = classify_m_region(z);
    auto l = log_seq(rotate_minus_i(z), n);
    SeqTable<T> out{SeqKind::ModLog, z, std::move(l.values)};
    const T pi = pi_v<T>();
    out.values[0].im += pi * T(detail::m_region_constant(region));
    if (region == MRegion::LeftStrip) {
        const auto c = ultra_seq<T>(-0.5, z.im, n + 1);
        for (int k = 0; k <= n; ++k)
            out.values[static_cast<std::size_t>(k)].im -=
                T(2.0) * pi * c.values[static_cast<std::size_t>(k + 1)];
    }
    return out;
}

} // namespace potrec
