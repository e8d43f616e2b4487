#pragma once

// Reference values by adaptive Gauss-Legendre quadrature. Square integrals
// are reduced to one outer integral over t of P_j(t) times the 1D sequences
// L_k(z - it) or S_k(z - it), which are evaluated in double-word arithmetic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "potrec/branchlog.hpp"
#include "potrec/errors.hpp"
#include "potrec/line1d.hpp"
#include "potrec/polyrec.hpp"
#include "potrec/square2d.hpp"
#include "potrec/xprec.hpp"

namespace potrec {

template <RealScalar T>
struct QuadRule {
    int order = 0;
    std::vector<T> nodes;
    std::vector<T> weights;
};

/// n-point Gauss-Legendre rule on [-1,1], nodes increasing.
template <RealScalar T = double>
QuadRule<T> gauss_nodes(int n) {
    if (n < 1 || n > 200) throw DomainError("gauss_nodes: order must be in [1, 200]");
    using std::abs;
    QuadRule<T> q;
    q.order = n;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const T eps = real_traits<T>::epsilon();
    const double pi = 3.141592653589793;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Largest roots first; mirrored below.
        T x(std::cos(pi * (i + 0.75) / (n + 0.5)));
        T dp(0.0);
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const auto ps = legendre_seq<T>(x, n);
            const T pn = ps.values[static_cast<std::size_t>(n)];
            const T pm = n >= 1 ? ps.values[static_cast<std::size_t>(n - 1)] : T(0.0);
            dp = T(static_cast<double>(n)) * (x * pn - pm) / (x * x - T(1.0));
            const T dx = pn / dp;
            x = x - dx;
            if (abs(dx) <= T(4.0) * eps) {
                // One more step so the derivative matches the final node.
                const auto ps2 = legendre_seq<T>(x, n);
                const T pn2 = ps2.values[static_cast<std::size_t>(n)];
                const T pm2 = ps2.values[static_cast<std::size_t>(n - 1)];
                dp = T(static_cast<double>(n)) * (x * pn2 - pm2) / (x * x - T(1.0));
                converged = true;
                break;
            }
        }
        if (!converged) throw NumericError("gauss_nodes: Newton iteration did not converge");
        if (2 * i + 1 == n) x = T(0.0);
        const T w = T(2.0) / ((T(1.0) - x * x) * dp * dp);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        const auto lo = static_cast<std::size_t>(i);
        q.nodes[hi] = x;
        q.nodes[lo] = -x;
        q.weights[hi] = w;
        q.weights[lo] = w;
    }
    return q;
}

namespace detail {

inline const QuadRule<double>& gauss20() {
    static const QuadRule<double> rule = gauss_nodes<double>(20);
    return rule;
}

using VecIntegrand = std::function<void(double, BranchComplex<double>*)>;

struct AdaptiveQuad {
    const VecIntegrand& f;
    std::size_t m;
    double tol;
    int max_depth;
    std::vector<BranchComplex<double>> scratch;

    std::vector<BranchComplex<double>> panel(double a, double b) {
        const auto& g = gauss20();
        std::vector<BranchComplex<double>> out(m);
        scratch.resize(m);
        const double h = 0.5 * (b - a);
        const double c = 0.5 * (a + b);
        for (int i = 0; i < g.order; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            f(c + h * g.nodes[iu], scratch.data());
            const double w = h * g.weights[iu];
            for (std::size_t r = 0; r < m; ++r) out[r] += scratch[r] * w;
        }
        return out;
    }

    void refine(double a, double b, const std::vector<BranchComplex<double>>& coarse, int depth,
                std::vector<BranchComplex<double>>& total) {
        const double mid = 0.5 * (a + b);
        auto left = panel(a, mid);
        auto right = panel(mid, b);
        double diff = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double d = abs(left[r] + right[r] - coarse[r]);
            if (d > diff || std::isnan(d)) diff = d;
        }
        if (diff <= tol) {
            for (std::size_t r = 0; r < m; ++r) total[r] += left[r] + right[r];
            return;
        }
        if (depth >= max_depth || !(diff == diff))
            throw AccuracyError("adaptive quadrature: tolerance " + std::to_string(tol) +
                                " not reached at depth " + std::to_string(depth));
        refine(a, mid, left, depth + 1, total);
        refine(mid, b, right, depth + 1, total);
    }
};

} // namespace detail

/// Integral over [lo, hi] of a vector-valued integrand with m components.
/// Each panel is accepted once the two-half Gauss-20 sum changes the one-panel
/// sum by at most tol in every component; breakpoints inside (lo, hi) start
/// separate panels.
inline std::vector<BranchComplex<double>> integrate_adaptive(const detail::VecIntegrand& f, std::size_t m,
                                                             double lo, double hi,
                                                             std::vector<double> breaks, double tol,
                                                             int max_depth = 40) {
    std::vector<double> pts{lo};
    std::sort(breaks.begin(), breaks.end());
    for (double b : breaks)
        if (b > pts.back() && b < hi) pts.push_back(b);
    pts.push_back(hi);
    detail::AdaptiveQuad q{f, m, tol, max_depth, {}};
    std::vector<BranchComplex<double>> total(m);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const auto coarse = q.panel(pts[s], pts[s + 1]);
        q.refine(pts[s], pts[s + 1], coarse, 0, total);
    }
    return total;
}

enum class LineKind { S, L, M };

/// S_k, L_k or M_k for k = 0..n at z by direct quadrature of the defining integral.
inline std::vector<BranchComplex<double>> ref_line_seq(LineKind kind, int n, const BranchComplex<double>& z,
                                                       double tol) {
    using C = BranchComplex<double>;
    if (n < 0) throw DomainError("ref_line: negative index");
    require_not_nan(z, "ref_line");
    if (kind == LineKind::S && z.im == 0.0 && std::fabs(z.re) <= 1.0)
        throw DomainError("ref_line: z on [-1,1] for the Stieltjes kernel");
    const auto m = static_cast<std::size_t>(n) + 1;
    detail::VecIntegrand f = [&](double t, C* out) {
        const auto pk = legendre_seq<double>(t, n);
        C g;
        switch (kind) {
        case LineKind::S: g = C(1.0) / (z - t); break;
        case LineKind::L: g = clog(z - t); break;
        case LineKind::M: g = clog(C(z.re, z.im - t)); break;
        }
        for (std::size_t k = 0; k < m; ++k) out[k] = g * pk.values[k];
    };
    const double split = kind == LineKind::M ? z.im : z.re;
    return integrate_adaptive(f, m, -1.0, 1.0, {split}, tol);
}

inline BranchComplex<double> ref_line(LineKind kind, int k, const BranchComplex<double>& z, double tol) {
    return ref_line_seq(kind, k, z, tol)[static_cast<std::size_t>(k)];
}

/// Table of L_kj or S_kj for k + j <= p at z by the semi-analytic reduction.
template <RealScalar Inner = DoubleWord>
TriTable<double> ref_square_table(TableKind kind, int p, const BranchComplex<double>& z, double tol) {
    using C = BranchComplex<double>;
    if (kind != TableKind::Log && kind != TableKind::Stieltjes)
        throw DomainError("ref_square: kind must be log or stieltjes");
    if (p < 0) throw DomainError("ref_square: negative degree");
    require_off_corners(z, "ref_square");
    const auto m = TriTable<double>::count(p);
    const Inner x = real_traits<Inner>::from_double(z.re);
    const Inner y = real_traits<Inner>::from_double(z.im);
    detail::VecIntegrand f = [&](double t, C* out) {
        const BranchComplex<Inner> w(x, y - Inner(t));
        const auto inner = kind == TableKind::Log ? log_seq(w, p) : stieltjes_seq(w, p);
        const auto pj = legendre_seq<double>(t, p);
        std::size_t idx = 0;
        for (int k = 0; k <= p; ++k) {
            const auto& v = inner.values[static_cast<std::size_t>(k)];
            const C vk(real_traits<Inner>::to_double(v.re), real_traits<Inner>::to_double(v.im));
            for (int j = 0; j + k <= p; ++j) out[idx++] = vk * pj.values[static_cast<std::size_t>(j)];
        }
    };
    const auto vals = integrate_adaptive(f, m, -1.0, 1.0, {z.im}, tol);
    TriTable<double> tab(kind, p, z);
    std::size_t idx = 0;
    for (int k = 0; k <= p; ++k)
        for (int j = 0; j + k <= p; ++j) tab(k, j) = vals[idx++];
    return tab;
}

inline BranchComplex<double> ref_square(TableKind kind, int k, int j, const BranchComplex<double>& z, double tol) {
    if (k < 0 || j < 0) throw DomainError("ref_square: negative index");
    using C = BranchComplex<double>;
    if (kind != TableKind::Log && kind != TableKind::Stieltjes)
        throw DomainError("ref_square: kind must be log or stieltjes");
    require_off_corners(z, "ref_square");
    const DoubleWord x(z.re), y(z.im);
    detail::VecIntegrand f = [&](double t, C* out) {
        const BranchComplex<DoubleWord> w(x, y - DoubleWord(t));
        const auto inner = kind == TableKind::Log ? log_seq(w, k) : stieltjes_seq(w, k);
        const auto& v = inner.values[static_cast<std::size_t>(k)];
        const auto pj = legendre_seq<double>(t, j);
        out[0] = C(v.re.to_double(), v.im.to_double()) * pj.values[static_cast<std::size_t>(j)];
    };
    return integrate_adaptive(f, 1, -1.0, 1.0, {z.im}, tol)[0];
}

} // namespace potrec
