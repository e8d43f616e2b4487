#pragma once

// Truncated operator matrices A, B, C = A - B, residuals of the Sylvester
// identities satisfied by the square tables, and the numerical rank of the
// right-hand side F = F2 - F1.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "potrec/branchlog.hpp"
#include "potrec/errors.hpp"
#include "potrec/square2d.hpp"
#include "potrec/xprec.hpp"

namespace potrec {

enum class MatrixName { A, B, C };

struct Rational {
    long num = 0;
    long den = 1;
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// a/b - c/d, reduced.
inline Rational operator-(const Rational& a, const Rational& b) {
    long n = a.num * b.den - b.num * a.den;
    long d = a.den * b.den;
    long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
}

/// Tridiagonal matrix with zero main diagonal: sub[k] = M(k+1, k), sup[k] = M(k, k+1).
template <typename V>
struct TriDiagOf {
    MatrixName name = MatrixName::B;
    int size = 1;
    std::vector<V> sub;
    std::vector<V> sup;
};

/// Exact rational entries of the (p+1) x (p+1) truncation.
inline TriDiagOf<Rational> build_matrix_rational(MatrixName name, int p) {
    if (p < 0) throw DomainError("build_matrix: negative degree");
    TriDiagOf<Rational> m{name, p + 1, {}, {}};
    auto reduce = [](long n, long d) {
        long g = std::gcd(n < 0 ? -n : n, d);
        return Rational{n / g, d / g};
    };
    for (long k = 0; k < p; ++k) {
        const long r = k + 1; // row of the sub-diagonal entry
        switch (name) {
        case MatrixName::B:
            m.sup.push_back(k == 0 ? Rational{1, 1} : reduce(k + 1, 2 * k + 1));
            m.sub.push_back(reduce(r, 2 * r + 1));
            break;
        case MatrixName::A:
            m.sup.push_back(k == 0 ? Rational{2, 1} : reduce(k + 2, 2 * k + 1));
            m.sub.push_back(r == 1 ? Rational{0, 1} : reduce(r - 1, 2 * r + 1));
            break;
        case MatrixName::C: {
            const auto a = build_matrix_rational(MatrixName::A, p);
            const auto b = build_matrix_rational(MatrixName::B, p);
            for (int i = 0; i < p; ++i) {
                m.sup.push_back(a.sup[static_cast<std::size_t>(i)] - b.sup[static_cast<std::size_t>(i)]);
                m.sub.push_back(a.sub[static_cast<std::size_t>(i)] - b.sub[static_cast<std::size_t>(i)]);
            }
            return m;
        }
        }
    }
    return m;
}

template <RealScalar T>
using TriDiag = TriDiagOf<T>;

template <RealScalar T>
TriDiag<T> build_matrix(MatrixName name, int p) {
    const auto q = build_matrix_rational(name, p);
    TriDiag<T> m{name, q.size, {}, {}};
    auto val = [](const Rational& r) { return T(static_cast<double>(r.num)) / T(static_cast<double>(r.den)); };
    for (const auto& r : q.sub) m.sub.push_back(val(r));
    for (const auto& r : q.sup) m.sup.push_back(val(r));
    return m;
}

/// Largest residual of a set of identities, absolute and relative to the
/// sum of magnitudes of the terms entering each identity.
template <RealScalar T>
struct Residual {
    T absolute{};
    T relative{};
};

namespace detail {

template <RealScalar T>
struct Accum {
    BranchComplex<T> value{};
    T scale{};
    void add(const BranchComplex<T>& v) {
        value += v;
        scale += abs(v);
    }
};

/// (M X)_{kj} with M acting on the first index, as the two contributing terms.
template <RealScalar T>
void add_left(Accum<T>& acc, const TriDiag<T>& m, const TriTable<T>& x, int k, int j, const T& sign) {
    if (k >= 1) acc.add(x(k - 1, j) * (sign * m.sub[static_cast<std::size_t>(k - 1)]));
    acc.add(x(k + 1, j) * (sign * m.sup[static_cast<std::size_t>(k)]));
}

/// i (X M^T)_{kj} scaled by sign.
template <RealScalar T>
void add_right_i(Accum<T>& acc, const TriDiag<T>& m, const TriTable<T>& x, int k, int j, const T& sign) {
    if (j >= 1) acc.add(mul_i(x(k, j - 1)) * (sign * m.sub[static_cast<std::size_t>(j - 1)]));
    acc.add(mul_i(x(k, j + 1)) * (sign * m.sup[static_cast<std::size_t>(j)]));
}

template <RealScalar T>
void fold(Residual<T>& r, const Accum<T>& acc) {
    const T a = abs(acc.value);
    if (a > r.absolute) r.absolute = a;
    if (acc.scale > T(0.0)) {
        const T rel = a / acc.scale;
        if (rel > r.relative) r.relative = rel;
    }
}

template <RealScalar T>
void require_same_degree(const TriTable<T>& a, const TriTable<T>& b, const char* who) {
    if (a.degree() != b.degree())
        throw ShapeError(std::string(who) + ": tables of degree " + std::to_string(a.degree()) + " and " +
                         std::to_string(b.degree()));
}

} // namespace detail

/// Residuals over k + j <= p - 1 of
///   z L = A L + i L B^T + F1,  z L = B L + i L A^T + F2,  C L - i L C^T = F2 - F1.
template <RealScalar T>
Residual<T> sylvester_residual_log(const TriTable<T>& L, const TriTable<T>& f1, const TriTable<T>& f2,
                                   const BranchComplex<T>& z) {
    detail::require_same_degree(L, f1, "sylvester_residual_log");
    detail::require_same_degree(L, f2, "sylvester_residual_log");
    const int p = L.degree();
    if (p < 1) throw ShapeError("sylvester_residual_log: degree must be at least 1");
    const auto A = build_matrix<T>(MatrixName::A, p);
    const auto B = build_matrix<T>(MatrixName::B, p);
    const auto C = build_matrix<T>(MatrixName::C, p);
    const T plus(1.0), minus(-1.0);
    Residual<T> r;
    for (int k = 0; k + 1 <= p; ++k)
        for (int j = 0; k + j <= p - 1; ++j) {
            detail::Accum<T> e1, e2, e3;
            e1.add(z * L(k, j));
            detail::add_left(e1, A, L, k, j, minus);
            detail::add_right_i(e1, B, L, k, j, minus);
            e1.add(-f1(k, j));
            e2.add(z * L(k, j));
            detail::add_left(e2, B, L, k, j, minus);
            detail::add_right_i(e2, A, L, k, j, minus);
            e2.add(-f2(k, j));
            detail::add_left(e3, C, L, k, j, plus);
            detail::add_right_i(e3, C, L, k, j, minus);
            e3.add(-f2(k, j));
            e3.add(f1(k, j));
            detail::fold(r, e1);
            detail::fold(r, e2);
            detail::fold(r, e3);
        }
    return r;
}

/// Residuals over k + j <= p - 1 of z S = B S + i S B^T + 4 e0 e0^T.
template <RealScalar T>
Residual<T> sylvester_residual_stieltjes(const TriTable<T>& S, const BranchComplex<T>& z) {
    const int p = S.degree();
    if (p < 1) throw ShapeError("sylvester_residual_stieltjes: degree must be at least 1");
    const auto B = build_matrix<T>(MatrixName::B, p);
    const T minus(-1.0);
    Residual<T> r;
    for (int k = 0; k + 1 <= p; ++k)
        for (int j = 0; k + j <= p - 1; ++j) {
            detail::Accum<T> e;
            e.add(z * S(k, j));
            detail::add_left(e, B, S, k, j, minus);
            detail::add_right_i(e, B, S, k, j, minus);
            if (k == 0 && j == 0) e.add(BranchComplex<T>(T(-4.0)));
            detail::fold(r, e);
        }
    return r;
}

/// Dense column-major complex matrix.
template <RealScalar T>
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<BranchComplex<T>> a;

    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}
    BranchComplex<T>& operator()(int i, int j) {
        return a[static_cast<std::size_t>(j) * static_cast<std::size_t>(rows) + static_cast<std::size_t>(i)];
    }
    const BranchComplex<T>& operator()(int i, int j) const {
        return a[static_cast<std::size_t>(j) * static_cast<std::size_t>(rows) + static_cast<std::size_t>(i)];
    }
};

enum class FSection {
    Square,     ///< all k, j <= p
    Triangular, ///< k + j <= p, zero elsewhere
};

/// F = F2 - F1 as a dense (p+1) x (p+1) matrix.
template <RealScalar T>
DenseMatrix<T> assemble_F(const BranchComplex<T>& z, int p, FSection section = FSection::Square) {
    const auto s = square_seeds(z, p);
    const auto f1 = rhs_F1(s);
    const auto f2 = rhs_F2(s);
    DenseMatrix<T> F(p + 1, p + 1);
    for (int k = 0; k <= p; ++k)
        for (int j = 0; j <= p; ++j) {
            if (k + j <= p) {
                F(k, j) = f2(k, j) - f1(k, j);
            } else if (section == FSection::Square) {
                // Beyond the triangle only beta contributes to either side.
                F(k, j) = s.beta(k, j);
            }
        }
    return F;
}

/// Singular values in decreasing order by one-sided (Hestenes) Jacobi.
template <RealScalar T>
std::vector<T> singular_values(DenseMatrix<T> m, int max_sweeps = 60) {
    using std::sqrt;
    using C = BranchComplex<T>;
    const int n = m.cols;
    const T eps = real_traits<T>::epsilon();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                T a(0.0), b(0.0);
                C c{};
                for (int i = 0; i < m.rows; ++i) {
                    const C& u = m(i, p);
                    const C& v = m(i, q);
                    a += u.re * u.re + u.im * u.im;
                    b += v.re * v.re + v.im * v.im;
                    c += conj(u) * v;
                }
                const T g = abs(c);
                if (g == T(0.0) || g <= eps * sqrt(a * b)) continue;
                rotated = true;
                const C phase = c / g; // e^{i phi}
                const T zeta = (b - a) / (T(2.0) * g);
                const T root = sqrt(T(1.0) + zeta * zeta);
                const T t = zeta < T(0.0) ? T(-1.0) / (-zeta + root) : T(1.0) / (zeta + root);
                const T cs = T(1.0) / sqrt(T(1.0) + t * t);
                const T sn = cs * t;
                for (int i = 0; i < m.rows; ++i) {
                    const C u = m(i, p);
                    const C v = m(i, q) * conj(phase);
                    m(i, p) = u * cs - v * sn;
                    m(i, q) = u * sn + v * cs;
                }
            }
        if (!rotated) break;
    }
    std::vector<T> sv(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        T s(0.0);
        for (int i = 0; i < m.rows; ++i) s += m(i, j).re * m(i, j).re + m(i, j).im * m(i, j).im;
        sv[static_cast<std::size_t>(j)] = sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), [](const T& x, const T& y) { return y < x; });
    return sv;
}

/// Number of singular values above tol * sigma_1.
template <RealScalar T>
int numerical_rank(const DenseMatrix<T>& m, const T& tol) {
    const auto sv = singular_values(m);
    if (sv.empty() || sv[0] == T(0.0)) return 0;
    int r = 0;
    for (const auto& s : sv)
        if (s > tol * sv[0]) ++r;
    return r;
}

template <RealScalar T>
int numerical_rank_F(const BranchComplex<T>& z, int p, const T& tol, FSection section = FSection::Square) {
    if (p < 4) throw DomainError("numerical_rank_F: degree must be at least 4");
    return numerical_rank(assemble_F(z, p, section), tol);
}

/// Rows and columns first..n-1 of m.
template <RealScalar T>
DenseMatrix<T> trailing_block(const DenseMatrix<T>& m, int first) {
    DenseMatrix<T> out(m.rows - first, m.cols - first);
    for (int j = first; j < m.cols; ++j)
        for (int i = first; i < m.rows; ++i) out(i - first, j - first) = m(i, j);
    return out;
}

} // namespace potrec
