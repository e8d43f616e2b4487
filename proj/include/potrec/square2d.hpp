#pragma once

// Integrals over the square [-1,1]^2 against P_k(s) P_j(t):
//   L_kj(z) = iint log(z - (s+it)) P_k(s) P_j(t) ds dt,
//   S_kj(z) = iint P_k(s) P_j(t) / (z - (s+it)) ds dt,
// for all k + j <= p, by seeding the first row and column from 1D sequences
// and filling the rest with two-sided three-term recurrences.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "potrec/branchlog.hpp"
#include "potrec/errors.hpp"
#include "potrec/line1d.hpp"
#include "potrec/polyrec.hpp"
#include "potrec/xprec.hpp"

namespace potrec {

/// Largest total degree accepted by the table builders.
inline constexpr int kMaxDegree = 200;

/// Beyond this max(|x|,|y|) the forward recurrences lose digits quickly with p.
inline constexpr double kFarFieldRadius = 3.0;

enum class TableKind { Log, Stieltjes, F1, F2 };

inline const char* to_string(TableKind k) {
    switch (k) {
    case TableKind::Log: return "log";
    case TableKind::Stieltjes: return "stieltjes";
    case TableKind::F1: return "F1";
    case TableKind::F2: return "F2";
    }
    return "?";
}

/// Entries t(k, j) for k + j <= p, stored row by row.
template <RealScalar T>
class TriTable {
public:
    using value_type = BranchComplex<T>;

    TriTable() = default;
    TriTable(TableKind kind, int p, const BranchComplex<T>& z)
        : kind_(kind), p_(p), point_(z), data_(count(p)) {
        if (p < 0) throw DomainError("TriTable: negative degree");
        const double ax = std::fabs(to_double(z.re));
        const double ay = std::fabs(to_double(z.im));
        far_field_ = (ax > ay ? ax : ay) > kFarFieldRadius;
    }

    static std::size_t count(int p) {
        const auto q = static_cast<std::size_t>(p < 0 ? 0 : p);
        return (q + 1) * (q + 2) / 2;
    }
    static std::size_t offset(int p, int k, int j) {
        const auto kk = static_cast<std::size_t>(k);
        const auto pp = static_cast<std::size_t>(p);
        if (kk == 0) return static_cast<std::size_t>(j);
        return kk * (pp + 1) - kk * (kk - 1) / 2 + static_cast<std::size_t>(j);
    }

    bool contains(int k, int j) const { return k >= 0 && j >= 0 && k + j <= p_; }

    value_type& operator()(int k, int j) { return data_[offset(p_, k, j)]; }
    const value_type& operator()(int k, int j) const { return data_[offset(p_, k, j)]; }

    const value_type& at(int k, int j) const {
        if (!contains(k, j))
            throw ShapeError("TriTable: index (" + std::to_string(k) + "," + std::to_string(j) +
                             ") outside degree " + std::to_string(p_));
        return (*this)(k, j);
    }

    /// Zero outside the triangle, the entry otherwise.
    value_type get_or_zero(int k, int j) const { return contains(k, j) ? (*this)(k, j) : value_type{}; }

    TableKind kind() const { return kind_; }
    int degree() const { return p_; }
    const BranchComplex<T>& point() const { return point_; }
    /// Set when the point lies far enough from the square that forward
    /// substitution is expected to lose accuracy at moderate p.
    bool far_field_advisory() const { return far_field_; }
    std::size_t size() const { return data_.size(); }
    const std::vector<value_type>& entries() const { return data_; }

private:
    TableKind kind_ = TableKind::Log;
    int p_ = 0;
    BranchComplex<T> point_{};
    bool far_field_ = false;
    std::vector<value_type> data_;
};

/// Legendre coefficients f_kj, k <= m, j <= n, row-major.
template <RealScalar T>
struct CoeffMatrix {
    int m = 0;
    int n = 0;
    std::vector<T> f;

    CoeffMatrix() : f(1, T(0.0)) {}
    CoeffMatrix(int m_, int n_) : m(m_), n(n_) {
        if (m < 0 || n < 0) throw ShapeError("CoeffMatrix: negative degree");
        f.assign(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1), T(0.0));
    }
    T& operator()(int k, int j) { return f[static_cast<std::size_t>(k) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(j)]; }
    const T& operator()(int k, int j) const {
        return f[static_cast<std::size_t>(k) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(j)];
    }
};

template <RealScalar T>
struct PotentialResult {
    T potential{};
    T grad_x{};
    T grad_y{};
    bool far_field_advisory = false;
};

/// Refuses the four corners +-1 +- i, where the seed formulas degenerate.
template <RealScalar T>
void require_off_corners(const BranchComplex<T>& z, const char* who) {
    require_not_nan(z, who);
    using std::abs;
    if (abs(z.re) == T(1.0) && abs(z.im) == T(1.0))
        throw CornerSingularityError(std::string(who) + ": point is a corner of the square");
}

/// beta_kj = 2 i pi C_{j+1}^{(-1/2)}(y) g_k(x), stored as the two factors.
template <RealScalar T>
struct BetaFactors {
    BetaRegion region = BetaRegion::Elsewhere;
    std::vector<T> g;  ///< g_k, k = 0..p
    std::vector<T> cy; ///< C_{j+1}^{(-1/2)}(y), j = 0..p

    /// The real factor of beta_kj / i.
    T imag(int k, int j) const {
        if (region == BetaRegion::Elsewhere) return T(0.0);
        return T(2.0) * pi_v<T>() * cy[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k)];
    }
    BranchComplex<T> operator()(int k, int j) const { return {T(0.0), imag(k, j)}; }
};

/// Region whose beta formula applies at z. The shifted points z -+ i land on
/// the cut of L_k with a +0 imaginary part when y = +-1, i.e. on the side
/// y > 1 at the top edge and y > -1 at the bottom edge, so beta is taken
/// over -1 <= y < 1.
template <RealScalar T>
BetaRegion beta_support_region(const BranchComplex<T>& z) {
    const BetaRegion r = classify_beta_region(z);
    if (z.im == T(1.0)) return BetaRegion::Elsewhere;
    if (z.im == T(-1.0) && z.re < T(-1.0)) return BetaRegion::LeftOfSquareStrip;
    return r;
}

template <RealScalar T>
BetaFactors<T> beta_factors(const BranchComplex<T>& z, int p) {
    BetaFactors<T> b;
    b.region = beta_support_region(z);
    const auto np = static_cast<std::size_t>(p) + 1;
    b.g.assign(np, T(0.0));
    b.cy.assign(np, T(0.0));
    if (b.region == BetaRegion::Elsewhere) return b;
    const auto cy = ultra_seq<T>(-0.5, z.im, p + 1);
    for (std::size_t j = 0; j < np; ++j) b.cy[j] = cy.values[j + 1];
    const T third = T(1.0) / T(3.0);
    if (b.region == BetaRegion::InSquare) {
        const auto cx = ultra_seq<T>(-1.5, z.re, p + 2);
        for (std::size_t k = 0; k < np; ++k) b.g[k] = cx.values[k + 2] / T(3.0);
        b.g[0] -= z.re;
        if (np > 1) b.g[1] += third;
    } else {
        b.g[0] = T(-2.0) * z.re;
        if (np > 1) b.g[1] = T(2.0) * third;
    }
    return b;
}

template <RealScalar T>
BranchComplex<T> beta(int k, int j, const BranchComplex<T>& z) {
    if (k < 0 || j < 0) throw DomainError("beta: negative index");
    const int p = k > j ? k : j;
    return beta_factors(z, p)(k, j);
}

/// One-dimensional sequences shared by the log and Stieltjes tables at z.
template <RealScalar T>
struct SquareSeeds {
    using C = BranchComplex<T>;
    C z;
    int p = 0;
    SeqTable<T> m_minus; ///< M_k(z-1), k = 0..p+1
    SeqTable<T> m_plus;  ///< M_k(z+1), k = 0..p+1
    std::vector<C> mu_minus, mu_plus; ///< mu_k(z-+1), k = 0..p
    SeqTable<T> l_minus_i; ///< L_k(z-i), k = 0..p+1
    SeqTable<T> l_plus_i;  ///< L_k(z+i), k = 0..p+1
    BetaFactors<T> beta;
};

template <RealScalar T>
SquareSeeds<T> square_seeds(const BranchComplex<T>& z, int p) {
    if (p < 0) throw DomainError("square_seeds: negative degree");
    if (p > kMaxDegree)
        throw CapacityError("degree " + std::to_string(p) + " exceeds limit " + std::to_string(kMaxDegree));
    require_off_corners(z, "square_seeds");
    using C = BranchComplex<T>;
    const T one(1.0);
    const C i_unit(T(0.0), one);
    SquareSeeds<T> s;
    s.z = z;
    s.p = p;
    const C zm = z - one;
    const C zp = z + one;
    s.m_minus = modlog_seq(zm, p + 1);
    s.m_plus = modlog_seq(zp, p + 1);
    s.mu_minus = mu_coeffs(zm, p);
    s.mu_plus = mu_coeffs(zp, p);
    s.l_minus_i = log_seq(z - i_unit, p + 1);
    s.l_plus_i = log_seq(z + i_unit, p + 1);
    s.beta = beta_factors(z, p);
    return s;
}

namespace detail {

template <RealScalar T>
BranchComplex<T> f1_row(const SquareSeeds<T>& s, int j) {
    using C = BranchComplex<T>;
    const auto ju = static_cast<std::size_t>(j);
    C d = s.m_minus[ju + 1] + s.m_plus[ju + 1];
    if (j >= 1) d = d - s.m_minus[ju - 1] - s.m_plus[ju - 1];
    return mul_i(d) / T(2.0 * j + 1.0) + s.mu_minus[ju] + s.mu_plus[ju];
}

template <RealScalar T>
BranchComplex<T> f2_col(const SquareSeeds<T>& s, int k) {
    using C = BranchComplex<T>;
    const auto ku = static_cast<std::size_t>(k);
    C d = s.l_minus_i[ku + 1] + s.l_plus_i[ku + 1];
    if (k >= 1) d = d - s.l_minus_i[ku - 1] - s.l_plus_i[ku - 1];
    C out = d / T(2.0 * k + 1.0) + s.beta(k, 0);
    if (k == 0) out = out + lambda_coeff(0, s.l_minus_i.point) + lambda_coeff(0, s.l_plus_i.point);
    if (k == 1) out = out - T(4.0) / T(3.0);
    return out;
}

} // namespace detail

template <RealScalar T>
TriTable<T> rhs_F1(const SquareSeeds<T>& s) {
    TriTable<T> f(TableKind::F1, s.p, s.z);
    for (int j = 0; j <= s.p; ++j) f(0, j) = detail::f1_row(s, j);
    if (s.p >= 1) f(1, 0) = BranchComplex<T>(T(-4.0) / T(3.0));
    return f;
}

template <RealScalar T>
TriTable<T> rhs_F2(const SquareSeeds<T>& s) {
    TriTable<T> f(TableKind::F2, s.p, s.z);
    for (int k = 0; k <= s.p; ++k) {
        f(k, 0) = detail::f2_col(s, k);
        for (int j = 1; j <= s.p - k; ++j) f(k, j) = s.beta(k, j);
    }
    if (s.p >= 1) f(0, 1).im -= T(4.0) / T(3.0);
    return f;
}

template <RealScalar T>
TriTable<T> rhs_F1(const BranchComplex<T>& z, int p) {
    return rhs_F1(square_seeds(z, p));
}

template <RealScalar T>
TriTable<T> rhs_F2(const BranchComplex<T>& z, int p) {
    return rhs_F2(square_seeds(z, p));
}

template <RealScalar T>
BranchComplex<T> log_00(const SquareSeeds<T>& s) {
    const T one(1.0);
    const auto& mm = s.m_minus;
    const auto& mp = s.m_plus;
    return (one - s.z) * mm[0] + mul_i(mm[1]) + (one + s.z) * mp[0] - mul_i(mp[1]) - T(4.0);
}

template <RealScalar T>
BranchComplex<T> log_00(const BranchComplex<T>& z) {
    return log_00(square_seeds(z, 0));
}

template <RealScalar T>
struct RowCol {
    std::vector<BranchComplex<T>> col; ///< entries (k, 0)
    std::vector<BranchComplex<T>> row; ///< entries (0, j)
};

/// First column (S_k0) and row (S_0j) of the Stieltjes table.
template <RealScalar T>
RowCol<T> stieltjes_first_rowcol(const SquareSeeds<T>& s) {
    using C = BranchComplex<T>;
    const T one(1.0);
    const C w = rotate_minus_i(s.z);
    const auto a = modlog_seq(w - one, s.p);
    const auto b = modlog_seq(w + one, s.p);
    RowCol<T> rc;
    const auto n = static_cast<std::size_t>(s.p) + 1;
    rc.col.resize(n);
    rc.row.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const C d = mul_i(a[k] - b[k]);
        rc.col[k] = (k % 2 == 0) ? d : -d;
        rc.row[k] = s.m_plus[k] - s.m_minus[k];
    }
    return rc;
}

template <RealScalar T>
RowCol<T> stieltjes_first_rowcol(const BranchComplex<T>& z, int p) {
    return stieltjes_first_rowcol(square_seeds(z, p));
}

template <RealScalar T>
RowCol<T> log_first_rowcol(const SquareSeeds<T>& s, const TriTable<T>& f1, const TriTable<T>& f2) {
    using C = BranchComplex<T>;
    const int p = s.p;
    const auto n = static_cast<std::size_t>(p) + 1;
    RowCol<T> rc;
    rc.col.resize(n);
    rc.row.resize(n);
    const C l00 = log_00(s);
    rc.col[0] = l00;
    rc.row[0] = l00;
    for (int k = 0; k < p; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const C prev = k >= 1 ? rc.col[ku - 1] : C{};
        const C inner = s.z * rc.col[ku] - f1(k, 0) * T(2.0) + f2(k, 0);
        rc.col[ku + 1] = (inner * T(2.0 * k + 1.0) - prev * T(k - 2.0)) / T(k + 3.0);
    }
    for (int j = 0; j < p; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const C prev = j >= 1 ? rc.row[ju - 1] : C{};
        const C inner = s.z * rc.row[ju] - f2(0, j) * T(2.0) + f1(0, j);
        // divide by i (j+3): multiply by -i
        rc.row[ju + 1] = rotate_minus_i(inner * T(2.0 * j + 1.0) - mul_i(prev) * T(j - 2.0)) / T(j + 3.0);
    }
    return rc;
}

template <RealScalar T>
RowCol<T> log_first_rowcol(const BranchComplex<T>& z, int p) {
    const auto s = square_seeds(z, p);
    return log_first_rowcol(s, rhs_F1(s), rhs_F2(s));
}

/// The complex logarithmic table for all k + j <= p, given precomputed
/// right-hand sides.
template <RealScalar T>
TriTable<T> log_table(const SquareSeeds<T>& s, const TriTable<T>& f1, const TriTable<T>& f2) {
    using C = BranchComplex<T>;
    const int p = s.p;
    TriTable<T> L(TableKind::Log, p, s.z);
    const auto rc = log_first_rowcol(s, f1, f2);
    for (int k = 0; k <= p; ++k) L(k, 0) = rc.col[static_cast<std::size_t>(k)];
    for (int j = 0; j <= p; ++j) L(0, j) = rc.row[static_cast<std::size_t>(j)];

    auto F = [&](int k, int j) { return f2(k, j) - f1(k, j); };
    for (int l = 0; l < p / 2; ++l) {
        const T w(2.0 * l + 1.0);
        // column l+1 from columns l and l-1
        for (int r = l + 1; r <= p - l - 1; ++r) {
            const C cl = (L(r + 1, l) - L(r - 1, l)) / T(2.0 * r + 1.0);
            const C back = l >= 1 ? L(r, l - 1) : C{};
            L(r, l + 1) = back + mul_i((F(r, l) - cl) * w);
        }
        // row l+1 from rows l and l-1
        for (int c = l + 2; c <= p - l - 1; ++c) {
            const C lc = (L(l, c + 1) - L(l, c - 1)) / T(2.0 * c + 1.0);
            const C back = l >= 1 ? L(l - 1, c) : C{};
            L(l + 1, c) = back + (F(l, c) + mul_i(lc)) * w;
        }
    }
    return L;
}

template <RealScalar T>
TriTable<T> log_table(const BranchComplex<T>& z, int p) {
    const auto s = square_seeds(z, p);
    return log_table(s, rhs_F1(s), rhs_F2(s));
}

template <RealScalar T>
TriTable<T> stieltjes_table(const SquareSeeds<T>& s) {
    using C = BranchComplex<T>;
    const int p = s.p;
    TriTable<T> S(TableKind::Stieltjes, p, s.z);
    const auto rc = stieltjes_first_rowcol(s);
    for (int k = 0; k <= p; ++k) S(k, 0) = rc.col[static_cast<std::size_t>(k)];
    for (int j = 0; j <= p; ++j) S(0, j) = rc.row[static_cast<std::size_t>(j)];

    // (B v)_r for the Legendre multiplication matrix acting along the first index.
    auto bs_col = [&](int r, int c) {
        if (r == 0) return S(1, c);
        return (S(r - 1, c) * T(static_cast<double>(r)) + S(r + 1, c) * T(r + 1.0)) / T(2.0 * r + 1.0);
    };
    auto bs_row = [&](int r, int c) {
        if (c == 0) return S(r, 1);
        return (S(r, c - 1) * T(static_cast<double>(c)) + S(r, c + 1) * T(c + 1.0)) / T(2.0 * c + 1.0);
    };
    for (int l = 0; l < p / 2; ++l) {
        const T w(2.0 * l + 1.0);
        for (int r = l + 1; r <= p - l - 1; ++r) {
            const C back = l >= 1 ? mul_i(S(r, l - 1)) * T(static_cast<double>(l)) : C{};
            S(r, l + 1) = rotate_minus_i((s.z * S(r, l) - bs_col(r, l)) * w - back) / T(l + 1.0);
        }
        for (int c = l + 2; c <= p - l - 1; ++c) {
            const C back = l >= 1 ? S(l - 1, c) * T(static_cast<double>(l)) : C{};
            S(l + 1, c) = ((s.z * S(l, c) - mul_i(bs_row(l, c))) * w - back) / T(l + 1.0);
        }
    }
    return S;
}

template <RealScalar T>
TriTable<T> stieltjes_table(const BranchComplex<T>& z, int p) {
    return stieltjes_table(square_seeds(z, p));
}

/// Both tables at one point from a single set of seeds.
template <RealScalar T>
struct SquareTables {
    TriTable<T> log;
    TriTable<T> stieltjes;
};

template <RealScalar T>
SquareTables<T> square_tables(const BranchComplex<T>& z, int p) {
    const auto s = square_seeds(z, p);
    return {log_table(s, rhs_F1(s), rhs_F2(s)), stieltjes_table(s)};
}

/// Potential sum f_kj Re L_kj and gradient (sum f_kj Re S_kj, -sum f_kj Im S_kj).
template <RealScalar T>
PotentialResult<T> potential_eval(const CoeffMatrix<T>& c, const BranchComplex<T>& pt) {
    const int p = c.m + c.n;
    if (p > kMaxDegree)
        throw CapacityError("degree " + std::to_string(p) + " exceeds limit " + std::to_string(kMaxDegree));
    const auto tabs = square_tables(pt, p);
    PotentialResult<T> r;
    r.far_field_advisory = tabs.log.far_field_advisory();
    for (int k = 0; k <= c.m; ++k)
        for (int j = 0; j <= c.n; ++j) {
            const T f = c(k, j);
            if (f == T(0.0)) continue;
            r.potential += f * tabs.log(k, j).re;
            r.grad_x += f * tabs.stieltjes(k, j).re;
            r.grad_y -= f * tabs.stieltjes(k, j).im;
        }
    return r;
}

/// Runtime precision selection over double inputs and outputs.
inline PotentialResult<double> potential_eval(const CoeffMatrix<double>& c, double x, double y,
                                              Precision prec) {
    if (prec == Precision::Double) return potential_eval(c, BranchComplex<double>(x, y));
    CoeffMatrix<DoubleWord> cw(c.m, c.n);
    for (std::size_t i = 0; i < c.f.size(); ++i) cw.f[i] = DoubleWord(c.f[i]);
    const auto r = potential_eval(cw, convert_from_double<DoubleWord>(x, y));
    return {r.potential.to_double(), r.grad_x.to_double(), r.grad_y.to_double(), r.far_field_advisory};
}

} // namespace potrec
