#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "potrec/structure.hpp"

using potrec::DoubleWord;
using potrec::MatrixName;
using potrec::Rational;
using C = potrec::BranchComplex<double>;
using CW = potrec::BranchComplex<DoubleWord>;

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

CW widen(C z) { return {DoubleWord(z.re), DoubleWord(z.im)}; }

std::vector<Rational> rats(std::initializer_list<std::pair<long, long>> v) {
    std::vector<Rational> out;
    for (auto [n, d] : v) out.push_back({n, d});
    return out;
}

template <class T>
struct Tables {
    potrec::TriTable<T> L, S, f1, f2;
};

template <class T>
Tables<T> tables(const potrec::BranchComplex<T>& z, int p) {
    const auto s = potrec::square_seeds(z, p);
    auto f1 = potrec::rhs_F1(s);
    auto f2 = potrec::rhs_F2(s);
    auto L = potrec::log_table(s, f1, f2);
    auto S = potrec::stieltjes_table(s);
    return {std::move(L), std::move(S), std::move(f1), std::move(f2)};
}

} // namespace

TEST(Matrices, Examples) {
    const auto b = potrec::build_matrix_rational(MatrixName::B, 3);
    EXPECT_EQ(b.sub, rats({{1, 3}, {2, 5}, {3, 7}}));
    EXPECT_EQ(b.sup, rats({{1, 1}, {2, 3}, {3, 5}}));
    const auto a = potrec::build_matrix_rational(MatrixName::A, 3);
    EXPECT_EQ(a.sup, rats({{2, 1}, {1, 1}, {4, 5}}));
    EXPECT_EQ(a.sub, rats({{0, 1}, {1, 5}, {2, 7}}));
    const auto c = potrec::build_matrix_rational(MatrixName::C, 2);
    EXPECT_EQ(c.sup, rats({{1, 1}, {1, 3}}));
    EXPECT_EQ(c.sub, rats({{-1, 3}, {-1, 5}}));
    const auto bd = potrec::build_matrix<double>(MatrixName::B, 3);
    EXPECT_EQ(bd.size, 4);
    EXPECT_DOUBLE_EQ(bd.sub[1], 0.4);
}

TEST(Matrices, CIsADifferenceInRationals) {
    const int p = 30;
    const auto a = potrec::build_matrix_rational(MatrixName::A, p);
    const auto b = potrec::build_matrix_rational(MatrixName::B, p);
    const auto c = potrec::build_matrix_rational(MatrixName::C, p);
    for (int k = 0; k < p; ++k) {
        EXPECT_EQ(c.sup[k], a.sup[k] - b.sup[k]);
        EXPECT_EQ(c.sub[k], a.sub[k] - b.sub[k]);
        // C_{k,k+1} = 1/(2k+1) with C_{0,1} = 1; C_{k+1,k} = -1/(2k+3).
        EXPECT_EQ(c.sup[k], (Rational{1, 2L * k + 1}));
        EXPECT_EQ(c.sub[k], (Rational{-1, 2L * k + 3}));
    }
}

TEST(Matrices, BIsLegendreMultiplication) {
    const int p = 31;
    const auto b = potrec::build_matrix<double>(MatrixName::B, p);
    std::mt19937_64 g(61);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        const double x = u(g);
        const auto P = potrec::legendre_seq(x, p);
        for (int k = 0; k <= 30; ++k) {
            const double lhs = x * P[k];
            const double rhs = (k >= 1 ? b.sub[k - 1] * P[k - 1] : 0.0) + b.sup[k] * P[k + 1];
            ASSERT_NEAR(lhs, rhs, 10 * eps) << x << " " << k;
        }
    }
}

TEST(Sylvester, LogResidualExamples) {
    const auto tw = tables(widen(C(0.2, 0.3)), 10);
    const auto rw = potrec::sylvester_residual_log(tw.L, tw.f1, tw.f2, widen(C(0.2, 0.3)));
    EXPECT_LE(rw.absolute.to_double(), 1e-20);
    const C z(0.2, 0.3);
    const auto t2 = tables(z, 2);
    EXPECT_LE(potrec::sylvester_residual_log(t2.L, t2.f1, t2.f2, z).absolute, 1e-13);
}

TEST(Sylvester, StieltjesResidualExamples) {
    const CW z = widen(C(-0.4, 0.6));
    const auto t = tables(z, 10);
    EXPECT_LE(potrec::sylvester_residual_stieltjes(t.S, z).absolute.to_double(), 1e-20);
    // Without the rank-one term the (0,0) identity is off by exactly 4.
    const C zd(-0.4, 0.6);
    const auto td = tables(zd, 4);
    const auto B = potrec::build_matrix<double>(MatrixName::B, 4);
    const C lhs = zd * td.S(0, 0) - B.sup[0] * td.S(1, 0) - potrec::mul_i(td.S(0, 1)) * B.sup[0];
    EXPECT_NEAR(lhs.re, 4.0, 1e-13);
    EXPECT_NEAR(lhs.im, 0.0, 1e-13);
    EXPECT_LE(potrec::sylvester_residual_stieltjes(td.S, zd).absolute, 1e-13);
}

TEST(Sylvester, DetectsCorruption) {
    const C z(0.2, 0.3);
    auto t = tables(z, 10);
    t.L(2, 3).re += 1e-6;
    t.S(3, 2).im += 1e-6;
    EXPECT_GE(potrec::sylvester_residual_log(t.L, t.f1, t.f2, z).absolute, 1e-7);
    EXPECT_GE(potrec::sylvester_residual_stieltjes(t.S, z).absolute, 1e-7);
}

TEST(Sylvester, ShapeMismatch) {
    const C z(0.2, 0.3);
    const auto a = tables(z, 5);
    const auto b = tables(z, 6);
    EXPECT_THROW(potrec::sylvester_residual_log(a.L, b.f1, a.f2, z), potrec::ShapeError);
}

TEST(Sylvester, AllThreeIdentitiesOnOneTable) {
    std::mt19937_64 g(62);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 5; ++n) {
        const CW z = widen(C(u(g), u(g)));
        const auto t = tables(z, 20);
        EXPECT_LE(potrec::sylvester_residual_log(t.L, t.f1, t.f2, z).absolute.to_double(), 1e-20);
        EXPECT_LE(potrec::sylvester_residual_stieltjes(t.S, z).absolute.to_double(), 1e-20);
    }
}

TEST(SingularValues, KnownSpectrum) {
    // Q diag(3, 2, 1) with a complex unitary Q built from two rotations.
    potrec::DenseMatrix<double> m(3, 3);
    const double c = std::cos(0.4), s = std::sin(0.4);
    const C phase(std::cos(1.1), std::sin(1.1));
    m(0, 0) = C(3 * c); m(1, 0) = C(3 * s) * phase;
    m(0, 1) = C(-2 * s); m(1, 1) = C(2 * c) * phase;
    m(2, 2) = C(0.0, 1.0);
    const auto sv = potrec::singular_values(m);
    ASSERT_EQ(sv.size(), 3u);
    EXPECT_NEAR(sv[0], 3.0, 1e-14);
    EXPECT_NEAR(sv[1], 2.0, 1e-14);
    EXPECT_NEAR(sv[2], 1.0, 1e-14);
    EXPECT_EQ(potrec::numerical_rank(m, 0.5), 2);
}

TEST(Rank, InsideSquareAtMostThree) {
    EXPECT_LE(potrec::numerical_rank_F(C(0.3, 0.1), 20, 1e-10), 3);
}

TEST(Rank, OutsideSupportAtMostTwo) {
    const C z(2.0, 3.0);
    EXPECT_LE(potrec::numerical_rank_F(z, 20, 1e-10), 2);
    // Brute force: only the first row and column are nonzero.
    const auto F = potrec::assemble_F(z, 20);
    for (int k = 1; k <= 20; ++k)
        for (int j = 1; j <= 20; ++j) {
            EXPECT_EQ(F(k, j).re, 0.0);
            EXPECT_EQ(F(k, j).im, 0.0);
        }
    const auto sv = potrec::singular_values(F);
    EXPECT_GT(sv[1], 1e-10 * sv[0]);
    EXPECT_LE(sv[2], 1e-13 * sv[0]);
}

TEST(Rank, TrailingBlockIsRankOne) {
    for (const C z : {C(0.3, 0.1), C(-0.6, 0.8), C(-2.0, 0.25)}) {
        const auto F = potrec::assemble_F(z, 20);
        EXPECT_LE(potrec::numerical_rank(potrec::trailing_block(F, 2), 1e-10), 1) << z.re << " " << z.im;
    }
}

TEST(Rank, RequiresDegreeFour) {
    EXPECT_THROW(potrec::numerical_rank_F(C(0.3, 0.1), 3, 1e-10), potrec::DomainError);
}
