#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mpfr_ref.hpp"
#include "potrec/branchlog.hpp"

using potrec::BetaRegion;
using potrec::DoubleWord;
using potrec::MRegion;
using C = potrec::BranchComplex<double>;
using CW = potrec::BranchComplex<DoubleWord>;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();
} // namespace

TEST(Clog, Examples) {
    const C one = potrec::clog(C(1.0, 0.0));
    EXPECT_EQ(one.re, 0.0);
    EXPECT_EQ(one.im, 0.0);
    const C m1 = potrec::clog(C(-1.0, 0.0));
    EXPECT_EQ(m1.re, 0.0);
    EXPECT_EQ(m1.im, pi);
    const C m1n = potrec::clog(C(-1.0, -0.0));
    EXPECT_EQ(m1n.im, -pi);
}

TEST(Clog, ThreeFourAgainstMpfr) {
    const CW w = potrec::clog(CW(DoubleWord(3.0), DoubleWord(4.0)));
    testref::Mp re(5.0), im(4.0), x(3.0);
    mpfr_log(re.v, re.v, MPFR_RNDN);
    mpfr_atan2(im.v, im.v, x.v, MPFR_RNDN);
    EXPECT_LE(testref::rel_err(w.re, re), std::ldexp(1.0, -80));
    EXPECT_LE(testref::rel_err(w.im, im), std::ldexp(1.0, -80));
    const C d = potrec::clog(C(3.0, 4.0));
    EXPECT_NEAR(d.re, 1.6094379124341003, 4 * eps);
    EXPECT_NEAR(d.im, 0.9272952180016122, 4 * eps);
}

TEST(Clog, ZeroIsDomainError) {
    EXPECT_THROW(potrec::clog(C(0.0, 0.0)), potrec::DomainError);
    EXPECT_THROW(potrec::clog(C(-0.0, -0.0)), potrec::DomainError);
    EXPECT_THROW(potrec::clog_minus(C(0.0, 0.0)), potrec::DomainError);
}

TEST(Clog, OverflowSafeModulus) {
    const C big = potrec::clog(C(1e300, 1e300));
    EXPECT_NEAR(big.re, std::log(1e300) + 0.5 * std::log(2.0), 1e-12);
    EXPECT_NEAR(big.im, pi / 4, 1e-15);
    const C tiny = potrec::clog(C(3e-320, 4e-320));
    EXPECT_TRUE(std::isfinite(tiny.re));
    EXPECT_NEAR(potrec::abs(C(3e-200, 4e-200)), 5e-200, 1e-214);
}

TEST(ClogMinus, Examples) {
    const C a = potrec::clog_minus(C(-1.0, 0.0));
    EXPECT_EQ(a.re, 0.0);
    EXPECT_EQ(a.im, -pi);
    const C b = potrec::clog_minus(C(2.0, 0.0));
    EXPECT_EQ(b.re, std::log(2.0));
    EXPECT_EQ(b.im, 0.0);
    const C c = potrec::clog_minus(C(-2.0, 0.0));
    EXPECT_DOUBLE_EQ(c.re, std::log(2.0));
    EXPECT_EQ(c.im, -pi);
    EXPECT_EQ(potrec::clog_minus(C(-2.0, -0.0)).im, -pi);
}

TEST(ClogMinus, AgreesWithClogOffTheCut) {
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const C z(u(g), u(g));
        const C a = potrec::clog(z), b = potrec::clog_minus(z);
        EXPECT_EQ(a.re, b.re);
        EXPECT_EQ(a.im, b.im);
    }
    for (double x : {-0.25, -1.0, -3.5}) {
        const C a = potrec::clog(C(x, 0.0)), b = potrec::clog_minus(C(x, 0.0));
        EXPECT_EQ(a.re, b.re);
        EXPECT_DOUBLE_EQ(a.im - b.im, 2 * pi);
        const C an = potrec::clog(C(x, -0.0));
        EXPECT_EQ(an.im, potrec::clog_minus(C(x, -0.0)).im);
    }
}

TEST(ClogMinus, DoubleWordOnCut) {
    const CW w = potrec::clog_minus(CW(DoubleWord(-2.0), DoubleWord(0.0)));
    EXPECT_EQ(w.im, -potrec::dw_const::pi);
}

TEST(Clog, ExpRoundTrip) {
    // exp evaluated in double-word so that only the rounding of clog counts.
    std::mt19937_64 g(22);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const C z(u(g), u(g));
        if (z.im == 0.0) continue;
        const C w = potrec::clog(z);
        const DoubleWord r = potrec::exp(DoubleWord(w.re));
        const auto [s, c] = potrec::sin_cos(DoubleWord(w.im));
        const double dx = (r * c - DoubleWord(z.re)).to_double();
        const double dy = (r * s - DoubleWord(z.im)).to_double();
        ASSERT_LE(std::hypot(dx, dy), 4 * eps * potrec::abs(z)) << z.re << " " << z.im;
    }
}

TEST(Rotate, Examples) {
    const C a = potrec::rotate_minus_i(C(0.0, 1.0));
    EXPECT_EQ(a.re, 1.0);
    EXPECT_EQ(a.im, 0.0);
    const C b = potrec::rotate_minus_i(C(0.0, 0.5));
    EXPECT_EQ(b.re, 0.5);
    EXPECT_EQ(b.im, 0.0);
    EXPECT_TRUE(std::signbit(b.im));
    const C c = potrec::rotate_minus_i(C(2.0, 3.0));
    EXPECT_EQ(c.re, 3.0);
    EXPECT_EQ(c.im, -2.0);
    EXPECT_FALSE(std::signbit(potrec::rotate_minus_i(C(-0.0, 0.5)).im));
}

TEST(Rotate, RightLimitOnCut) {
    // log(-i(+0 + iy)) for y < 0 must match the limit from x > 0.
    const C on = potrec::clog(potrec::rotate_minus_i(C(0.0, -0.5)));
    const C near = potrec::clog(potrec::rotate_minus_i(C(1e-300, -0.5)));
    EXPECT_EQ(on.im, near.im);
    EXPECT_EQ(on.im, -pi);
}

TEST(MRegionTest, Examples) {
    EXPECT_EQ(potrec::classify_m_region(C(2.0, 0.0)), MRegion::RightOrTop);
    EXPECT_EQ(potrec::classify_m_region(C(-0.5, -2.0)), MRegion::LeftBottom);
    EXPECT_EQ(potrec::classify_m_region(C(-0.5, 0.2)), MRegion::LeftStrip);
    EXPECT_EQ(potrec::classify_m_region(C(0.0, 0.2)), MRegion::RightOrTop);
    EXPECT_EQ(potrec::classify_m_region(C(-0.0, 0.2)), MRegion::LeftStrip);
    EXPECT_EQ(potrec::classify_m_region(C(-0.0, -1.0)), MRegion::LeftBottom);
    EXPECT_EQ(potrec::classify_m_region(C(-3.0, 1.0)), MRegion::RightOrTop);
    EXPECT_THROW(potrec::classify_m_region(C(std::nan(""), 0.0)), potrec::DomainError);
}

TEST(MRegionTest, PartitionsGrid) {
    int counts[3] = {0, 0, 0};
    for (int sign = 0; sign < 2; ++sign) {
        for (int i = 0; i <= 200; ++i) {
            for (int j = 0; j <= 200; ++j) {
                double x = -3.0 + 6.0 * i / 200.0;
                const double y = -3.0 + 6.0 * j / 200.0;
                if (sign == 1) {
                    if (x != 0.0) continue;
                    x = -0.0;
                }
                const bool left = x < 0.0 || (x == 0.0 && std::signbit(x));
                const int n = int(!left || y >= 1.0) + int(left && y <= -1.0) +
                              int(left && -1.0 < y && y < 1.0);
                ASSERT_EQ(n, 1) << x << " " << y;
                const MRegion r = potrec::classify_m_region(C(x, y));
                if (!left || y >= 1.0) EXPECT_EQ(r, MRegion::RightOrTop);
                else if (y <= -1.0) EXPECT_EQ(r, MRegion::LeftBottom);
                else EXPECT_EQ(r, MRegion::LeftStrip);
                ++counts[static_cast<int>(r)];
            }
        }
    }
    EXPECT_EQ(counts[0] + counts[1] + counts[2], 201 * 201 + 201);
    EXPECT_GT(counts[1], 0);
    EXPECT_GT(counts[2], 0);
}

TEST(BetaRegionTest, Examples) {
    EXPECT_EQ(potrec::classify_beta_region(C(0.0, 0.0)), BetaRegion::InSquare);
    EXPECT_EQ(potrec::classify_beta_region(C(-2.0, 0.5)), BetaRegion::LeftOfSquareStrip);
    EXPECT_EQ(potrec::classify_beta_region(C(2.0, 3.0)), BetaRegion::Elsewhere);
    EXPECT_EQ(potrec::classify_beta_region(C(1.0, -1.0)), BetaRegion::InSquare);
    EXPECT_EQ(potrec::classify_beta_region(C(-2.0, 1.0)), BetaRegion::Elsewhere);
    EXPECT_EQ(potrec::classify_beta_region(C(2.0, 0.5)), BetaRegion::Elsewhere);
    EXPECT_THROW(potrec::classify_beta_region(C(0.0, std::nan(""))), potrec::DomainError);
}

TEST(Xlog, ZeroLimit) {
    const C a = potrec::xlog(C(0.0, 0.0));
    EXPECT_EQ(a.re, 0.0);
    EXPECT_EQ(a.im, 0.0);
    const C b = potrec::xlog_minus(C(-0.0, 0.0));
    EXPECT_EQ(b.re, 0.0);
    const C c = potrec::xlog(C(3.0, 0.0));
    EXPECT_DOUBLE_EQ(c.re, 3.0 * std::log(3.0));
}
