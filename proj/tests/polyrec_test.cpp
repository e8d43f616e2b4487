#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "potrec/oracle.hpp"
#include "potrec/polyrec.hpp"

using potrec::DoubleWord;

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// P_n(x) = 2^-n sum_k (-1)^k C(n,k) C(2n-2k,n) x^(n-2k), summed in double-word.
DoubleWord legendre_explicit(int n, double x) {
    DoubleWord s(0.0);
    for (int k = 0; 2 * k <= n; ++k) {
        DoubleWord term = DoubleWord(binom(n, k)) * DoubleWord(binom(2 * n - 2 * k, n));
        for (int i = 0; i < n - 2 * k; ++i) term = term * DoubleWord(x);
        s = (k % 2 == 0) ? s + term : s - term;
    }
    return potrec::ldexp(s, -n);
}

double seq_scale(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

} // namespace

TEST(Legendre, Examples) {
    const auto a = potrec::legendre_seq(0.5, 2);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[0], 1.0);
    EXPECT_EQ(a[1], 0.5);
    EXPECT_EQ(a[2], -0.125);
    const auto b = potrec::legendre_seq(1.0, 5);
    for (double v : b.values) EXPECT_EQ(v, 1.0);
    const auto c = potrec::legendre_seq(0.3, 10);
    EXPECT_NEAR(c[10], 0.2514763495160157, 1e-15);
    EXPECT_NEAR(c[10], legendre_explicit(10, 0.3).to_double(), 4 * eps);
}

TEST(Legendre, MatchesExplicitSum) {
    for (double x : {-0.9, -0.31, 0.0, 0.42, 0.77, 1.0}) {
        const auto s = potrec::legendre_seq(DoubleWord(x), 20);
        for (int k = 0; k <= 20; ++k)
            EXPECT_NEAR(s[k].to_double(), legendre_explicit(k, x).to_double(), 1e-20) << k << " " << x;
    }
}

TEST(Legendre, NegativeDegreeRejected) {
    EXPECT_THROW(potrec::legendre_seq(0.1, -1), potrec::DomainError);
}

TEST(Ultra, Examples) {
    const auto m = potrec::ultra_seq(-0.5, 0.7, 2);
    EXPECT_DOUBLE_EQ(m[1], -0.7);
    EXPECT_DOUBLE_EQ(potrec::ultra_seq(-0.5, 0.0, 2)[2], 0.5);
    EXPECT_DOUBLE_EQ(potrec::ultra_seq(-1.5, 0.0, 2)[2], 1.5);
    // C_2^{(lambda)} = 2 lambda (lambda + 1) x^2 - lambda.
    for (double lam : {1.5, -0.5, -1.5}) {
        const double x = 0.37;
        EXPECT_NEAR(potrec::ultra_seq(lam, x, 2)[2], 2 * lam * (lam + 1) * x * x - lam, 4 * eps);
        EXPECT_NEAR(potrec::ultra_seq(lam, x, 1)[1], 2 * lam * x, 0.0);
    }
    EXPECT_THROW(potrec::ultra_seq(0.5, 0.1, 3), potrec::DomainError);
    EXPECT_THROW(potrec::ultra_seq(1.0, 0.1, 3), potrec::DomainError);
}

TEST(Ultra, ThreeHalvesClosedForm) {
    // C_3^{(3/2)}(x) = (35 x^3 - 15 x) / 2.
    const double x = -0.61;
    EXPECT_NEAR(potrec::ultra_seq(1.5, x, 3)[3], (35 * x * x * x - 15 * x) / 2, 8 * eps);
}

TEST(UltraExplicit, Examples) {
    const auto a = potrec::ultra_mhalf_explicit(0.7, 1);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], 1.0);
    EXPECT_EQ(a[1], -0.7);
    for (double x : {1.0, -1.0}) {
        const auto b = potrec::ultra_mhalf_explicit(x, 8);
        for (int k = 2; k <= 8; ++k) EXPECT_EQ(b[k], 0.0);
    }
    const auto e = potrec::ultra_mhalf_explicit(0.25, 6);
    const auto r = potrec::ultra_seq(-0.5, 0.25, 6);
    for (int k = 0; k <= 6; ++k) EXPECT_NEAR(e[k], r[k], 1e-14 * std::max(1e-300, std::abs(r[k])));
}

TEST(UltraExplicit, AgreesWithRecurrenceAtDegreeFifty) {
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(g);
        const auto e = potrec::ultra_mhalf_explicit(x, 50);
        const auto r = potrec::ultra_seq(-0.5, x, 50);
        const double tol = 10 * eps * seq_scale(r.values);
        for (int k = 0; k <= 50; ++k) ASSERT_NEAR(e[k], r[k], tol) << x << " " << k;
    }
}

TEST(Parity, LegendreAndUltra) {
    std::mt19937_64 g(32);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(g);
        const auto p = potrec::legendre_seq(x, 30), pm = potrec::legendre_seq(-x, 30);
        double tol = 10 * eps * seq_scale(p.values);
        for (int k = 0; k <= 30; ++k) ASSERT_NEAR(pm[k], (k % 2 ? -1 : 1) * p[k], tol);
        for (double lam : {1.5, -0.5, -1.5}) {
            const auto c = potrec::ultra_seq(lam, x, 30), cm = potrec::ultra_seq(lam, -x, 30);
            tol = 10 * eps * seq_scale(c.values);
            for (int k = 0; k <= 30; ++k) ASSERT_NEAR(cm[k], (k % 2 ? -1 : 1) * c[k], tol);
        }
    }
}

TEST(Moments, UltraMinusHalfIntegrals) {
    const auto rule = potrec::gauss_nodes<double>(20);
    std::vector<double> m(11, 0.0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto c = potrec::ultra_seq(-0.5, rule.nodes[q], 10);
        for (int k = 0; k <= 10; ++k) m[k] += rule.weights[q] * c[k];
    }
    for (int k = 0; k <= 10; ++k) {
        const double want = k == 0 ? 2.0 : (k == 2 ? 2.0 / 3.0 : 0.0);
        EXPECT_NEAR(m[k], want, 1e-12) << k;
    }
}

TEST(Moments, LegendreOrthogonality) {
    const auto rule = potrec::gauss_nodes<double>(20);
    for (int a = 0; a <= 12; ++a) {
        for (int b = 0; b <= 12; ++b) {
            double s = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const auto p = potrec::legendre_seq(rule.nodes[q], 12);
                s += rule.weights[q] * p[a] * p[b];
            }
            EXPECT_NEAR(s, a == b ? 2.0 / (2 * a + 1) : 0.0, 1e-13);
        }
    }
}
