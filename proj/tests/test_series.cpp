#include <catch2/catch_amalgamated.hpp>

#include "qdl/field.hpp"
#include "qdl/ratios.hpp"
#include "qdl/series.hpp"

#include <random>

using namespace qdl;

TEST_CASE("perron extraction") {
    SECTION("geometric partial sum 1 + q + q^2") {
        PowerSeries f = geometric_series(5.0, 1, 8);
        CHECK(perron_extract(f, 2) == cplx(31.0));
    }
    SECTION("monomials") {
        for (int k = 0; k <= 6; ++k) {
            PowerSeries f(0, 6);
            f.set(k, 1.0);
            CHECK(perron_extract(f, 4) == cplx(k <= 4 ? 1.0 : 0.0));
        }
    }
    SECTION("rejects N beyond the truncation order") {
        PowerSeries f(0, 4);
        CHECK_THROWS(perron_extract(f, 5));
    }
    SECTION("the one-level diagonal layer sums") {
        // u^2 q^{-1-2a} Z'/Z(u^2/q^{1+2a}) extracted at N = 4 gives q^{-2a} + q^{-4a}
        Field F(5);
        cplx a(0.01, 0);
        PowerSeries f = zlog_series(F, a, 6);
        cplx want = qpow(5, -2.0 * a) + qpow(5, -4.0 * a);
        CHECK(std::abs(perron_extract(f, 4) - want) < 1e-14);
        CHECK(std::abs(perron_extract(f, 5) - want) < 1e-14);
    }
    SECTION("linearity") {
        std::mt19937_64 rng(5);
        auto rnd = [&] {
            PowerSeries f(-3, 9);
            for (int n = -3; n <= 9; ++n)
                f.set(n, cplx((double)(rng() % 100) / 10.0, (double)(rng() % 100) / 10.0));
            return f;
        };
        for (int t = 0; t < 20; ++t) {
            PowerSeries f = rnd(), g = rnd();
            cplx ca(1.25, -0.5), cb(-2.0, 3.0);
            PowerSeries h = ca * f + cb * g;
            CHECK(std::abs(perron_extract(h, 6) - ca * perron_extract(f, 6) - cb * perron_extract(g, 6)) <
                  1e-12);
        }
    }
}

TEST_CASE("series arithmetic") {
    SECTION("multiply against division by unit") {
        PowerSeries a(0, 10), b(0, 10);
        std::mt19937_64 rng(17);
        for (int n = 0; n <= 10; ++n) {
            a.set(n, cplx((double)(rng() % 50), (double)(rng() % 50)));
            b.set(n, cplx((double)(rng() % 50), (double)(rng() % 50)));
        }
        b.set(0, cplx(3.0, 1.0));
        PowerSeries q = divide_by_unit(a, b);
        PowerSeries back = PowerSeries::mul(q, b, 0, 10);
        double scale = 1;
        for (int n = 0; n <= 10; ++n) scale = std::max(scale, std::abs(q[n]));
        for (int n = 0; n <= 10; ++n) CHECK(std::abs(back[n] - a[n]) < 1e-12 * scale);
    }
    SECTION("shift and floor") {
        PowerSeries f(0, 4);
        for (int n = 0; n <= 4; ++n) f.set(n, (double)(n + 1));
        PowerSeries g = f.shifted(3);
        CHECK(g.min_power() == 3);
        CHECK(g[3] == cplx(1.0));
        PowerSeries h = g.floored(5);
        CHECK(h[4] == cplx(0.0));
        CHECK(h[5] == cplx(3.0));
        CHECK(h.max_abs_below(5) == 0.0);
    }
    SECTION("annulus reciprocal: (A u^2 - 1) * series = 1 away from the window edge") {
        cplx A(9.0, 2.0);
        PowerSeries ann = reciprocal_annulus(A, 2, -30, 6);
        PowerSeries lin(0, 2);
        lin.set(0, -1.0);
        lin.set(2, A);
        PowerSeries prod = PowerSeries::mul(lin, ann, -26, 6);
        for (int n = -26; n <= 6; ++n) {
            cplx want = n == 0 ? 1.0 : 0.0;
            CHECK(std::abs(prod[n] - want) < 1e-10);
        }
    }
    SECTION("1/(X - u^{2n}) expansion") {
        cplx X(7.0, -1.0);
        PowerSeries inv = detail::inv_Xminus(X, 2, 12);
        PowerSeries lin(0, 4);
        lin.set(0, X);
        lin.set(4, -1.0);
        PowerSeries prod = PowerSeries::mul(inv, lin, 0, 8);
        for (int n = 0; n <= 8; ++n) CHECK(std::abs(prod[n] - (n == 0 ? cplx(1.0) : cplx(0.0))) < 1e-12);
    }
}
