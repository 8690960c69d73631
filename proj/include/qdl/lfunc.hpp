#pragma once

// L(u, chi_D) for D monic squarefree of odd degree 2g+1: an integer
// polynomial of degree 2g with c_0 = 1, c_n = sum_{f in M_n} chi_D(f),
// functional-equation symmetry c_{2g-n} = q^{g-n} c_n, and all zeros on
// |u| = q^{-1/2} (Weil).
//
// The prime-power coefficients a_n of u L'/L (a_n = sum_{f in M_n}
// Lambda(f) chi_D(f)) are tied to the c_n by the Newton recurrence
// n c_n = sum_{k<=n} a_k c_{n-k}; both directions are exact over the
// integers and each is implemented as a cross-check on the other.

#include "charsums.hpp"
#include "factor.hpp"
#include "field.hpp"
#include "poly.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qdl {

struct LPolynomial {
    int g = 0;
    std::vector<int64_t> c; // c[0..2g]
};

inline LPolynomial l_polynomial(const Field& F, const Poly& D) {
    if (!is_monic(D) || degree(D) % 2 == 0)
        throw std::invalid_argument("l_polynomial: D must be monic of odd degree");
    if (!is_squarefree(F, D))
        throw std::invalid_argument("l_polynomial: D must be squarefree");
    LPolynomial L;
    L.g = (degree(D) - 1) / 2;
    L.c.assign(2 * L.g + 1, 0);
    L.c[0] = 1;
    uint32_t a[kMaxDeg + 1], b[kMaxDeg + 1];
    for (int n = 1; n <= 2 * L.g; ++n) {
        int64_t s = 0;
        for_each_monic(F, n, [&](const Poly& f) {
            int da = degree(D), db = n;
            for (int i = 0; i <= da; ++i) a[i] = D[i];
            for (int i = 0; i <= db; ++i) b[i] = f[i];
            s += detail::symbol_kernel(F, a, da, b, db);
        });
        L.c[n] = s;
    }
    return L;
}

// max_n |c_{2g-n} - q^{g-n} c_n| over 0 <= n <= g; 0 for a genuine L-polynomial
inline double functional_equation_defect(const Field& F, const LPolynomial& L) {
    double defect = 0;
    for (int n = 0; n <= L.g; ++n) {
        int64_t expect = (int64_t)pow_u64(F.q(), (unsigned)(L.g - n)) * L.c[n];
        defect = std::max(defect, (double)std::llabs(L.c[2 * L.g - n] - expect));
    }
    return defect;
}

// a_1..a_N from the L-coefficients: a_n = n c_n - sum_{k=1}^{n-1} a_k c_{n-k}
inline std::vector<int64_t> lambda_from_l(const LPolynomial& L, int N) {
    std::vector<int64_t> a(N + 1, 0);
    for (int n = 1; n <= N; ++n) {
        int64_t s = n <= 2 * L.g ? (int64_t)n * L.c[n] : 0;
        for (int k = 1; k < n; ++k)
            if (n - k <= 2 * L.g) s -= a[k] * L.c[n - k];
        a[n] = s;
    }
    return a;
}

// inverse direction: c_1..c_{2g} from prime-power sums a_1..a_{2g}
inline std::vector<int64_t> l_from_lambda(const std::vector<int64_t>& a, int g) {
    std::vector<int64_t> c(2 * g + 1, 0);
    c[0] = 1;
    for (int n = 1; n <= 2 * g; ++n) {
        int64_t s = 0;
        for (int k = 1; k <= n; ++k) s += a[k] * c[n - k];
        if (s % n != 0) throw std::logic_error("l_from_lambda: Newton recurrence not divisible");
        c[n] = s / n;
    }
    return c;
}

// a_1..a_N by direct prime-power summation (independent of the L-polynomial)
inline std::vector<int64_t> lambda_direct(const Field& F, const Poly& D, int N,
                                          const std::vector<std::vector<Poly>>& primes_by_degree) {
    std::vector<int64_t> a(N + 1, 0);
    for (int m = 1; m <= N; ++m)
        for (const Poly& P : primes_by_degree[m]) {
            int chi = residue_symbol(F, D, P);
            if (!chi) continue;
            for (int k = 1; k * m <= N; ++k)
                a[k * m] += (int64_t)m * (k % 2 ? chi : 1);
        }
    return a;
}

inline cplx l_eval(const LPolynomial& L, cplx u) {
    cplx s = 0;
    for (int n = 2 * L.g; n >= 0; --n) s = s * u + (double)L.c[n];
    return s;
}

struct ZeroSet {
    std::vector<cplx> zeros; // the 2g roots of L(u), repeated with multiplicity
};

namespace detail {

// exact squarefree part f / gcd(f, f') of an integer polynomial, via a
// primitive pseudo-remainder sequence in 128-bit arithmetic (degrees and
// heights here are tiny, so no overflow)
inline std::vector<int64_t> squarefree_part_int(std::vector<int64_t> f) {
    using I = __int128;
    auto deg = [](const std::vector<I>& a) { return (int)a.size() - 1; };
    auto strip = [](std::vector<I>& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    };
    auto content = [](const std::vector<I>& a) {
        I g = 0;
        for (I x : a) {
            I y = x < 0 ? -x : x;
            while (y) {
                I t = g % y;
                g = y;
                y = t;
            }
        }
        return g == 0 ? (I)1 : g;
    };
    std::vector<I> a(f.begin(), f.end()), b;
    strip(a);
    for (size_t i = 1; i < f.size(); ++i) b.push_back((I)f[i] * (I)i);
    strip(b);
    while (!b.empty()) {
        if (deg(a) < deg(b)) {
            std::swap(a, b);
            continue;
        }
        // primitive pseudo-remainder: r <- lb r - lc(r) x^{deg r - deg b} b, repeatedly
        std::vector<I> r = a;
        const I lb = b.back();
        const int db = deg(b);
        for (int i = deg(r); i >= db; --i) {
            I c = r[i];
            for (int j = 0; j < i; ++j) r[j] *= lb;
            r[i] = 0;
            for (int j = 0; j < db; ++j) r[i - db + j] -= c * b[j];
        }
        r.resize(db);
        strip(r);
        if (!r.empty()) {
            I ct = content(r);
            for (auto& x : r) x /= ct;
        }
        a = std::move(b);
        b = std::move(r);
    }
    // a is gcd(f, f') up to content; divide f by it exactly
    I ca = content(a);
    for (auto& x : a) x /= ca;
    if (deg(a) == 0) return f;
    std::vector<I> fI(f.begin(), f.end());
    std::vector<I> q(deg(fI) - deg(a) + 1, 0);
    for (int i = deg(fI); i >= deg(a); --i) {
        // a is not monic in general; the quotient over Q has integer values
        // here because gcd(f, f')|f with matching leading structure, so use
        // rational-free exact division by scaling: divide only when divisible
        I c = fI[i];
        if (c % a.back() != 0) throw std::logic_error("squarefree_part_int: non-exact division");
        I t = c / a.back();
        q[i - deg(a)] = t;
        for (int j = 0; j <= deg(a); ++j) fI[i - deg(a) + j] -= t * a[j];
    }
    std::vector<int64_t> out(q.size());
    for (size_t i = 0; i < q.size(); ++i) out[i] = (int64_t)q[i];
    return out;
}

} // namespace detail

// all complex roots: exact squarefree reduction, Durand-Kerner on the simple
// roots, Newton polish, multiplicities recovered from higher derivatives
inline ZeroSet zeros(const Field& F, const LPolynomial& L, double rh_alarm = 1e-6) {
    const int d = 2 * L.g;
    std::vector<int64_t> sf = detail::squarefree_part_int(L.c);
    const int ds = (int)sf.size() - 1;
    std::vector<cplx> p(ds + 1);
    for (int n = 0; n <= ds; ++n) p[n] = (double)sf[n] / (double)sf[ds];
    auto eval_p = [&](cplx z) {
        cplx s = 0;
        for (int n = ds; n >= 0; --n) s = s * z + p[n];
        return s;
    };
    auto eval_dp = [&](cplx z) {
        cplx s = 0;
        for (int n = ds; n >= 1; --n) s = s * z + (double)n * p[n];
        return s;
    };
    std::vector<cplx> z(ds);
    const cplx seed(0.4, 0.9);
    cplx w = 1;
    for (int i = 0; i < ds; ++i) {
        w *= seed;
        z[i] = w;
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0;
        for (int i = 0; i < ds; ++i) {
            cplx denom = 1;
            for (int j = 0; j < ds; ++j)
                if (j != i) denom *= z[i] - z[j];
            cplx step = eval_p(z[i]) / denom;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15) break;
    }
    for (int i = 0; i < ds; ++i)
        for (int it = 0; it < 10; ++it) {
            cplx dp = eval_dp(z[i]);
            if (dp == 0.0) break;
            cplx step = eval_p(z[i]) / dp;
            z[i] -= step;
            if (std::abs(step) < 1e-16) break;
        }
    // multiplicities in the original polynomial from derivative magnitudes
    std::vector<cplx> full(d + 1);
    for (int n = 0; n <= d; ++n) full[n] = (double)L.c[n];
    ZeroSet out;
    for (int i = 0; i < ds; ++i) {
        std::vector<cplx> der = full;
        int mult = 0;
        for (int k = 0; k < d; ++k) {
            cplx v = 0;
            for (int n = (int)der.size() - 1; n >= 0; --n) v = v * z[i] + der[n];
            double scale = 0;
            for (const cplx& c : der) scale += std::abs(c);
            if (std::abs(v) > 1e-6 * scale) break;
            ++mult;
            std::vector<cplx> next(der.size() - 1);
            for (size_t n = 1; n < der.size(); ++n) next[n - 1] = (double)n * der[n];
            der = next;
        }
        for (int k = 0; k < std::max(1, mult); ++k) out.zeros.push_back(z[i]);
    }
    if ((int)out.zeros.size() != d) throw std::logic_error("zeros: multiplicity bookkeeping failed");
    const double circle = 1.0 / std::sqrt((double)F.q());
    for (const cplx& r : out.zeros)
        if (std::abs(std::abs(r) - circle) > rh_alarm)
            throw std::runtime_error("zeros: root off the critical circle (upstream bug)");
    return out;
}

} // namespace qdl
