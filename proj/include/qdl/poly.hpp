#pragma once

// Dense polynomials over F_q, coefficients lowest-degree first.
//
// A Poly is normalized: no trailing zero limbs, so the zero polynomial is the
// empty vector and degree(zero) = -1.  Monic polynomials carry their leading 1
// explicitly; the constant polynomial 1 is {1} with degree 0.
//
// Monic enumeration order is lexicographic on the coefficient tuple with the
// constant term moving fastest: the monic f of degree n with index i has
// coeff[j] = (i / q^j) mod q.  Index ranges therefore chunk the stream by
// leading-coefficient prefix.

#include "field.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace qdl {

using Poly = std::vector<uint32_t>;

inline int degree(const Poly& f) { return (int)f.size() - 1; }
inline bool is_zero(const Poly& f) { return f.empty(); }

inline void normalize(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline bool is_monic(const Poly& f) { return !f.empty() && f.back() == 1; }

inline Poly poly_one() { return Poly{1}; }
inline Poly poly_x() { return Poly{0, 1}; }
inline Poly poly_const(uint32_t c) { return c ? Poly{c} : Poly{}; }

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint32_t x = i < a.size() ? a[i] : 0;
        uint32_t y = i < b.size() ? b[i] : 0;
        r[i] = F.add(x, y);
    }
    normalize(r);
    return r;
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint32_t x = i < a.size() ? a[i] : 0;
        uint32_t y = i < b.size() ? b[i] : 0;
        r[i] = F.sub(x, y);
    }
    normalize(r);
    return r;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return r;
}

inline Poly scale(const Field& F, const Poly& a, uint32_t c) {
    if (!c) return {};
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
    return r;
}

// a = q*b + r with deg r < deg b; returns {q, r}
inline std::pair<Poly, Poly> divrem(const Field& F, Poly a, const Poly& b) {
    assert(!b.empty());
    if (degree(a) < degree(b)) return {Poly{}, a};
    Poly q(degree(a) - degree(b) + 1, 0);
    uint32_t binv = F.inv(b.back());
    for (int i = degree(a); i >= degree(b); --i) {
        if (a[i] == 0) continue;
        uint32_t c = F.mul(a[i], binv);
        q[i - degree(b)] = c;
        for (int j = 0; j <= degree(b); ++j)
            a[i - degree(b) + j] = F.sub(a[i - degree(b) + j], F.mul(c, b[j]));
    }
    normalize(a);
    return {q, a};
}

inline Poly mod(const Field& F, const Poly& a, const Poly& b) { return divrem(F, a, b).second; }

inline Poly make_monic(const Field& F, const Poly& a) {
    if (a.empty() || a.back() == 1) return a;
    return scale(F, a, F.inv(a.back()));
}

inline Poly gcd(const Field& F, Poly a, Poly b) {
    while (!b.empty()) {
        Poly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(F, a);
}

inline Poly derivative(const Field& F, const Poly& f) {
    if (f.size() <= 1) return {};
    Poly r(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = F.reduce((uint64_t)f[i] * (i % F.q()));
    normalize(r);
    return r;
}

inline uint32_t eval(const Field& F, const Poly& f, uint32_t x) {
    uint32_t r = 0;
    for (size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
    return r;
}

inline Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) {
    return mod(F, mul(F, a, b), m);
}

inline Poly powmod(const Field& F, Poly a, uint64_t e, const Poly& m) {
    Poly r = poly_one();
    a = mod(F, a, m);
    while (e) {
        if (e & 1) r = mulmod(F, r, a, m);
        a = mulmod(F, a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool is_squarefree(const Field& F, const Poly& f) {
    if (degree(f) <= 0) return degree(f) == 0;
    Poly d = derivative(F, f);
    if (d.empty()) return false; // f = g(x^p) is a p-th power up to factors
    return degree(gcd(F, f, d)) == 0;
}

// ---------------------------------------------------------------------------
// monic enumeration
// ---------------------------------------------------------------------------

inline uint64_t pow_u64(uint64_t b, unsigned e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// number of monic polynomials of degree n
inline uint64_t monic_count(const Field& F, int n) {
    assert(n >= 0);
    return pow_u64(F.q(), (unsigned)n);
}

inline Poly monic_from_index(const Field& F, int n, uint64_t idx) {
    Poly f((size_t)n + 1, 0);
    for (int j = 0; j < n; ++j) {
        f[j] = (uint32_t)(idx % F.q());
        idx /= F.q();
    }
    f[n] = 1;
    return f;
}

inline uint64_t monic_to_index(const Field& F, const Poly& f) {
    uint64_t idx = 0;
    for (int j = degree(f) - 1; j >= 0; --j) idx = idx * F.q() + f[j];
    return idx;
}

template <class Fn>
inline void for_each_monic(const Field& F, int n, Fn&& fn) {
    const uint64_t total = monic_count(F, n);
    Poly f((size_t)n + 1, 0);
    f[n] = 1;
    for (uint64_t i = 0; i < total; ++i) {
        fn(f);
        // odometer, constant term fastest
        for (int j = 0; j < n; ++j) {
            if (++f[j] < F.q()) break;
            f[j] = 0;
        }
    }
}

// all polynomials of degree < n (residues mod a degree-n modulus)
template <class Fn>
inline void for_each_residue(const Field& F, int n, Fn&& fn) {
    const uint64_t total = pow_u64(F.q(), (unsigned)n);
    Poly r;
    r.reserve(n);
    for (uint64_t i = 0; i < total; ++i) {
        fn(r);
        int j = 0;
        for (; j < n; ++j) {
            if ((int)r.size() <= j) r.resize(j + 1, 0);
            if (++r[j] < F.q()) break;
            r[j] = 0;
        }
        normalize(r);
    }
}

inline std::string to_string(const Poly& f) {
    if (f.empty()) return "0";
    std::string s;
    for (int i = degree(f); i >= 0; --i) {
        if (!f[i]) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || f[i] != 1) s += std::to_string(f[i]);
        if (i > 0) {
            s += "x";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

} // namespace qdl
