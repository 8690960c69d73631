#pragma once

// Factorization of monic polynomials over F_q and the standard arithmetic
// functions built on it: Lambda, mu, phi(P^j), pi_q(n).
//
// Factorization runs distinct-degree splitting (repeated gcd with x^{q^i}-x)
// and then Cantor-Zassenhaus equal-degree splitting with a seeded RNG.  The
// factor list is sorted by (degree, coefficient tuple) afterwards, so the
// output never depends on the seed.

#include "field.hpp"
#include "poly.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>

namespace qdl {

struct Factorization {
    // (irreducible monic, multiplicity), sorted by degree then lex coeffs
    std::vector<std::pair<Poly, int>> factors;
    uint32_t unit = 1;
};

inline bool poly_less(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

inline bool is_irreducible(const Field& F, const Poly& f) {
    int n = degree(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    // x^{q^n} = x (mod f) and gcd(x^{q^{n/r}} - x, f) = 1 for primes r | n
    Poly x = poly_x();
    Poly h = x;
    std::vector<int> proper; // n / r for prime r | n
    int m = n;
    for (int r = 2; r * r <= m; ++r)
        if (m % r == 0) {
            proper.push_back(n / r);
            while (m % r == 0) m /= r;
        }
    if (m > 1) proper.push_back(n / m);
    std::sort(proper.begin(), proper.end());
    int step = 0;
    size_t k = 0;
    while (step < n) {
        h = powmod(F, h, F.q(), f); // h = x^{q^{step+1}} mod f
        ++step;
        if (k < proper.size() && proper[k] == step) {
            Poly g = gcd(F, sub(F, h, x), f);
            if (degree(g) != 0) return false;
            ++k;
        }
    }
    return sub(F, h, x).empty();
}

namespace detail {

// p-th root of f when f'(x) = 0, i.e. f = g(x^p) = (g(x))^p over F_p
inline Poly pth_root(const Field& F, const Poly& f) {
    Poly r(f.size() / F.q() + 1, 0);
    for (size_t i = 0; i * F.q() < f.size(); ++i) r[i] = f[i * F.q()];
    normalize(r);
    return r;
}

// equal-degree splitting of a squarefree product of degree-d irreducibles
inline void edf(const Field& F, const Poly& f, int d, std::mt19937_64& rng,
                std::vector<Poly>& out) {
    int n = degree(f);
    if (n == d) {
        out.push_back(f);
        return;
    }
    uint64_t e = (pow_u64(F.q(), (unsigned)d) - 1) / 2;
    for (;;) {
        Poly r((size_t)n, 0);
        for (int i = 0; i < n; ++i) r[i] = (uint32_t)(rng() % F.q());
        normalize(r);
        if (r.empty()) continue;
        Poly g = gcd(F, r, f);
        if (degree(g) == 0) {
            Poly t = powmod(F, r, e, f); // t = r^{(q^d-1)/2}
            g = gcd(F, sub(F, t, poly_one()), f);
        }
        if (degree(g) > 0 && degree(g) < n) {
            edf(F, g, d, rng, out);
            edf(F, divrem(F, f, g).first, d, rng, out);
            return;
        }
    }
}

// distinct irreducible factors of a squarefree monic f
inline void ddf(const Field& F, Poly f, std::mt19937_64& rng, std::vector<Poly>& out) {
    Poly x = poly_x();
    Poly h = x;
    int d = 0;
    while (degree(f) > 2 * (d + 1) - 1 && degree(f) > 0) {
        h = powmod(F, h, F.q(), f);
        ++d;
        Poly g = gcd(F, sub(F, h, x), f);
        if (degree(g) > 0) {
            edf(F, g, d, rng, out);
            f = divrem(F, f, g).first;
            h = mod(F, h, f);
        }
    }
    if (degree(f) > 0) out.push_back(f);
}

} // namespace detail

inline Factorization factorize(const Field& F, const Poly& f_in, uint64_t seed = 0x9e3779b97f4a7c15ull) {
    if (degree(f_in) < 1) throw std::invalid_argument("factorize: constant polynomial");
    Factorization result;
    Poly f = f_in;
    if (f.back() != 1) {
        result.unit = f.back();
        f = make_monic(F, f);
    }
    std::mt19937_64 rng(seed);
    std::vector<Poly> distinct;
    Poly w = f;
    while (degree(w) > 0) {
        Poly d = derivative(F, w);
        if (d.empty()) {
            w = detail::pth_root(F, w);
            continue;
        }
        Poly s = divrem(F, w, gcd(F, w, d)).first; // squarefree, may miss p | mult factors
        detail::ddf(F, s, rng, distinct);
        for (const Poly& p : distinct)
            while (true) {
                auto [quot, rem] = divrem(F, w, p);
                if (!rem.empty()) break;
                w = quot;
            }
    }
    std::sort(distinct.begin(), distinct.end(), poly_less);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (const Poly& p : distinct) {
        int mult = 0;
        Poly w2 = f;
        while (true) {
            auto [quot, rem] = divrem(F, w2, p);
            if (!rem.empty()) break;
            w2 = quot;
            ++mult;
        }
        result.factors.emplace_back(p, mult);
    }
    return result;
}

inline Poly rebuild(const Field& F, const Factorization& fa) {
    Poly r = poly_const(fa.unit);
    for (const auto& [p, e] : fa.factors)
        for (int i = 0; i < e; ++i) r = mul(F, r, p);
    return r;
}

// Lambda(f) = d(P) if f = unit * P^k, else 0
inline int von_mangoldt(const Field& F, const Poly& f) {
    if (degree(f) < 1) throw std::invalid_argument("von_mangoldt: constant polynomial");
    Factorization fa = factorize(F, f);
    return fa.factors.size() == 1 ? degree(fa.factors[0].first) : 0;
}

inline int mobius(const Field& F, const Poly& f) {
    if (degree(f) < 0) throw std::invalid_argument("mobius: zero polynomial");
    if (degree(f) == 0) return 1;
    Factorization fa = factorize(F, f);
    for (const auto& [p, e] : fa.factors)
        if (e > 1) return 0;
    return fa.factors.size() % 2 == 0 ? 1 : -1;
}

// phi(P^j) = |P|^j - |P|^{j-1} for irreducible P
inline int64_t euler_phi_primepower(const Field& F, const Poly& P, int j) {
    if (j < 1) throw std::invalid_argument("euler_phi_primepower: j must be >= 1");
    if (!is_irreducible(F, P)) throw std::invalid_argument("euler_phi_primepower: P not irreducible");
    int64_t norm = (int64_t)pow_u64(F.q(), (unsigned)degree(P));
    int64_t r = 1;
    for (int i = 0; i < j - 1; ++i) r *= norm;
    return r * (norm - 1);
}

inline int mobius_int(int m) {
    int cnt = 0;
    for (int r = 2; r * r <= m; ++r)
        if (m % r == 0) {
            m /= r;
            if (m % r == 0) return 0;
            ++cnt;
        }
    if (m > 1) ++cnt;
    return cnt % 2 == 0 ? 1 : -1;
}

// pi_q(n) = (1/n) sum_{d | n} mu(d) q^{n/d}, exact; throws if it exceeds int64
inline int64_t irreducible_count(const Field& F, int n) {
    if (n < 1) throw std::invalid_argument("irreducible_count: n must be >= 1");
    if ((double)n * std::log2((double)F.q()) > 120) throw std::overflow_error("irreducible_count: q^n too large");
    __int128 s = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        int m = mobius_int(d);
        if (!m) continue;
        __int128 p = 1;
        for (int i = 0; i < n / d; ++i) p *= F.q();
        s += m * p;
    }
    if (s % n != 0) throw std::logic_error("irreducible_count: divisibility failed");
    s /= n;
    if (s > INT64_MAX) throw std::overflow_error("irreducible_count: result exceeds int64");
    return (int64_t)s;
}

// pi_q(n) as a double, for degree-grouped prime-sum weights at degrees where
// the exact count no longer fits an integer type
inline double pi_weight(const Field& F, int n) {
    long double s = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        int m = mobius_int(d);
        if (m) s += (long double)m * powl((long double)F.q(), (long double)(n / d));
    }
    return (double)(s / n);
}

struct DegreeCountTable {
    std::vector<int64_t> pi; // pi[n], pi[0] unused
    static DegreeCountTable build(const Field& F, int max_n) {
        DegreeCountTable t;
        t.pi.assign(max_n + 1, 0);
        for (int n = 1; n <= max_n; ++n) t.pi[n] = irreducible_count(F, n);
        return t;
    }
};

// monic irreducibles of degree n, in enumeration order
inline std::vector<Poly> primes_of_degree(const Field& F, int n) {
    std::vector<Poly> out;
    for_each_monic(F, n, [&](const Poly& f) {
        if (is_irreducible(F, f)) out.push_back(f);
    });
    return out;
}

template <class Fn>
inline void for_each_squarefree(const Field& F, int n, Fn&& fn) {
    for_each_monic(F, n, [&](const Poly& f) {
        if (is_squarefree(F, f)) fn(f);
    });
}

inline std::vector<Poly> squarefree_of_degree(const Field& F, int n) {
    std::vector<Poly> out;
    for_each_squarefree(F, n, [&](const Poly& f) { out.push_back(f); });
    return out;
}

} // namespace qdl
