#pragma once

// Quadratic residue symbols over F_q[x], the characters chi_D, the Hayes
// exponential e(a) = e^{2 pi i a_1 / q}, and generalized Gauss sums
// G(V,f) = sum_{u mod f} chi_f(u) e(uV/f).
//
// residue_symbol(A, B) is (A/B): B a monic modulus of degree >= 1, extended
// multiplicatively from the prime case, 0 when gcd(A,B) != 1.  Since q = 1
// (mod 4), reciprocity for monic coprime A, B reads (A/B) = (B/A) with no
// sign, and the two sides are both 0 when a factor is shared, so the fast
// path below may swap numerator and modulus freely.  The slow Euler-criterion
// evaluation is kept as an independent oracle.
//
// Gauss sums for fixed modulus f are computed in bulk for every dual V with
// deg V < deg f: the pairing (u, V) -> coeff_{deg f - 1}(uV mod f) is
// bilinear, so bucketing chi_f(u) by the linear image of u and applying a
// multidimensional DFT over (Z/q)^{deg f} gives all values at once.

#include "factor.hpp"
#include "field.hpp"
#include "poly.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace qdl {

using cplx = std::complex<double>;

inline constexpr int kMaxDeg = 32;

namespace detail {

// a mod m in place, m monic of degree dm; returns degree of the remainder
inline int reduce_in_place(const Field& F, uint32_t* a, int da, const uint32_t* m, int dm) {
    for (int i = da; i >= dm; --i) {
        uint32_t c = a[i];
        if (c) {
            a[i] = 0;
            for (int j = 0; j < dm; ++j)
                a[i - dm + j] = F.sub(a[i - dm + j], F.mul(c, m[j]));
        }
    }
    int d = std::min(da, dm - 1); // entries above the input degree were never written
    while (d >= 0 && a[d] == 0) --d;
    return d;
}

// (a/b), b monic of degree db >= 1; buffers are clobbered
inline int symbol_kernel(const Field& F, uint32_t* a, int da, uint32_t* b, int db) {
    int sign = 1;
    da = reduce_in_place(F, a, da, b, db);
    for (;;) {
        if (da < 0) return 0; // shared factor (db >= 1 throughout)
        uint32_t c = a[da];
        if (c != 1) {
            if ((db & 1) && F.legendre(c) < 0) sign = -sign;
            uint32_t ci = F.inv(c);
            for (int i = 0; i <= da; ++i) a[i] = F.mul(a[i], ci);
        }
        if (da == 0) return sign;
        db = reduce_in_place(F, b, db, a, da);
        std::swap(a, b);
        std::swap(da, db);
    }
}

} // namespace detail

// (A/B) by reciprocity descent
inline int residue_symbol(const Field& F, const Poly& A, const Poly& B) {
    if (!is_monic(B) || degree(B) < 1)
        throw std::invalid_argument("residue_symbol: modulus must be monic of degree >= 1");
    if (degree(A) >= kMaxDeg || degree(B) >= kMaxDeg)
        throw std::invalid_argument("residue_symbol: degree too large");
    uint32_t a[kMaxDeg + 1], b[kMaxDeg + 1];
    int da = degree(A), db = degree(B);
    for (int i = 0; i <= da; ++i) a[i] = A[i];
    for (int i = 0; i <= db; ++i) b[i] = B[i];
    if (da < 0) return 0;
    return detail::symbol_kernel(F, a, da, b, db);
}

// (A/B) by factoring B and applying the Euler criterion per prime; oracle path
inline int residue_symbol_euler(const Field& F, const Poly& A, const Poly& B) {
    if (!is_monic(B) || degree(B) < 1)
        throw std::invalid_argument("residue_symbol_euler: modulus must be monic of degree >= 1");
    if (is_zero(A)) return 0;
    Factorization fb = factorize(F, B);
    int result = 1;
    for (const auto& [P, e] : fb.factors) {
        uint64_t norm = pow_u64(F.q(), (unsigned)degree(P));
        Poly t = powmod(F, A, (norm - 1) / 2, P);
        int s;
        if (is_zero(t))
            s = 0;
        else if (t == poly_one())
            s = 1;
        else if (degree(t) == 0 && t[0] == F.q() - 1)
            s = -1;
        else
            throw std::logic_error("residue_symbol_euler: Euler criterion returned a non-unit");
        if (s == 0) return 0;
        if (e & 1) result *= s;
    }
    return result;
}

// chi_D(f) = (D/f)
inline int chi_D(const Field& F, const Poly& D, const Poly& f) {
    return residue_symbol(F, D, f);
}

// e(uV/f): the t^{-1} Laurent coefficient of uV/f equals the coefficient of
// t^{deg f - 1} in (uV mod f)
inline cplx hayes_exponential(const Field& F, const Poly& u, const Poly& V, const Poly& f) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("hayes_exponential: f must be monic of degree >= 1");
    Poly r = mod(F, mul(F, u, V), f);
    uint32_t a1 = degree(r) == degree(f) - 1 ? r.back() : 0;
    return F.root_of_unity(a1);
}

// ---------------------------------------------------------------------------
// Gauss sums
// ---------------------------------------------------------------------------

// literal sum over all |f| residues
inline cplx gauss_sum_direct(const Field& F, const Poly& V, const Poly& f) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("gauss_sum_direct: f must be monic of degree >= 1");
    cplx s = 0;
    for_each_residue(F, degree(f), [&](const Poly& u) {
        if (is_zero(u)) return;
        int chi = residue_symbol(F, u, f);
        if (!chi) return;
        Poly r = mod(F, mul(F, u, V), f);
        uint32_t a1 = degree(r) == degree(f) - 1 ? r.back() : 0;
        s += (double)chi * F.root_of_unity(a1);
    });
    return s;
}

// Lemma 2.3 case table for a prime power modulus; V = V1 * P^alpha with
// P not dividing V1 (alpha = +infinity for V = 0, so G(0,P^j) = phi(P^j) for
// j even and 0 for j odd)
inline cplx gauss_sum_prime_power(const Field& F, const Poly& V, const Poly& P, int j) {
    int alpha = 0;
    Poly V1 = V;
    bool v_zero = is_zero(V);
    if (!v_zero) {
        for (;;) {
            auto [quot, rem] = divrem(F, V1, P);
            if (!rem.empty()) break;
            V1 = quot;
            ++alpha;
        }
    }
    double norm = (double)pow_u64(F.q(), (unsigned)degree(P));
    if (v_zero || j <= alpha) {
        if (j & 1) return 0.0;
        double r = 1;
        for (int i = 0; i < j - 1; ++i) r *= norm;
        return r * (norm - 1); // phi(P^j)
    }
    if (j == alpha + 1) {
        double r = 1;
        for (int i = 0; i < j - 1; ++i) r *= norm;
        if (!(j & 1)) return -r;
        return (double)residue_symbol(F, V1, P) * r * std::sqrt(norm); // chi_P(V1) |P|^{j-1/2}
    }
    return 0.0; // j >= alpha + 2
}

// G(V,f) by factoring f and multiplying the prime-power values
inline cplx gauss_sum_closed(const Field& F, const Poly& V, const Poly& f) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("gauss_sum_closed: f must be monic of degree >= 1");
    Factorization fa = factorize(F, f);
    cplx g = 1;
    for (const auto& [P, j] : fa.factors) {
        g *= gauss_sum_prime_power(F, V, P, j);
        if (g == 0.0) return 0.0;
    }
    return g;
}

// ---------------------------------------------------------------------------
// character tables over residues mod f (packed base-q index)
// ---------------------------------------------------------------------------

inline uint64_t residue_index(const Field& F, const Poly& r) {
    uint64_t idx = 0;
    for (size_t i = r.size(); i-- > 0;) idx = idx * F.q() + r[i];
    return idx;
}

// (r/P) for every residue r mod P, P irreducible, filled by walking the
// powers of a generator of the multiplicative group of F_q[x]/P
inline std::vector<int8_t> char_table_prime(const Field& F, const Poly& P) {
    int d = degree(P);
    uint64_t size = pow_u64(F.q(), (unsigned)d);
    uint64_t M = size - 1;
    std::vector<uint64_t> prime_divs;
    {
        uint64_t m = M;
        for (uint64_t r = 2; r * r <= m; ++r)
            if (m % r == 0) {
                prime_divs.push_back(r);
                while (m % r == 0) m /= r;
            }
        if (m > 1) prime_divs.push_back(m);
    }
    // first generator in enumeration order
    Poly gen;
    for (uint64_t cand = 1;; ++cand) {
        Poly c;
        uint64_t idx = cand;
        for (int i = 0; i < d; ++i) {
            uint32_t digit = (uint32_t)(idx % F.q());
            if (digit) {
                c.resize(i + 1, 0);
                c[i] = digit;
            }
            idx /= F.q();
        }
        bool ok = degree(gcd(F, c, P)) == 0;
        for (uint64_t r : prime_divs)
            if (ok && powmod(F, c, M / r, P) == poly_one()) ok = false;
        if (ok) {
            gen = c;
            break;
        }
    }
    std::vector<int8_t> table(size, 0);
    Poly t = poly_one();
    for (uint64_t k = 0; k < M; ++k) {
        table[residue_index(F, t)] = (k & 1) ? -1 : 1;
        t = mulmod(F, t, gen, P);
    }
    return table;
}

// all G(V,f) for deg V < deg f, indexed by residue_index(V)
inline std::vector<cplx> gauss_sum_table(const Field& F, const Poly& f) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("gauss_sum_table: f must be monic of degree >= 1");
    const int d = degree(f);
    const uint32_t q = F.q();
    const uint64_t size = pow_u64(q, (unsigned)d);

    // hankel[k] = coeff_{d-1}(x^k mod f) for k < 2d-1
    uint32_t hankel[2 * kMaxDeg];
    {
        Poly xk = poly_one();
        for (int k = 0; k < 2 * d - 1; ++k) {
            hankel[k] = degree(xk) == d - 1 ? xk.back() : 0;
            xk = mod(F, mul(F, xk, poly_x()), f);
        }
    }

    // bucket chi_f(u) by the linear map u -> (sum_j u_j hankel[i+j])_i
    std::vector<int32_t> w(size, 0);
    {
        uint32_t u[kMaxDeg] = {0};
        Poly up;
        for (uint64_t iu = 0; iu < size; ++iu) {
            if (iu) {
                up.clear();
                for (int i = 0, found = -1; i < d; ++i)
                    if (u[i]) found = i, up.resize(found + 1, 0), up[i] = u[i];
                int chi = residue_symbol(F, up, f);
                if (chi) {
                    uint64_t t_idx = 0;
                    for (int i = d - 1; i >= 0; --i) {
                        uint64_t acc = 0;
                        for (int j = 0; j < d; ++j) acc += (uint64_t)u[j] * hankel[i + j];
                        t_idx = t_idx * q + (uint32_t)(acc % q); // acc can exceed 2^32
                    }
                    w[t_idx] += chi;
                }
            }
            for (int i = 0; i < d; ++i) {
                if (++u[i] < q) break;
                u[i] = 0;
            }
        }
    }

    // multidimensional DFT over (Z/q)^d with kernel e^{2 pi i <V,T>/q}
    std::vector<cplx> g(size);
    for (uint64_t i = 0; i < size; ++i) g[i] = (double)w[i];
    std::vector<cplx> line(q), out(q);
    uint64_t stride = 1;
    for (int dim = 0; dim < d; ++dim) {
        const uint64_t block = stride * q;
        for (uint64_t base = 0; base < size; base += block) {
            for (uint64_t off = 0; off < stride; ++off) {
                for (uint32_t k = 0; k < q; ++k) line[k] = g[base + off + k * stride];
                for (uint32_t v = 0; v < q; ++v) {
                    cplx acc = 0;
                    for (uint32_t k = 0; k < q; ++k) acc += line[k] * F.root_of_unity((uint32_t)(((uint64_t)v * k) % q));
                    out[v] = acc;
                }
                for (uint32_t v = 0; v < q; ++v) g[base + off + v * stride] = out[v];
            }
        }
        stride = block;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Lemma 2.2 (Poisson summation) and Lemma 2.1 (squarefree <-> monic)
// ---------------------------------------------------------------------------

// sum_{h in M_m} chi_f(h); for monic h and monic f, (f/h) = (h/f)
inline int64_t monic_char_sum(const Field& F, const Poly& f, int m) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("monic_char_sum: f must be monic of degree >= 1");
    if (m < 0) return 0;
    if (m == 0) return 1;
    int64_t s = 0;
    uint32_t a[kMaxDeg + 1], b[kMaxDeg + 1];
    for_each_monic(F, m, [&](const Poly& h) {
        int da = degree(h), db = degree(f);
        for (int i = 0; i <= da; ++i) a[i] = h[i];
        for (int i = 0; i <= db; ++i) b[i] = f[i];
        s += detail::symbol_kernel(F, a, da, b, db);
    });
    return s;
}

// right-hand side of Lemma 2.2, evaluated with closed-form Gauss sums
inline cplx poisson_char_sum(const Field& F, const Poly& f, int m) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("poisson_char_sum: f must be monic of degree >= 1");
    const int n = degree(f);
    const double norm_f = (double)pow_u64(F.q(), (unsigned)n);
    if (m < 0) return 0.0;
    auto sum_dual_upto = [&](int dmax) {
        cplx s = 0;
        for (int dv = 0; dv <= dmax; ++dv)
            for_each_monic(F, dv, [&](const Poly& V) { s += gauss_sum_closed(F, V, f); });
        return s;
    };
    if (n % 2 == 0) {
        cplx s = gauss_sum_closed(F, Poly{}, f); // G(0,f)
        if (n - m - 2 >= 0) s += (double)F.q() * sum_dual_upto(n - m - 2);
        if (n - m - 1 >= 0) s -= sum_dual_upto(n - m - 1);
        return std::pow((double)F.q(), m) / norm_f * s;
    }
    cplx s = 0;
    if (n - m - 1 >= 0)
        for_each_monic(F, n - m - 1, [&](const Poly& V) { s += gauss_sum_closed(F, V, f); });
    return std::pow((double)F.q(), m + 0.5) / norm_f * s;
}

// Lemma 2.1: lhs = sum_{D in H_{2g+1}} chi_D(f) by enumeration,
// rhs = sum_{C | f^infty} [ sum_{h in M_{2g+1-2d(C)}} chi_f(h)
//                           - q sum_{h in M_{2g-1-2d(C)}} chi_f(h) ]
inline std::pair<int64_t, int64_t> squarefree_char_sum_decomposition(const Field& F, const Poly& f, int g) {
    if (!is_monic(f) || degree(f) < 1)
        throw std::invalid_argument("squarefree_char_sum_decomposition: f must be monic of degree >= 1");
    int64_t lhs = 0;
    for_each_squarefree(F, 2 * g + 1, [&](const Poly& D) { lhs += residue_symbol(F, D, f); });

    std::vector<int> prime_degs;
    for (const auto& [P, e] : factorize(F, f).factors) prime_degs.push_back(degree(P));
    // enumerate d(C) over exponent vectors on the distinct primes of f
    std::vector<int64_t> count_by_deg(g + 1, 0); // number of C | f^infty with d(C) = k <= g
    {
        std::vector<int64_t> cur(g + 1, 0);
        cur[0] = 1;
        for (int dp : prime_degs) {
            std::vector<int64_t> next(g + 1, 0);
            for (int base = 0; base <= g; ++base) {
                if (!cur[base]) continue;
                for (int e = 0; base + e * dp <= g; ++e) next[base + e * dp] += cur[base];
            }
            cur = std::move(next);
        }
        count_by_deg = std::move(cur);
    }
    int64_t rhs = 0;
    for (int dc = 0; dc <= g; ++dc) {
        if (!count_by_deg[dc]) continue;
        int64_t inner = monic_char_sum(F, f, 2 * g + 1 - 2 * dc);
        if (2 * g - 1 - 2 * dc >= 0) inner -= (int64_t)F.q() * monic_char_sum(F, f, 2 * g - 1 - 2 * dc);
        rhs += count_by_deg[dc] * inner;
    }
    return {lhs, rhs};
}

} // namespace qdl
