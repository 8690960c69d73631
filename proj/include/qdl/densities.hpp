#pragma once

// Brute-force one- and two-level density sums over the full family H_{2g+1},
// with the diagonal / Type-I class decompositions.
//
// Family build: for every prime P with d(P) <= 2g, sweep all monic D of
// degree 2g+1 in enumeration order, maintaining D mod P incrementally and
// reading chi_D(P) = (D/P) from a per-prime character table.  This gives the
// prime tallies
//     A_m(D) = sum_{P in P_m} chi_D(P),   omega_m(D) = #{P | D : d(P) = m},
// from which a_n(D) = sum_{f in M_n} Lambda(f) chi_D(f) and the L-polynomial
// coefficients c_n(D) follow by exact integer Newton recurrences (the
// divisibility in the recurrence is checked, which makes the fast path
// self-validating).  Tallies for m > 2g are recovered from the a_n of the
// L-polynomial, again exactly.
//
// All family reductions run over fixed blocks folded in block order, so
// results are bit-identical for any thread count.

#include "charsums.hpp"
#include "factor.hpp"
#include "field.hpp"
#include "lfunc.hpp"
#include "parallel.hpp"
#include "poly.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdl {

struct ShiftParams {
    cplx alpha{0, 0};
    cplx beta{0, 0};
    cplx gamma{0, 0};
    cplx delta{0, 0};
};

struct ClassBreakdown {
    cplx total{0, 0};
    std::vector<std::pair<std::string, cplx>> classes;
    cplx class_value(const std::string& label) const {
        for (auto& [k, v] : classes)
            if (k == label) return v;
        throw std::invalid_argument("no class " + label);
    }
};

struct SumOptions {
    int threads = 1;
    bool compensated = false;
};

namespace detail {

inline bool is_squarefree_kernel(const Field& F, const uint32_t* fc, int n) {
    // gcd(f, f') on stack buffers
    uint32_t a[kMaxDeg + 1], b[kMaxDeg + 1];
    int da = n, db = -1;
    for (int i = 0; i <= n; ++i) a[i] = fc[i];
    for (int i = 1; i <= n; ++i) {
        uint32_t c = F.reduce((uint64_t)fc[i] * (i % F.q()));
        b[i - 1] = c;
        if (c) db = i - 1;
    }
    if (db < 0) return false; // f = g(x^p)
    while (db >= 0) {
        // a mod b
        uint32_t lead_inv = F.inv(b[db]);
        for (int i = da; i >= db; --i) {
            uint32_t c = F.mul(a[i], lead_inv);
            if (c) {
                a[i] = 0;
                for (int j = 0; j < db; ++j) a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]));
            }
        }
        da = db - 1;
        while (da >= 0 && a[da] == 0) --da;
        for (int i = 0; i <= std::max(da, db); ++i) std::swap(a[i], b[i]);
        std::swap(da, db);
    }
    return da == 0; // gcd is a nonzero constant
}

} // namespace detail

class Family {
public:
    Family(const Field& F, int g, int threads = 1) : F_(F), g_(g) {
        if (g < 1) throw std::invalid_argument("Family: g >= 1 required");
        const int n = 2 * g + 1;
        if ((double)n * std::log2((double)F.q()) > 24) throw std::invalid_argument("Family: q^(2g+1) too large");
        const uint64_t total = pow_u64(F.q(), (unsigned)n);

        // pass 1: squarefree flags
        flag_.assign(total, 0);
        blocked_run(
            total, threads, [] { return 0; },
            [&](uint64_t lo, uint64_t hi, int&) {
                uint32_t fc[kMaxDeg + 1] = {0};
                uint64_t idx = lo;
                for (int j = 0; j < n; ++j) {
                    fc[j] = (uint32_t)(idx % F.q());
                    idx /= F.q();
                }
                fc[n] = 1;
                for (uint64_t i = lo; i < hi; ++i) {
                    flag_[i] = detail::is_squarefree_kernel(F, fc, n) ? 1 : 0;
                    for (int j = 0; j < n; ++j) {
                        if (++fc[j] < F.q()) break;
                        fc[j] = 0;
                    }
                }
            },
            [](int&) {});
        rows_.reserve(total / 8);
        for (uint64_t i = 0; i < total; ++i)
            if (flag_[i]) rows_.push_back(i);

        // pass 2: prime sweeps for m <= 2g
        std::vector<std::vector<int32_t>> tally(2 * g + 1); // tally[m][monic index]
        std::vector<uint32_t> omega(total, 0);              // 4-bit counts per degree 1..2g
        for (int m = 1; m <= 2 * g; ++m) tally[m].assign(total, 0);
        for (int m = 1; m <= 2 * g; ++m) {
            std::vector<Poly> primes = primes_of_degree(F, m);
            blocked_run(
                primes.size(), threads,
                [&] {
                    struct Part {
                        std::vector<int32_t> acc;
                        std::vector<uint32_t> om;
                    };
                    return Part{std::vector<int32_t>(), std::vector<uint32_t>()};
                },
                [&](uint64_t lo, uint64_t hi, auto& part) {
                    part.acc.assign(total, 0);
                    part.om.assign(total, 0);
                    for (uint64_t pi = lo; pi < hi; ++pi)
                        sweep_prime(primes[pi], m, part.acc, part.om);
                },
                [&](auto& part) {
                    if (part.acc.empty()) return;
                    for (uint64_t i = 0; i < total; ++i) tally[m][i] += part.acc[i];
                    for (uint64_t i = 0; i < total; ++i) omega[i] += part.om[i] << (4 * (m - 1));
                });
        }

        // pass 3: exact Newton from tallies to L-coefficients per squarefree D
        c_.assign(rows_.size() * (size_t)(2 * g), 0);
        omega_.assign(rows_.size(), 0);
        pi_ = DegreeCountTable::build(F, 4 * g + 4);
        blocked_run(
            rows_.size(), threads, [] { return 0; },
            [&](uint64_t lo, uint64_t hi, int&) {
                for (uint64_t r = lo; r < hi; ++r) {
                    uint64_t iD = rows_[r];
                    int64_t A[kMaxDeg + 1] = {0}, B[kMaxDeg + 1] = {0}, a[kMaxDeg + 1] = {0};
                    int rem = n;
                    for (int m = 1; m <= 2 * g; ++m) {
                        int om = (int)((omega[iD] >> (4 * (m - 1))) & 0xf);
                        A[m] = tally[m][iD];
                        B[m] = pi_.pi[m] - om;
                        rem -= m * om;
                    }
                    omega_[r] = omega[iD] | ((rem == n ? 1u : 0u) << 28); // bit 28: D irreducible
                    for (int k = 1; k <= 2 * g; ++k) {
                        int64_t s = 0;
                        for (int m = 1; m <= k; ++m)
                            if (k % m == 0) s += m * ((k / m) % 2 ? A[m] : B[m]);
                        a[k] = s;
                    }
                    int64_t c[kMaxDeg + 1] = {0};
                    c[0] = 1;
                    for (int k = 1; k <= 2 * g; ++k) {
                        int64_t s = 0;
                        for (int j = 1; j <= k; ++j) s += a[j] * c[k - j];
                        if (s % k != 0) throw std::logic_error("Family: Newton recurrence not divisible");
                        c[k] = s / k;
                    }
                    for (int k = 1; k <= 2 * g; ++k) c_[r * (size_t)(2 * g) + k - 1] = (int32_t)c[k];
                }
            },
            [](int&) {});
    }

    const Field& field() const { return F_; }
    int g() const { return g_; }
    int64_t h_count() const { return (int64_t)rows_.size(); }
    int64_t pi_q(int m) const { return pi_.pi[m]; }

    Poly discriminant(uint64_t row) const { return monic_from_index(F_, 2 * g_ + 1, rows_[row]); }

    // c_1..c_{2g} of L(u, chi_D) for the row-th squarefree D
    void l_coeffs(uint64_t row, int64_t* c) const {
        c[0] = 1;
        for (int k = 1; k <= 2 * g_; ++k) c[k] = c_[row * (size_t)(2 * g_) + k - 1];
    }

    LPolynomial l_polynomial_row(uint64_t row) const {
        LPolynomial L;
        L.g = g_;
        L.c.assign(2 * g_ + 1, 0);
        l_coeffs(row, L.c.data());
        return L;
    }

    // a_1..a_N (prime-power sums) for the row-th D, by Newton from the c_n
    void lambda_coeffs(uint64_t row, int N, int64_t* a) const {
        int64_t c[kMaxDeg + 1];
        l_coeffs(row, c);
        for (int k = 1; k <= N; ++k) {
            int64_t s = k <= 2 * g_ ? (int64_t)k * c[k] : 0;
            for (int j = 1; j < k; ++j)
                if (k - j <= 2 * g_) s -= a[j] * c[k - j];
            a[k] = s;
        }
    }

    // prime tallies A_m = sum_{P_m} chi_D(P), B_m = #{P in P_m : P not | D},
    // recovered exactly from the a_n; valid for any m <= N
    void tallies(uint64_t row, int N, int64_t* A, int64_t* B) const {
        int64_t a[2 * kMaxDeg + 1];
        lambda_coeffs(row, N, a);
        for (int m = 1; m <= N; ++m) {
            B[m] = pi_.pi[m] - omega_m(row, m);
            int64_t s = a[m];
            for (int mp = 1; mp < m; ++mp)
                if (m % mp == 0) s -= mp * ((m / mp) % 2 ? A[mp] : B[mp]);
            if (s % m != 0) throw std::logic_error("Family: tally recurrence not divisible");
            A[m] = s / m;
        }
    }

    int omega_m(uint64_t row, int m) const {
        if (m < 1 || m > 2 * g_ + 1) return 0;
        if (m == 2 * g_ + 1) return (omega_[row] >> 28) & 1;
        if (m > 2 * g_) return 0;
        return (int)((omega_[row] >> (4 * (m - 1))) & 0xf);
    }

private:
    void sweep_prime(const Poly& P, int m, std::vector<int32_t>& acc, std::vector<uint32_t>& om) {
        const int n = 2 * g_ + 1;
        const uint32_t q = F_.q();
        std::vector<int8_t> table = char_table_prime(F_, P);
        // xmod[j] = digits of x^j mod P
        uint32_t xmod[kMaxDeg + 1][kMaxDeg];
        {
            Poly xj = poly_one();
            for (int j = 0; j <= n; ++j) {
                for (int i = 0; i < m; ++i) xmod[j][i] = i <= degree(xj) ? xj[i] : 0;
                xj = mod(F_, mul(F_, xj, poly_x()), P);
            }
        }
        uint32_t dc[kMaxDeg + 1] = {0}; // coefficients of D below the leading 1
        uint32_t r[kMaxDeg];            // digits of D mod P
        for (int i = 0; i < m; ++i) r[i] = xmod[n][i];
        const uint64_t total = pow_u64(q, (unsigned)n);
        for (uint64_t iD = 0;;) {
            uint64_t idx = 0;
            for (int i = m - 1; i >= 0; --i) idx = idx * q + r[i];
            int8_t chi = table[idx];
            acc[iD] += chi;
            if (!chi) om[iD] += 1;
            if (++iD == total) break;
            for (int j = 0;; ++j) {
                // digit j of D steps by one: D mod P steps by x^j mod P
                for (int i = 0; i < m; ++i) {
                    uint32_t s = r[i] + xmod[j][i];
                    r[i] = s >= q ? s - q : s;
                }
                if (++dc[j] < q) break;
                dc[j] = 0; // rollover: -(q-1) = +1 mod q, already added above
            }
        }
    }

    const Field& F_;
    int g_;
    std::vector<uint8_t> flag_;
    std::vector<uint64_t> rows_;
    std::vector<int32_t> c_;
    std::vector<uint32_t> omega_;
    DegreeCountTable pi_;
};

// |H_n| by enumeration, without materializing a Family
inline int64_t squarefree_count(const Field& F, int n, int threads = 1) {
    const uint64_t total = pow_u64(F.q(), (unsigned)n);
    int64_t count = 0;
    blocked_run(
        total, threads, [] { return (int64_t)0; },
        [&](uint64_t lo, uint64_t hi, int64_t& part) {
            uint32_t fc[kMaxDeg + 1] = {0};
            uint64_t idx = lo;
            for (int j = 0; j < n; ++j) {
                fc[j] = (uint32_t)(idx % F.q());
                idx /= F.q();
            }
            fc[n] = 1;
            for (uint64_t i = lo; i < hi; ++i) {
                if (detail::is_squarefree_kernel(F, fc, n)) ++part;
                for (int j = 0; j < n; ++j) {
                    if (++fc[j] < F.q()) break;
                    fc[j] = 0;
                }
            }
        },
        [&](int64_t& part) { count += part; });
    return count;
}

// ---------------------------------------------------------------------------
// density sums
// ---------------------------------------------------------------------------

namespace detail {

// family-summed tally moments up to degree M (all integers, order-free)
struct TallyMoments {
    int M = 0;
    std::vector<int64_t> SA, SB;      // sum_D A_m, sum_D B_m
    std::vector<int64_t> SAA, SAB, SBA, SBB; // (M+1)^2 each, sum_D of products
    int64_t at(const std::vector<int64_t>& t, int m, int n) const { return t[(size_t)m * (M + 1) + n]; }
};

inline TallyMoments tally_moments(const Family& fam, int M, const SumOptions& opt, bool products) {
    TallyMoments mo;
    mo.M = M;
    size_t mm = products ? (size_t)(M + 1) * (M + 1) : 0;
    mo.SA.assign(M + 1, 0);
    mo.SB.assign(M + 1, 0);
    mo.SAA.assign(mm, 0);
    mo.SAB.assign(mm, 0);
    mo.SBA.assign(mm, 0);
    mo.SBB.assign(mm, 0);
    blocked_run(
        (uint64_t)fam.h_count(), opt.threads, [&] { return TallyMoments{}; },
        [&](uint64_t lo, uint64_t hi, TallyMoments& part) {
            part.M = M;
            part.SA.assign(M + 1, 0);
            part.SB.assign(M + 1, 0);
            part.SAA.assign(mm, 0);
            part.SAB.assign(mm, 0);
            part.SBA.assign(mm, 0);
            part.SBB.assign(mm, 0);
            int64_t A[2 * kMaxDeg + 1], B[2 * kMaxDeg + 1];
            for (uint64_t r = lo; r < hi; ++r) {
                fam.tallies(r, M, A, B);
                for (int m = 1; m <= M; ++m) {
                    part.SA[m] += A[m];
                    part.SB[m] += B[m];
                    if (!products) continue;
                    for (int n = 1; n <= M; ++n) {
                        part.SAA[(size_t)m * (M + 1) + n] += A[m] * A[n];
                        part.SAB[(size_t)m * (M + 1) + n] += A[m] * B[n];
                        part.SBA[(size_t)m * (M + 1) + n] += B[m] * A[n];
                        part.SBB[(size_t)m * (M + 1) + n] += B[m] * B[n];
                    }
                }
            }
        },
        [&](TallyMoments& part) {
            if (part.SA.empty()) return;
            for (int m = 1; m <= M; ++m) {
                mo.SA[m] += part.SA[m];
                mo.SB[m] += part.SB[m];
            }
            for (size_t i = 0; i < mm; ++i) {
                mo.SAA[i] += part.SAA[i];
                mo.SAB[i] += part.SAB[i];
                mo.SBA[i] += part.SBA[i];
                mo.SBB[i] += part.SBB[i];
            }
        });
    return mo;
}

inline cplx norm_weight(const Field& F, int deg, cplx s) {
    // |f|^{-(1/2+s)} for d(f) = deg
    return std::exp(-std::log((double)F.q()) * (double)deg * (cplx(0.5, 0) + s));
}

} // namespace detail

// prime-power route: the f-sum grouped by (d(P), k) with family-averaged
// character values, split into diagonal (k even) and Type-I (k odd) classes
inline ClassBreakdown one_level_classes(const Family& fam, int N, cplx alpha,
                                        const SumOptions& opt = {}) {
    if (N < 1) throw std::invalid_argument("one_level_classes: N >= 1 required");
    const Field& F = fam.field();
    detail::TallyMoments mo = detail::tally_moments(fam, N, opt, false);
    const double h = (double)fam.h_count();
    cplx diag = 0, off = 0;
    for (int m = 1; m <= N; ++m)
        for (int k = 1; k * m <= N; ++k) {
            cplx w = (double)m * detail::norm_weight(F, k * m, alpha);
            if (k % 2)
                off += w * ((double)mo.SA[m] / h);
            else
                diag += w * ((double)mo.SB[m] / h);
        }
    ClassBreakdown out;
    out.classes = {{"diagonal", diag}, {"off_diagonal", off}};
    out.total = diag + off;
    return out;
}

// dual route: average over D of sum_{n<=N} a_n(D) q^{-n(1/2+alpha)}
inline cplx one_level_logderiv(const Family& fam, int N, cplx alpha, const SumOptions& opt = {}) {
    const Field& F = fam.field();
    std::vector<cplx> w(N + 1);
    for (int n = 1; n <= N; ++n) w[n] = detail::norm_weight(F, n, alpha);
    Accumulator acc(opt.compensated);
    blocked_run(
        (uint64_t)fam.h_count(), opt.threads, [&] { return Accumulator(opt.compensated); },
        [&](uint64_t lo, uint64_t hi, Accumulator& part) {
            int64_t a[2 * kMaxDeg + 1];
            for (uint64_t r = lo; r < hi; ++r) {
                fam.lambda_coeffs(r, N, a);
                cplx s = 0;
                for (int n = 1; n <= N; ++n) s += (double)a[n] * w[n];
                part.add(s);
            }
        },
        [&](Accumulator& part) { acc.add(part); });
    return acc.value() / (double)fam.h_count();
}

inline cplx one_level(const Family& fam, int N, cplx alpha, const SumOptions& opt = {}) {
    return one_level_logderiv(fam, N, alpha, opt);
}

// pair route with the full class partition of (f1, f2) = (P^a, Q^b)
inline ClassBreakdown two_level_classes(const Family& fam, int N, cplx alpha, cplx beta,
                                        const SumOptions& opt = {}) {
    if (N < 2) throw std::invalid_argument("two_level_classes: N >= 2 required");
    const Field& F = fam.field();
    const int M = N - 1;
    detail::TallyMoments mo = detail::tally_moments(fam, M, opt, true);
    const double h = (double)fam.h_count();
    cplx ee = 0, oe = 0, eo = 0, oo_eq_prime = 0, oo_gt = 0, oo_lt = 0, oo_deq = 0;
    for (int m = 1; m <= M; ++m)
        for (int a = 1; a * m < N; ++a)
            for (int n = 1; n <= M; ++n)
                for (int b = 1; a * m + b * n <= N; ++b) {
                    cplx w = (double)(m * n) * detail::norm_weight(F, a * m, alpha) *
                             detail::norm_weight(F, b * n, beta);
                    bool aodd = a % 2, bodd = b % 2;
                    if (!aodd && !bodd)
                        ee += w * ((double)mo.at(mo.SBB, m, n) / h);
                    else if (aodd && !bodd)
                        oe += w * ((double)mo.at(mo.SAB, m, n) / h);
                    else if (!aodd && bodd)
                        eo += w * ((double)mo.at(mo.SBA, m, n) / h);
                    else {
                        int64_t all_pairs = mo.at(mo.SAA, m, n);
                        if (m == n) {
                            oo_eq_prime += w * ((double)mo.SB[m] / h);
                            oo_deq += w * ((double)(all_pairs - mo.SB[m]) / h);
                        } else if (m > n) {
                            oo_gt += w * ((double)all_pairs / h);
                        } else {
                            oo_lt += w * ((double)all_pairs / h);
                        }
                    }
                }
    ClassBreakdown out;
    out.classes = {{"ee", ee},
                   {"oo_equal_prime", oo_eq_prime},
                   {"oe", oe},
                   {"eo", eo},
                   {"oo_distinct_gt", oo_gt},
                   {"oo_distinct_lt", oo_lt},
                   {"oo_distinct_eq", oo_deq}};
    out.total = 0;
    for (auto& [k, v] : out.classes) out.total += v;
    return out;
}

// dual route via the log-derivative coefficients, D-major
inline cplx two_level_logderiv(const Family& fam, int N, cplx alpha, cplx beta,
                               const SumOptions& opt = {}) {
    const Field& F = fam.field();
    std::vector<cplx> wa(N + 1), wb(N + 1);
    for (int n = 1; n <= N; ++n) {
        wa[n] = detail::norm_weight(F, n, alpha);
        wb[n] = detail::norm_weight(F, n, beta);
    }
    Accumulator acc(opt.compensated);
    blocked_run(
        (uint64_t)fam.h_count(), opt.threads, [&] { return Accumulator(opt.compensated); },
        [&](uint64_t lo, uint64_t hi, Accumulator& part) {
            int64_t a[2 * kMaxDeg + 1];
            cplx prefix[2 * kMaxDeg + 1];
            for (uint64_t r = lo; r < hi; ++r) {
                fam.lambda_coeffs(r, N, a);
                prefix[0] = 0;
                for (int n = 1; n <= N; ++n) prefix[n] = prefix[n - 1] + (double)a[n] * wb[n];
                cplx s = 0;
                for (int n1 = 1; n1 < N; ++n1) s += (double)a[n1] * wa[n1] * prefix[N - n1];
                part.add(s);
            }
        },
        [&](Accumulator& part) { acc.add(part); });
    return acc.value() / (double)fam.h_count();
}

inline cplx two_level(const Family& fam, int N, cplx alpha, cplx beta, const SumOptions& opt = {}) {
    return two_level_logderiv(fam, N, alpha, beta, opt);
}

// exact family average of L(1/2+a)L(1/2+b) / (L(1/2+c)L(1/2+d))
inline cplx ratio_average(const Family& fam, const ShiftParams& sh, const SumOptions& opt = {}) {
    const Field& F = fam.field();
    if (sh.gamma.imag() != 0 || sh.delta.imag() != 0 || sh.gamma.real() == 0 || sh.delta.real() == 0)
        throw std::invalid_argument("ratio_average: gamma, delta must be real and nonzero");
    const double lq = std::log((double)F.q());
    auto upoint = [&](cplx s) { return std::exp(-lq * (cplx(0.5, 0) + s)); };
    const cplx ua = upoint(sh.alpha), ub = upoint(sh.beta), uc = upoint(sh.gamma), ud = upoint(sh.delta);
    Accumulator acc(opt.compensated);
    std::atomic<bool> pole{false};
    blocked_run(
        (uint64_t)fam.h_count(), opt.threads, [&] { return Accumulator(opt.compensated); },
        [&](uint64_t lo, uint64_t hi, Accumulator& part) {
            int64_t c[kMaxDeg + 1];
            auto horner = [&](const int64_t* cc, cplx u) {
                cplx s = 0;
                for (int n = 2 * fam.g(); n >= 0; --n) s = s * u + (double)cc[n];
                return s;
            };
            for (uint64_t r = lo; r < hi; ++r) {
                fam.l_coeffs(r, c);
                cplx den = horner(c, uc) * horner(c, ud);
                if (std::abs(den) < 1e-12) {
                    pole.store(true);
                    continue;
                }
                part.add(horner(c, ua) * horner(c, ub) / den);
            }
        },
        [&](Accumulator& part) { acc.add(part); });
    if (pole.load()) throw std::runtime_error("ratio_average: denominator L-value below 1e-12");
    return acc.value() / (double)fam.h_count();
}

} // namespace qdl
