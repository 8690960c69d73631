#pragma once

// Prime field F_q arithmetic for q < 2^16, q = 1 (mod 4).
//
// All polynomial coefficients in this library are residues mod q stored in
// uint32_t; products fit in uint64_t before reduction.  Reduction uses the
// Lemire fastmod trick (one 64-bit multiply, one 128-bit high multiply)
// instead of a hardware divide, which matters in the character-sum loops.

#include <cstdint>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdl {

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; (uint64_t)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class Field {
public:
    explicit Field(uint32_t q) : q_(q) {
        if (!is_prime_u32(q)) throw std::invalid_argument("q must be prime, got " + std::to_string(q));
        if (q % 4 != 1) throw std::invalid_argument("q must be 1 mod 4, got " + std::to_string(q));
        if (q >= (1u << 16)) throw std::invalid_argument("q must be < 2^16");
        magic_ = UINT64_MAX / q + 1;
        legendre_.assign(q, 0);
        for (uint32_t a = 1; a < q; ++a) legendre_[mul(a, a)] = 1;
        for (uint32_t a = 1; a < q; ++a)
            if (!legendre_[a]) legendre_[a] = -1;
        inv_.assign(q, 0);
        for (uint32_t a = 1; a < q; ++a) inv_[a] = pow_mod(a, q - 2);
        root_.resize(q);
        const double two_pi = 6.283185307179586476925286766559;
        for (uint32_t k = 0; k < q; ++k)
            root_[k] = std::polar(1.0, two_pi * k / q);
    }

    uint32_t q() const { return q_; }

    // x mod q, valid for x < 2^32 (Lemire fastmod)
    uint32_t reduce(uint64_t x) const {
        uint64_t low = magic_ * x;
        return (uint32_t)(((unsigned __int128)low * q_) >> 64);
    }

    uint32_t add(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= q_ ? s - q_ : s; }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + q_ - b; }
    uint32_t neg(uint32_t a) const { return a ? q_ - a : 0; }
    uint32_t mul(uint32_t a, uint32_t b) const { return reduce((uint64_t)a * b); }
    uint32_t inv(uint32_t a) const { return inv_[a]; }

    uint32_t pow_mod(uint32_t a, uint64_t e) const {
        uint32_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    // Legendre symbol of a residue: 0 for 0, else +-1
    int legendre(uint32_t a) const { return a == 0 ? 0 : (int)legendre_[a]; }

    // e^{2 pi i k / q}
    std::complex<double> root_of_unity(uint32_t k) const { return root_[k]; }

private:
    uint32_t q_;
    uint64_t magic_;
    std::vector<int8_t> legendre_;
    std::vector<uint32_t> inv_;
    std::vector<std::complex<double>> root_;
};

} // namespace qdl
