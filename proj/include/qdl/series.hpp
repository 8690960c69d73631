#pragma once

// Truncated power series in u with complex coefficients.
//
// The carrier is two-sided: coefficients run from min_power() to order(),
// with min_power() = 0 for ordinary series.  Swap terms in the Ratios
// recipe expand on an annulus around the Perron contour, so their series
// carry a few negative powers; perron_extract sums every kept coefficient
// of index <= N, which is what the contour integral against
// du/(u^{N+1}(1-u)) picks up.

#include <algorithm>
#include <cassert>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qdl {

using cplx = std::complex<double>;

class PowerSeries {
public:
    PowerSeries() : lo_(0) {}
    // zero series on the window [lo, hi]
    PowerSeries(int lo, int hi) : lo_(lo), c_(std::max(0, hi - lo + 1), cplx(0)) {}
    static PowerSeries zero(int order) { return PowerSeries(0, order); }
    static PowerSeries constant(cplx v, int order) {
        PowerSeries s(0, order);
        s.set(0, v);
        return s;
    }

    int min_power() const { return lo_; }
    int order() const { return lo_ + (int)c_.size() - 1; }

    cplx operator[](int n) const {
        if (n < lo_ || n > order()) return 0.0;
        return c_[n - lo_];
    }
    void set(int n, cplx v) {
        assert(n >= lo_ && n <= order());
        c_[n - lo_] = v;
    }
    void add_to(int n, cplx v) {
        if (n < lo_ || n > order()) return; // outside the window: truncated away
        c_[n - lo_] += v;
    }

    PowerSeries& operator+=(const PowerSeries& o) {
        int lo = std::min(lo_, o.lo_), hi = std::max(order(), o.order());
        PowerSeries r(lo, hi);
        for (int n = lo_; n <= order(); ++n) r.add_to(n, (*this)[n]);
        for (int n = o.lo_; n <= o.order(); ++n) r.add_to(n, o[n]);
        *this = std::move(r);
        return *this;
    }
    PowerSeries& operator-=(const PowerSeries& o) {
        PowerSeries neg = o;
        for (auto& v : neg.c_) v = -v;
        return *this += neg;
    }
    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }

    PowerSeries& operator*=(cplx s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    friend PowerSeries operator*(cplx s, PowerSeries a) { return a *= s; }

    // product truncated to the window [lo, hi]
    static PowerSeries mul(const PowerSeries& a, const PowerSeries& b, int lo, int hi) {
        PowerSeries r(lo, hi);
        for (int i = a.lo_; i <= a.order(); ++i) {
            cplx ai = a[i];
            if (ai == 0.0) continue;
            int jmin = std::max(b.lo_, lo - i), jmax = std::min(b.order(), hi - i);
            for (int j = jmin; j <= jmax; ++j) r.add_to(i + j, ai * b[j]);
        }
        return r;
    }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        return mul(a, b, a.lo_ + b.lo_, std::min(a.order() + b.lo_, b.order() + a.lo_));
    }

    // divide by a series with nonzero constant term, truncated like a plain
    // power-series division (both operands must have min_power 0)
    friend PowerSeries divide_by_unit(const PowerSeries& a, const PowerSeries& b) {
        if (b.lo_ != 0 || a.lo_ != 0) throw std::invalid_argument("divide_by_unit: ordinary series required");
        if (b[0] == 0.0) throw std::invalid_argument("divide_by_unit: divisor has zero constant term");
        int hi = std::min(a.order(), b.order());
        PowerSeries r(0, hi);
        for (int n = 0; n <= hi; ++n) {
            cplx s = a[n];
            for (int k = 1; k <= n; ++k) s -= b[k] * r[n - k];
            r.set(n, s / b[0]);
        }
        return r;
    }

    // multiply by u^k (shift every power)
    PowerSeries shifted(int k) const {
        PowerSeries r = *this;
        r.lo_ += k;
        return r;
    }

    // drop all coefficients below the floor
    PowerSeries floored(int floor) const {
        if (lo_ >= floor) return *this;
        PowerSeries r(floor, std::max(order(), floor));
        for (int n = floor; n <= order(); ++n) r.set(n, (*this)[n]);
        return r;
    }

    // largest |coefficient| strictly below the given power
    double max_abs_below(int power) const {
        double m = 0;
        for (int n = lo_; n < std::min(power, order() + 1); ++n) m = std::max(m, std::abs((*this)[n]));
        return m;
    }

    cplx eval(cplx u) const {
        cplx s = 0, p = std::pow(u, lo_);
        for (int n = lo_; n <= order(); ++n, p *= u) s += c_[n - lo_] * p;
        return s;
    }

private:
    int lo_;
    std::vector<cplx> c_;
};

// sum_{n <= N} of the kept coefficients (the function-field Perron formula)
inline cplx perron_extract(const PowerSeries& f, int N) {
    if (N > f.order()) throw std::invalid_argument("perron_extract: N beyond truncation order");
    cplx s = 0;
    for (int n = f.min_power(); n <= N; ++n) s += f[n];
    return s;
}

// 1/(1 - c u^step) = sum_k c^k u^{k step}, truncated at order
inline PowerSeries geometric_series(cplx c, int step, int order) {
    PowerSeries r(0, order);
    cplx p = 1;
    for (int k = 0; k * step <= order; ++k, p *= c) r.set(k * step, p);
    return r;
}

// 1/(A u^step - 1) = sum_{j>=1} A^{-j} u^{-j step}: the annulus expansion,
// kept down to min_power
inline PowerSeries reciprocal_annulus(cplx A, int step, int min_power, int order) {
    PowerSeries r(min_power, order);
    cplx Ainv = 1.0 / A, p = Ainv;
    for (int j = 1; -j * step >= min_power; ++j, p *= Ainv) r.set(-j * step, p);
    return r;
}

} // namespace qdl
