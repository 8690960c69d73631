#pragma once

// Deterministic blocked parallelism.
//
// Work of size n is cut into fixed blocks (independent of the worker count);
// each block produces a partial result into its own slot, and the slots are
// folded serially in block order.  Identical inputs therefore produce
// bit-identical results for any --threads value.
//
// The compensated accumulator (Neumaier) backs the extended-precision mode.

#include <atomic>
#include <mutex>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace qdl {

inline constexpr uint64_t kBlockSize = 4096;

template <class MakePartial, class Block, class Fold>
inline void blocked_run(uint64_t n, int threads, MakePartial make_partial, Block block_fn, Fold fold) {
    if (threads < 1) threads = 1;
    const uint64_t nblocks = (n + kBlockSize - 1) / kBlockSize;
    using Partial = decltype(make_partial());
    std::vector<Partial> partials(nblocks);
    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            uint64_t b = next.fetch_add(1);
            if (b >= nblocks || failed.load()) return;
            try {
                Partial p = make_partial();
                uint64_t lo = b * kBlockSize, hi = std::min(n, lo + kBlockSize);
                block_fn(lo, hi, p);
                partials[b] = std::move(p);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    if (threads == 1 || nblocks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
    for (uint64_t b = 0; b < nblocks; ++b) fold(partials[b]);
}

// Neumaier compensated sum; in plain mode the compensation is skipped
class Accumulator {
public:
    Accumulator() : compensated_(false) {}
    explicit Accumulator(bool compensated) : compensated_(compensated) {}

    void add(std::complex<double> v) {
        if (!compensated_) {
            sum_ += v;
            return;
        }
        add_comp(re_, re_c_, v.real());
        add_comp(im_, im_c_, v.imag());
    }

    void add(const Accumulator& o) {
        if (!compensated_) {
            sum_ += o.sum_;
            return;
        }
        add_comp(re_, re_c_, o.re_);
        add_comp(re_, re_c_, o.re_c_);
        add_comp(im_, im_c_, o.im_);
        add_comp(im_, im_c_, o.im_c_);
    }

    std::complex<double> value() const {
        if (!compensated_) return sum_;
        return {re_ + re_c_, im_ + im_c_};
    }

private:
    static void add_comp(double& s, double& c, double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    bool compensated_;
    std::complex<double> sum_{0, 0};
    double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

} // namespace qdl
