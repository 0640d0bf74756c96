#include "cpsim/rng.hpp"

#include <cmath>

namespace cpsim {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
    std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

}  // namespace

void Philox::refill() {
    std::uint32_t c0 = std::uint32_t(ctr_lo_);
    std::uint32_t c1 = std::uint32_t(ctr_lo_ >> 32);
    std::uint32_t c2 = std::uint32_t(ctr_hi_);
    std::uint32_t c3 = std::uint32_t(ctr_hi_ >> 32);
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(0xD2511F53u, c0, hi0, lo0);
        mulhilo(0xCD9E8D57u, c2, hi1, lo1);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    block_[0] = c0;
    block_[1] = c1;
    block_[2] = c2;
    block_[3] = c3;
    avail_ = 4;
    ++ctr_lo_;
}

double Philox::uniform() {
    if (avail_ < 2) refill();
    std::uint64_t bits = (std::uint64_t(block_[avail_ - 1]) << 32) |
                         block_[avail_ - 2];
    avail_ -= 2;
    // 53 random bits, offset so the value is strictly inside (0, 1)
    return (double(bits >> 11) + 0.5) * 0x1p-53;
}

double Philox::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

}  // namespace cpsim
