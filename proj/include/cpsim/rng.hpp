#pragma once

#include <cstdint>

namespace cpsim {

// Philox4x32-10 counter-based generator. A stream is keyed by (seed,
// stream_id); draws within a stream walk the 64-bit counter. Streams are
// independent, so paths keyed by index can run in any order or in parallel
// and still reproduce bit-identically.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream_id)
        : key0_(std::uint32_t(seed)), key1_(std::uint32_t(seed >> 32)),
          ctr_hi_(stream_id) {}

    double uniform();  // (0, 1)
    double normal();   // standard normal (Box-Muller, cached spare)

  private:
    void refill();
    std::uint32_t key0_, key1_;
    std::uint64_t ctr_hi_;
    std::uint64_t ctr_lo_ = 0;
    std::uint32_t block_[4] = {0, 0, 0, 0};
    int avail_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cpsim
