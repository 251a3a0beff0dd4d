#pragma once

// Philox4x32-10 counter-based generator. Stateless core: a (key, counter)
// pair maps to 128 random bits, so per-trial streams are derived by placing
// the trial index in the counter -- identical (seed, trial) always replays
// the same stream regardless of execution order.

#include <array>
#include <cstdint>

namespace peakbound {

class Philox {
  public:
    /// Stream `stream` of the generator keyed by `seed`.
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          hi_(stream) {}

    /// Raw 4x32-bit block for block index `idx`.
    static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                              std::uint64_t idx);

    std::uint32_t next_u32();

    /// 53-bit uniform in (0, 1].
    double next_uniform();

    /// Standard normal via Box-Muller (two uniforms per pair, cached).
    double next_normal();

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t hi_;
    std::uint64_t ctr_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace peakbound
