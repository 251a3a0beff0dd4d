#include "peakbound/philox.hpp"

#include <cmath>
#include <numbers>

namespace peakbound {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u; // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u; // sqrt(3) - 1

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    std::array<std::uint32_t, 4> out;
    out[0] = static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0];
    out[1] = static_cast<std::uint32_t>(p1);
    out[2] = static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1];
    out[3] = static_cast<std::uint32_t>(p0);
    c = out;
}

} // namespace

std::array<std::uint32_t, 4> Philox::block(std::uint64_t seed, std::uint64_t stream,
                                           std::uint64_t idx) {
    std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(idx),
                                   static_cast<std::uint32_t>(idx >> 32),
                                   static_cast<std::uint32_t>(stream),
                                   static_cast<std::uint32_t>(stream >> 32)};
    std::array<std::uint32_t, 2> k{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
    for (int r = 0; r < 10; ++r) {
        round_once(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

void Philox::refill() {
    std::uint64_t seed = key_[0] | (static_cast<std::uint64_t>(key_[1]) << 32);
    buf_ = block(seed, hi_, ctr_++);
    have_ = 4;
}

std::uint32_t Philox::next_u32() {
    if (have_ == 0) refill();
    return buf_[--have_];
}

double Philox::next_uniform() {
    std::uint64_t a = next_u32(), b = next_u32();
    std::uint64_t u = (a << 32) | b;
    // (0,1]: never returns 0, safe under log().
    return static_cast<double>((u >> 11) + 1) * 0x1.0p-53;
}

double Philox::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

} // namespace peakbound
