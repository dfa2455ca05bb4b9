#include "acwall/random.hpp"

#include <cmath>
#include <numbers>

namespace acwall {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Uniform in (0, 1) with 53 random bits; never returns 0.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline void box_muller(const std::array<std::uint32_t, 4>& r, double& z0, double& z1) {
    const double u1 = to_open_unit(r[0], r[1]);
    const double u2 = to_open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
}

std::array<std::uint32_t, 4> block_for(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    return philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void CounterNormal::fill(std::uint64_t stream, std::uint64_t first, std::span<double> out) const {
    std::size_t k = 0;
    std::uint64_t index = first;
    const std::size_t n = out.size();
    while (k < n) {
        double z0, z1;
        box_muller(block_for(seed_, stream, index / 2), z0, z1);
        if (index % 2 == 0) {
            out[k++] = z0;
            ++index;
            if (k < n) {
                out[k++] = z1;
                ++index;
            }
        } else {
            out[k++] = z1;
            ++index;
        }
    }
}

double CounterNormal::at(std::uint64_t stream, std::uint64_t index) const {
    double z0, z1;
    box_muller(block_for(seed_, stream, index / 2), z0, z1);
    return index % 2 == 0 ? z0 : z1;
}

double NormalStream::next() {
    if (pos_ == 2) {
        box_muller(block_for(gen_.seed(), stream_, block_++), buf_[0], buf_[1]);
        pos_ = 0;
    }
    return buf_[pos_++];
}

}  // namespace acwall
