#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace acwall {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Order-independent replica seed: a splitmix64 mix of (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Gaussian numbers addressed by (seed, stream, index). Any entry can be
/// regenerated without touching the others, so results do not depend on the
/// order in which workers consume them.
class CounterNormal {
public:
    explicit CounterNormal(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Standard normals for indices [first, first + out.size()) of a stream.
    void fill(std::uint64_t stream, std::uint64_t first, std::span<double> out) const;

    double at(std::uint64_t stream, std::uint64_t index) const;

private:
    std::uint64_t seed_;
};

/// Sequential view on one stream of a CounterNormal, buffered by block.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed), stream_(stream) {}

    double next();

private:
    CounterNormal gen_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<double, 2> buf_{};
    int pos_ = 2;
};

}  // namespace acwall
