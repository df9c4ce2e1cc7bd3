// rng.hpp
//
// Injectable randomness source. Probe builders take a RandomSource so
// session ids and cookies are reproducible under a fixed seed.

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace vpnscan {

class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    uint64_t next_u64() {
        uint8_t buf[8];
        fill(buf);
        uint64_t v = 0;
        for (uint8_t b : buf) v = v << 8 | b;
        return v;
    }

    // uniform in [0, n)
    uint64_t next_below(uint64_t n) { return n ? next_u64() % n : 0; }

    uint64_t nonzero_u64() {
        uint64_t v = next_u64();
        while (v == 0) v = next_u64();
        return v;
    }
};

// mt19937_64 is fully specified by the standard, so fixture bytes frozen
// from a seed stay valid across platforms.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(uint64_t seed) : gen_(seed) {}

    void fill(std::span<uint8_t> out) override {
        size_t i = 0;
        while (i < out.size()) {
            uint64_t v = gen_();
            for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
                out[i] = static_cast<uint8_t>(v >> (8 * k));
            }
        }
    }

private:
    std::mt19937_64 gen_;
};

class SystemRandom final : public RandomSource {
public:
    void fill(std::span<uint8_t> out) override {
        std::random_device rd;
        for (auto& b : out) b = static_cast<uint8_t>(rd());
    }
};

}  // namespace vpnscan
