#pragma once

#include <cmath>
#include <cstdint>

namespace attcc {

// Counter-based stream: draw i is a pure function of (seed, stream, i), so a
// trial range can be partitioned across workers without sharing generator
// state and the results do not depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(derive_key(seed, stream)) {}

    // The next draw consumed will be draw number counter+1.
    void seek(std::uint64_t counter) { counter_ = counter; }

    std::uint64_t next_u64() {
        return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
    }

    // Uniform on (0,1]; never returns 0, so log() of it is finite.
    double uniform_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
    }

    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    bool bernoulli(double p) { return uniform_open() <= p; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

private:
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(seed + 0x9E3779B97F4A7C15ULL) ^
               mix(stream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace attcc
