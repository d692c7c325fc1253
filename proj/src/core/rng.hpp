#pragma once

#include <cstdint>

namespace uthresh {

// Counter-based splittable RNG. Every replication owns a stream derived from
// (master seed, replication index, purpose), so results do not depend on how
// work is scheduled across threads.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t key) : state_(key) {
        // burn a couple of outputs so trivially related keys decorrelate
        next_u64();
        next_u64();
    }

    static RngStream derive(std::uint64_t master_seed, std::uint64_t replication,
                            std::uint64_t purpose = 0) {
        std::uint64_t s = master_seed;
        std::uint64_t a = splitmix64(s);
        s ^= 0x632BE59BD9B4E019ULL * (replication + 1);
        std::uint64_t b = splitmix64(s);
        s ^= 0x9E6C63D0876A9F4BULL * (purpose + 1);
        std::uint64_t c = splitmix64(s);
        return RngStream(a ^ (b * 0x2545F4914F6CDD1DULL) ^ c);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform on [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // symmetric uniform on [-amplitude, amplitude]
    double symmetric(double amplitude) { return amplitude * (2.0 * uniform01() - 1.0); }

private:
    std::uint64_t state_;
};

}  // namespace uthresh
