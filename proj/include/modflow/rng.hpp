#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace modflow {

// Counter-based substream RNG. A stream is keyed by (seed, path index, role),
// so parallel and serial runs over the same path set draw identical variates.
enum class StreamRole : std::uint64_t {
    Signal = 1,
    Switch = 2,    // sub = agent index when several switch mechanisms coexist
    Bridge = 10,   // sub = source index, one stream per source
    Payoff = 200,
    Scratch = 300,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t role) {
        std::uint64_t s = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
        s = splitmix64(s ^ splitmix64(path_index ^ 0xbb67ae8584caa73bULL));
        state_ = splitmix64(s ^ splitmix64(role ^ 0x3c6ef372fe94f82bULL));
    }
    RngStream(std::uint64_t seed, std::uint64_t path_index, StreamRole role,
              std::uint64_t sub = 0)
        : RngStream(seed, path_index, static_cast<std::uint64_t>(role) + sub) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on (0,1), never returns 0 or 1
    double uniform() {
        const double u = (next_u64() >> 11) * 0x1.0p-53;
        return u == 0.0 ? 0x1.0p-53 : u;
    }

    // standard normal via Box-Muller; pairs cached for determinism
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    std::uint64_t state_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace modflow
