#pragma once

#include <cmath>
#include <cstdint>

namespace fpt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++; initialized through splitmix64 so any (seed, stream) key
/// yields a well-mixed state.
class Xoshiro256pp {
public:
    Xoshiro256pp() : Xoshiro256pp(0, 0) {}

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t key = seed ^ (stream + 0x632be59bd9b4e019ULL) * 0xff51afd7ed558ccdULL;
        for (auto& word : s_) word = splitmix64(key);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

namespace zigg {
// Marsaglia-Tsang ziggurat tables for the standard normal, 128 layers.
struct Tables {
    std::uint32_t kn[128];
    double wn[128];
    double fn[128];
};
const Tables& tables();
constexpr double kTailR = 3.442619855899;
}  // namespace zigg

/// Deterministic per-path random stream: uniforms, ziggurat normals,
/// exponentials. Streams keyed by (seed, path index) so estimates are
/// independent of execution order and worker count.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_index) : gen_(seed, path_index) {}

    /// uniform in [0, 1)
    double uniform() { return double(gen_.next() >> 11) * 0x1.0p-53; }

    /// uniform in (0, 1]; safe under log()
    double uniform_pos() { return double((gen_.next() >> 11) + 1) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    double normal() {
        const auto& t = zigg::tables();
        for (;;) {
            const std::int32_t hz = std::int32_t(std::uint32_t(gen_.next()));
            const std::uint32_t iz = std::uint32_t(hz) & 127u;
            if (std::uint32_t(hz < 0 ? -std::int64_t(hz) : std::int64_t(hz)) < t.kn[iz])
                return hz * t.wn[iz];
            const double x = normal_fix(hz, iz, t);
            if (!std::isnan(x)) return x;
        }
    }

private:
    double normal_fix(std::int32_t hz, std::uint32_t iz, const zigg::Tables& t) {
        if (iz == 0) {  // tail beyond R, Marsaglia's exact method
            for (;;) {
                const double x = -std::log(uniform_pos()) / zigg::kTailR;
                const double y = -std::log(uniform_pos());
                if (y + y > x * x)
                    return hz > 0 ? zigg::kTailR + x : -(zigg::kTailR + x);
            }
        }
        const double x = hz * t.wn[iz];
        if (t.fn[iz] + uniform() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x))
            return x;
        return std::nan("");  // retry with a fresh draw
    }

    Xoshiro256pp gen_;
};

}  // namespace fpt
