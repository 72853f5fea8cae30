#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace weylwalk {

/// Counter-based random stream. A draw is a hash of (key, counter), where
/// the key mixes the master seed with the stream id, so streams are cheap
/// values: copying one and deriving substreams never touches shared state.
/// Identical (master_seed, stream_id) reproduce identical draw sequences.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(uint64_t master_seed, uint64_t stream_id)
        : master_(master_seed), stream_(stream_id) {
        key_ = mix64(mix64(master_seed + 0x9E3779B97F4A7C15ull) ^ mix64(stream_id + 0xBF58476D1CE4E5B9ull));
    }

    uint64_t master_seed() const { return master_; }
    uint64_t stream_id() const { return stream_; }

    /// Statistically independent substream keyed by `sub`.
    RngStream derive(uint64_t sub) const {
        return RngStream(master_, mix64(stream_ ^ mix64(sub + 0x94D049BB133111EBull)));
    }

    uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1): rejects exact zeros (probability 2^-53 per draw).
    double uniform_pos() {
        double u;
        do { u = uniform(); } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second value of each pair is
    /// cached on the stream.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Gamma(alpha, 1) by Marsaglia-Tsang squeeze, boosted for alpha < 1.
    double gamma(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("gamma needs alpha > 0");
        if (alpha < 1.0) {
            const double u = uniform_pos();
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Beta(a, b) from a pair of gamma draws.
    double beta(double a, double b) {
        const double g1 = gamma(a);
        const double g2 = gamma(b);
        return g1 / (g1 + g2);
    }

    /// Integer in [0, n).
    uint64_t below(uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        // Rejection keeps the law exactly uniform.
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = next_u64(); } while (x >= limit);
        return x % n;
    }

private:
    static uint64_t mix64(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    uint64_t master_ = 0, stream_ = 0, key_ = 0, counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace weylwalk
