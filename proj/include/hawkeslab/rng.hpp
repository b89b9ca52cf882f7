#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace hawkeslab {

/// Philox-4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The output block is a pure function of (key, counter), so streams are
/// addressed rather than seeded: the 64-bit key carries the experiment seed
/// and the upper counter words carry (replicate, tag). Distinct addresses
/// give statistically independent streams without any state hand-off.
class Philox4x32 {
  public:
    using result_type = std::uint32_t;

    Philox4x32(std::uint64_t key, std::uint32_t replicate, std::uint32_t tag)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
          ctr_{0u, 0u, replicate, tag} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }

    result_type operator()() {
        if (pos_ == 4) {
            buf_ = block(ctr_, key_);
            // 2^64 blocks per stream; the (replicate, tag) words are never touched.
            if (++ctr_[0] == 0) ++ctr_[1];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> x,
                                              std::array<std::uint32_t, 2> k) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * x[0];
            const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * x[2];
            x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
                 static_cast<std::uint32_t>(p0)};
        }
        return x;
    }

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

/// One reproducible random stream addressed by (seed, replicate, tag).
///
/// All samplers are self-contained so that draws are bit-identical across
/// platforms and thread schedules. Streams are never shared between workers;
/// use substream() to derive an independent stream for a sub-task.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint32_t replicate, std::uint32_t tag = 0)
        : seed_(seed), replicate_(replicate), tag_(tag), engine_(seed, replicate, tag) {}

    RngStream substream(std::uint32_t tag) const { return RngStream(seed_, replicate_, tag); }

    std::uint32_t next_u32() { return engine_(); }

    std::uint64_t next_u64() {
        const std::uint64_t hi = engine_();
        return (hi << 32) | engine_();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        const std::uint64_t a = engine_() >> 5;  // 27 bits
        const std::uint64_t b = engine_() >> 6;  // 26 bits
        return static_cast<double>((a << 26) | b) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    /// Unbiased integer in [0, n) (Lemire's multiply-shift rejection).
    std::uint64_t uniform_int(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (-n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        return mean < 30.0 ? poisson_small(mean) : poisson_ptrs(mean);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint32_t replicate() const { return replicate_; }
    std::uint32_t tag() const { return tag_; }

  private:
    // Knuth's product method; fine for small means.
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            prod *= uniform01();
        } while (prod > limit);
        return k - 1;
    }

    // Hormann's PTRS transformed rejection, valid for mean >= 10.
    std::uint64_t poisson_ptrs(double mean) {
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            const double u = uniform01() - 0.5;
            const double v = uniform01();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                kf * log_mean - mean - std::lgamma(kf + 1.0)) {
                return static_cast<std::uint64_t>(kf);
            }
        }
    }

    std::uint64_t seed_;
    std::uint32_t replicate_;
    std::uint32_t tag_;
    Philox4x32 engine_;
};

}  // namespace hawkeslab
