#pragma once

#include <cmath>
#include <cstdint>

namespace lsalab {

// Counter-based stream (Philox4x32-10, Salmon et al. 2011).  A stream is
// keyed by (master seed, replica id, stream id); draws within the stream are
// indexed by a 64-bit counter so replicas can run in any order and still
// produce identical output.
class RngStream {
public:
    RngStream() : RngStream(0, 0, 0) {}

    RngStream(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t stream_id = 0) {
        key_[0] = static_cast<std::uint32_t>(master_seed);
        key_[1] = static_cast<std::uint32_t>(master_seed >> 32);
        replica_lo_ = static_cast<std::uint32_t>(replica);
        replica_hi_ = static_cast<std::uint32_t>((replica >> 32) ^ (stream_id * 0x9E3779B9u));
        counter_ = 0;
        block_pos_ = 4; // force a fresh block on first draw
        have_spare_gauss_ = false;
        spare_gauss_ = 0.0;
    }

    // Jump to an absolute draw index. Used by steppers that key their draws
    // by (step index, draw within step).
    void seek(std::uint64_t draw_index) {
        counter_ = draw_index;
        block_pos_ = 4;
        have_spare_gauss_ = false;
    }

    std::uint32_t next_u32() {
        if (block_pos_ >= 4) {
            fill_block();
        }
        return block_[block_pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        std::uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform double in (0,1): 53 random bits, never exactly 0 or 1.
    double uniform() {
        std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the spare is cached, so a stream is
    // sequential within a replica (which is all the determinism we need).
    double gaussian() {
        if (have_spare_gauss_) {
            have_spare_gauss_ = false;
            return spare_gauss_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 6.283185307179586476925286766559 * u2;
        spare_gauss_ = r * std::sin(phi);
        have_spare_gauss_ = true;
        return r * std::cos(phi);
    }

    // Index in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // Multiply-shift; bias is negligible for the n used here (<= 2^32).
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        lo = static_cast<std::uint32_t>(p);
        hi = static_cast<std::uint32_t>(p >> 32);
    }

    void fill_block() {
        std::uint32_t c[4];
        c[0] = static_cast<std::uint32_t>(counter_);
        c[1] = static_cast<std::uint32_t>(counter_ >> 32);
        c[2] = replica_lo_;
        c[3] = replica_hi_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t lo0, hi0, lo1, hi1;
            mulhilo(0xD2511F53u, c[0], lo0, hi0);
            mulhilo(0xCD9E8D57u, c[2], lo1, hi1);
            std::uint32_t n0 = hi1 ^ c[1] ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c[3] ^ k1;
            std::uint32_t n3 = lo0;
            c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        block_[0] = c[0]; block_[1] = c[1]; block_[2] = c[2]; block_[3] = c[3];
        ++counter_;
        block_pos_ = 0;
    }

    std::uint32_t key_[2];
    std::uint32_t replica_lo_, replica_hi_;
    std::uint64_t counter_;
    std::uint32_t block_[4];
    int block_pos_;
    bool have_spare_gauss_;
    double spare_gauss_;
};

} // namespace lsalab
