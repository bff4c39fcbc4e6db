#pragma once

// Bounded iid noise chi in [-1, 1].
//
// Stream (seed, stream_id) is a std::mt19937_64 seeded through std::seed_seq
// with the four 32-bit words {seed_lo, seed_hi, stream_lo, stream_hi}. A draw
// takes the top 53 bits of one engine output as u in [0, 1); UniformSym returns
// 2u - 1, TwoPoint(p) returns +1 if u < p and -1 otherwise. Every step of this
// construction is fixed by the C++ standard, so sequences are identical on all
// conforming platforms.

#include <cstdint>
#include <random>
#include <string>

namespace pfcycle {

enum class NoiseKind { UniformSym, TwoPoint };

const char* to_string(NoiseKind kind) noexcept;
NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseModel {
    NoiseKind kind = NoiseKind::UniformSym;
    double p = 0.5;  ///< P{chi = +1} for TwoPoint
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Throws Error(Parameter) unless p in (0, 1].
    void validate() const;
    /// TwoPoint with p != 1/2 has a non-zero mean.
    bool zero_mean() const noexcept { return kind == NoiseKind::UniformSym || p == 0.5; }
};

/// Same kind and seed, stream_id = run_index. Independent of call order.
NoiseModel substream(const NoiseModel& model, std::uint64_t run_index);

class NoiseStream {
public:
    explicit NoiseStream(const NoiseModel& model);

    /// Next draw in [-1, 1].
    double sample();
    std::uint64_t draws() const noexcept { return draws_; }
    const NoiseModel& model() const noexcept { return model_; }

private:
    NoiseModel model_;
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

}  // namespace pfcycle
