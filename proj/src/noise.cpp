#include "pfcycle/noise.hpp"

#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

const char* to_string(NoiseKind kind) noexcept { return kind == NoiseKind::UniformSym ? "uniform" : "two_point"; }

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "uniform") return NoiseKind::UniformSym;
    if (name == "two_point") return NoiseKind::TwoPoint;
    fail(ErrorKind::Config, "unknown noise kind '" + name + "' (expected uniform or two_point)");
}

void NoiseModel::validate() const {
    if (kind == NoiseKind::TwoPoint && !(p > 0.0 && p <= 1.0))
        fail(ErrorKind::Parameter, "two-point noise needs P{chi = 1} in (0, 1]");
}

NoiseModel substream(const NoiseModel& model, std::uint64_t run_index) {
    NoiseModel out = model;
    out.stream_id = run_index;
    return out;
}

NoiseStream::NoiseStream(const NoiseModel& model) : model_(model), engine_(seeded_engine(model.seed, model.stream_id)) {
    model_.validate();
}

double NoiseStream::sample() {
    ++draws_;
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (model_.kind == NoiseKind::TwoPoint) return u < model_.p ? 1.0 : -1.0;
    return 2.0 * u - 1.0;
}

}  // namespace pfcycle
