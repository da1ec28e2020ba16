#pragma once

#include <cstdint>
#include <random>

#include "secrep/field.hpp"

namespace secrep {

/// Seedable deterministic random source. `split` derives an independent,
/// replayable stream per node id from one master seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    static Rng split(std::uint64_t seed, std::uint32_t stream);

    std::uint64_t word() { return eng_(); }

    /// Uniform in [0, bound) by rejection sampling; no modulo bias.
    std::uint32_t below(std::uint32_t bound);

private:
    std::mt19937_64 eng_;
};

Fp uniform_element(Rng& rng, PrimeField field);

}  // namespace secrep
