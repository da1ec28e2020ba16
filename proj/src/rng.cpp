#include "secrep/rng.hpp"

#include <limits>
#include <stdexcept>

namespace secrep {

Rng::Rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    eng_.seed(seq);
}

Rng Rng::split(std::uint64_t seed, std::uint32_t stream) {
    Rng r(0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    r.eng_.seed(seq);
    return r;
}

std::uint32_t Rng::below(std::uint32_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    // accept only words below the largest multiple of bound within 2^64, so
    // every residue is hit by the same number of words
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t overhang = (max % bound + 1) % bound;  // 2^64 mod bound
    const std::uint64_t usable = max - overhang;               // inclusive
    for (;;) {
        const std::uint64_t w = eng_();
        if (overhang == 0 || w <= usable) return static_cast<std::uint32_t>(w % bound);
    }
}

Fp uniform_element(Rng& rng, PrimeField field) {
    return Fp(rng.below(field.order()), field);
}

}  // namespace secrep
