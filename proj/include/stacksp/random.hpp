#pragma once

#include <cstdint>
#include <random>

#include "stacksp/errors.hpp"
#include "stacksp/rational.hpp"

namespace stacksp {

// Deterministic RNG. All sampling goes through below(), which uses rejection
// instead of std::uniform_int_distribution so that streams are identical
// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform value in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw InvalidParamsError("Rng::below(0)");
        const std::uint64_t skip = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= skip) return (r - skip) % bound;
        }
    }

    // Uniform value in [lo, hi] inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw InvalidParamsError("Rng::between: empty range");
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return below(2) == 1; }

    // Uniform rational in [0, hi] with denominator drawn from [1, max_den]:
    // pick the denominator first, then a numerator in [0, hi * den].
    Rat rational_in(std::int64_t hi, std::int64_t max_den) {
        if (hi < 0 || max_den < 1) throw InvalidParamsError("Rng::rational_in");
        const std::int64_t den = between(1, max_den);
        const std::int64_t num = between(0, hi * den);
        return Rat(Int(num), Int(den));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace stacksp
