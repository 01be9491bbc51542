#pragma once

// Deterministic randomness for the property suites. Everything reduces to
// raw mt19937_64 draws (the engine's output sequence is fixed by the
// standard), so a seed fully determines every generated function on every
// platform. Task-level splitting hashes (seed, index) into a fresh engine.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "rical/piecewise.hpp"
#include "rical/rational.hpp"

namespace rical {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : raw() % n; }

    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    static Rng split(std::uint64_t seed, std::uint64_t task) {
        // splitmix64 finalizer over the pair
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (task + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 eng_;
};

// Step function with at most max_pieces pieces, breakpoints on the grid
// {j/8 : 0 <= j <= 32} and values on {j/4 : -16 <= j <= 16}.
inline StepFunction random_step(Rng& rng, int max_pieces) {
    int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_pieces))) + 1;
    std::set<long> grid;
    while (static_cast<int>(grid.size()) < n + 1) grid.insert(rng.range(0, 32));
    std::vector<Rational> bps;
    for (long j : grid) bps.push_back(Rational(j, 8));
    std::vector<Rational> vals;
    for (int i = 0; i < n; ++i) vals.push_back(Rational(rng.range(-16, 16), 4));
    return StepFunction(bps, vals);
}

inline StepFunction random_nonneg_step(Rng& rng, int max_pieces) {
    int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_pieces))) + 1;
    std::set<long> grid;
    while (static_cast<int>(grid.size()) < n + 1) grid.insert(rng.range(0, 32));
    std::vector<Rational> bps;
    for (long j : grid) bps.push_back(Rational(j, 8));
    std::vector<Rational> vals;
    for (int i = 0; i < n; ++i) vals.push_back(Rational(rng.range(0, 16), 4));
    return StepFunction(bps, vals);
}

// Nonincreasing step function with support exactly [0, 1), positive values
// on a dyadic grid, about `pieces` pieces.
inline StepFunction random_monotone_profile(Rng& rng, int pieces) {
    std::set<long> grid{0, 16};
    while (static_cast<int>(grid.size()) < pieces + 1) grid.insert(rng.range(1, 15));
    std::vector<Rational> bps;
    for (long j : grid) bps.push_back(Rational(j, 16));
    long level = rng.range(4, 64);
    std::vector<Rational> vals;
    for (size_t i = 0; i + 1 < bps.size(); ++i) {
        vals.push_back(Rational(level, 8));
        if (level > 1) level -= rng.range(0, level - 1);  // nonincreasing, stays positive
    }
    return StepFunction(bps, vals);
}

}  // namespace rical
