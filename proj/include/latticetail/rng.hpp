#pragma once

#include "latticetail/complex_matrix.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace latticetail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-trial random stream. The engine seed mixes the run seed with the trial
/// index, so a record depends only on (seed, index), never on which worker
/// happened to execute the trial.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t index)
        : engine_(splitmix64(splitmix64(seed) ^ (index + 1))) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Marsaglia polar method; std::normal_distribution is implementation
    // defined, which would break the bit-identical determinism contract.
    void normal_pair(double& g0, double& g1) {
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        g0 = u * f;
        g1 = v * f;
    }

    /// Circularly symmetric complex normal with total variance `variance`.
    Cplx cnormal(double variance) {
        double g0, g1;
        normal_pair(g0, g1);
        const double s = std::sqrt(variance / 2.0);
        return Cplx{s * g0, s * g1};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace latticetail
