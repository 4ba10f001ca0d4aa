#pragma once

#include "latticetail/complex_matrix.hpp"
#include "latticetail/gaussian_int.hpp"
#include "latticetail/preproc.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace latticetail {

/// Outcome of one sphere search. layer_counts[k-1] is the number of length-k
/// suffix vectors satisfying the partial sphere constraint; total is their
/// sum over all layers. A solution exists iff the last layer count is nonzero.
struct DecodeResult {
    std::optional<GaussianIntVector> solution;
    std::optional<double> objective;
    std::vector<std::uint64_t> layer_counts;
    std::uint64_t total = 0;
    bool censored = false;  // node budget exhausted, counts are lower bounds
    bool overflow = false;  // a counter would have wrapped (practically unreachable)

    bool found() const { return solution.has_value(); }
};

/// All Gaussian integers d with |center - d| <= radius, scanned re ascending,
/// im ascending within each re.
std::vector<GaussInt> gaussian_integers_in_disk(Cplx center, double radius);

/// Fincke-Pohst enumeration with a fixed radius (no shrinking): counts every
/// partial-constraint survivor per layer and returns the best full-length
/// survivor, ties broken lexicographically on (re, im) coordinate pairs.
/// Throws InvalidRadiusError unless rho > 0.
DecodeResult decode(const ComplexMatrix& r, const CplxVector& y, double rho,
                    std::optional<std::uint64_t> node_budget = std::nullopt);

/// Full pipeline: preprocess h, rotate the observation into the triangular
/// system, decode, and map the winner back through the basis change.
/// layer_counts refer to the preprocessed system.
DecodeResult solve(const ComplexMatrix& h, const CplxVector& r_vec, double rho,
                   PreprocMethod method, double delta = 0.75,
                   std::optional<std::uint64_t> node_budget = std::nullopt);

}  // namespace latticetail
