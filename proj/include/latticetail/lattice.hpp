#pragma once

#include "latticetail/complex_matrix.hpp"
#include "latticetail/gaussian_int.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace latticetail {

/// Volume of a hypersphere in k complex dimensions: pi^k (rho^2)^k / k!.
double sphere_volume(std::size_t k, double rho);

/// Surface area of that sphere, d/d rho of sphere_volume.
double sphere_surface(std::size_t k, double rho);

/// Upper bound on the covering radius of the lattice of an upper triangular
/// factor with positive real diagonal: sqrt(1/2 * sum_i R_ii^2).
double covering_radius_ub(const ComplexMatrix& r);

/// A k-dimensional search sphere over the lattice of an upper triangular
/// factor: all d in (CZ)^k with ||center - r_k d||^2 <= radius^2.
struct SphereSpec {
    ComplexMatrix r_k;   // k x k, positive real diagonal
    CplxVector center;   // length k
    double radius = 0.0;
};

struct SandwichBounds {
    double lower = 0.0;  // may be negative, returned unclamped
    double upper = 0.0;
};

/// Point-count sandwich for the sphere: mu must dominate the covering radius
/// of the lattice of spec.r_k (passing the bound of the full factor is valid).
SandwichBounds sandwich_bounds(const SphereSpec& spec, double mu);

/// ||y - R d||^2 for a triangular system, accumulated bottom row up. This is
/// the one metric everybody (decoder, oracles, tests) evaluates, so boundary
/// comparisons against rho^2 can never disagree between them.
double residual_metric(const ComplexMatrix& r, const CplxVector& y, const GaussianIntVector& d);

struct BruteCount {
    std::uint64_t count = 0;
    std::vector<GaussianIntVector> points;
};

/// Exhaustive enumeration of the sphere's lattice points. The candidate box
/// comes from interval back-substitution on the triangular system; membership
/// is the plain floating comparison residual_metric <= radius^2.
/// Throws InvalidRadiusError for negative radius and TooLargeError when k > 3
/// or the volume heuristic predicts more than 1e6 points.
BruteCount count_points_brute(const SphereSpec& spec);

/// Closest-point reference: exhaustive minimization over the Babai point
/// +/- 3 box in every coordinate component. Ties go to the lexicographically
/// smallest vector, first coordinate most significant. Intended for M <= 3.
GaussianIntVector clp_brute(const ComplexMatrix& r, const CplxVector& y);

}  // namespace latticetail
