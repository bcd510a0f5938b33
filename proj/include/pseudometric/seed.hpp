#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pseudometric/kernel.hpp"

namespace pseudometric {

/// Homogeneous pair generating u(x, y) = u_plus(x - y) + u_minus(x + y).
/// Valid pairs satisfy u_plus(x)* = u_plus(-x) and u_minus(x)* = u_minus(x).
struct SeedPair {
    std::function<cplx(double)> u_plus;
    std::function<cplx(double)> u_minus;
    std::string name = "custom";

    static SeedPair zero();
    /// Piecewise-linear through the samples, 0 outside [xs.front(), xs.back()].
    static SeedPair tabulated(std::vector<double> xs, std::vector<cplx> plus, std::vector<cplx> minus);

    SeedPair scaled(double s) const;
};

/// Sum of two seed pairs.
SeedPair operator+(const SeedPair& a, const SeedPair& b);

namespace seeds {

/// w_plus(x) = (i/4)(|x| - pi) sign(x), w_minus = 0. Unscaled; multiply by zeta.
SeedPair bender_tan();
/// w_plus(x) = (i m L / 2 hbar^2) sign(x), w_minus = 0. Unscaled; multiply by zeta.
SeedPair jmp_2005(double L, const PhysConstants& k);
/// CSV with header "x,plus_re,plus_im,minus_re,minus_im".
SeedPair from_csv(const std::string& path);

} // namespace seeds

/// Arguments x - y and x + y sampled on the grid: (k - (n-1)) h for k = 0 .. 2n-2.
std::vector<double> seed_arguments(const Grid& g);

/// Largest violation of the two reality constraints over seed_arguments(g).
double seed_constraint_violation(const SeedPair& seed, const Grid& g);

/// Throws ConstraintError when the violation exceeds tol * max(1, max |u|).
void check_seed(const SeedPair& seed, const Grid& g, double tol = 1e-12);

Kernel seed_to_kernel(const SeedPair& seed, const Grid& g, bool include_identity, bool include_parity);

} // namespace pseudometric
