#pragma once

#include <vector>

#include "pseudometric/seed.hpp"

namespace pseudometric {

/// Free-particle operator form of a seed, tabulated at p_j = hbar k_j.
struct OperatorForm {
    Grid grid;
    double hbar = 1.0;
    std::vector<double> p;
    std::vector<double> L; // real for valid seeds
    std::vector<cplx> K;   // K(p)* = K(-p) for valid seeds
    double max_imag_L = 0.0;
    double max_K_defect = 0.0;
};

/// L(p) = int dx e^{-ipx/hbar} u_plus(x), K(p) = int dx e^{ipx/hbar} u_minus(x),
/// by direct DFT over the 2n-1 seed arguments. Throws NumericalError when the
/// output reality constraints fail by more than tol relative to the output scale.
OperatorForm operator_form_free(const SeedPair& seed, const Grid& g, double hbar = 1.0, double tol = 1e-8);

/// Inverse transform back to u_plus, u_minus on seed_arguments(grid).
void operator_form_inverse(const OperatorForm& f, std::vector<cplx>& u_plus, std::vector<cplx>& u_minus);

} // namespace pseudometric
