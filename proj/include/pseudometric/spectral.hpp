#pragma once

#include <string>
#include <vector>

#include "pseudometric/kernel.hpp"

namespace pseudometric {

enum class Boundary {
    Dirichlet, // box walls on the first and last grid node
    Truncated  // full line cut at the grid ends, wavefunctions vanish beyond
};

struct DiscretizedHamiltonian {
    Grid grid;
    Boundary bc = Boundary::Dirichlet;
    int first = 0; // grid index of the first active node
    ComplexMatrix H;
    std::vector<std::string> warnings;

    int size() const { return static_cast<int>(H.rows()); }
};

/// -(hbar^2/2m) D2 + diag(v) on the active nodes, deltas as i zeta / h at the
/// nearest node.
DiscretizedHamiltonian discretize(const PotentialSpec& pot, const Grid& g, Boundary bc);
/// Dirichlet for boxes, truncated otherwise.
DiscretizedHamiltonian discretize(const PotentialSpec& pot, const Grid& g);

struct BiorthonormalSystem {
    Eigen::VectorXcd energies;
    ComplexMatrix psi; // right eigenvectors, h |psi|^2 = 1
    ComplexMatrix phi; // left eigenvectors, h <psi_n|phi_m> = delta_nm
    double h = 1.0;
    double condition = 1.0; // largest eigenvalue condition number

    int size() const { return static_cast<int>(energies.size()); }
    /// max |h <psi_n|phi_m> - delta_nm|.
    double biorthonormality_defect() const;
    /// max_n |H psi_n - E_n psi_n| and |H^dagger phi_n - conj(E_n) phi_n|, relative to |H|.
    double right_residual(const ComplexMatrix& H) const;
    double left_residual(const ComplexMatrix& H) const;
};

/// Right and left eigenvectors from two independent eigensolves, paired by
/// eigenvalue, sorted by Re E then Im E. Throws ExceptionalPointError when the
/// eigenvector condition number exceeds 1e8 or two eigenvalues are closer than 1e-9.
BiorthonormalSystem biorthonormalize(const ComplexMatrix& H, double h);
BiorthonormalSystem biorthonormalize(const DiscretizedHamiltonian& dh);

/// sum_n phi_n(x) conj(phi_n(y)) over the n_modes modes of smallest |Re E|,
/// written on the active block of the grid; singular parts stay 0.
Kernel spectral_metric(const BiorthonormalSystem& sys, const DiscretizedHamiltonian& dh, int n_modes);

/// "n,Re_E,Im_E" rows.
void write_spectrum_csv(const BiorthonormalSystem& sys, const std::string& path);

} // namespace pseudometric
