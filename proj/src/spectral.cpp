#include "pseudometric/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "pseudometric/errors.hpp"

namespace pseudometric {

DiscretizedHamiltonian discretize(const PotentialSpec& pot, const Grid& g, Boundary bc) {
    pot.validate();
    if (pot.domain.is_box() && std::abs(g.X() - 0.5 * pot.domain.L) > 1e-12 * g.X())
        throw DomainError("grid half-width must equal L/2 for a box potential");
    DiscretizedHamiltonian dh{g, bc, 0, {}, {}};
    const int n = g.n();
    dh.first = bc == Boundary::Dirichlet ? 1 : 0;
    const int m = bc == Boundary::Dirichlet ? n - 2 : n;
    const double h = g.h();
    const double t = pot.constants.hbar * pot.constants.hbar / (2.0 * pot.constants.mass * h * h);
    dh.H = ComplexMatrix::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        dh.H(k, k) = 2.0 * t + pot.segment_value(g.node(k + dh.first));
        if (k > 0) dh.H(k, k - 1) = -t;
        if (k + 1 < m) dh.H(k, k + 1) = -t;
    }
    for (const auto& d : pot.deltas) {
        const double lo = g.node(dh.first), hi = g.node(dh.first + m - 1);
        if (d.a < lo - 0.5 * h || d.a > hi + 0.5 * h) {
            dh.warnings.push_back("delta at a = " + std::to_string(d.a) + " lies off the active grid; dropped");
            continue;
        }
        const int k = g.nearest(d.a) - dh.first;
        const int kk = std::clamp(k, 0, m - 1);
        if (std::abs(g.node(kk + dh.first) - d.a) > 1e-9 * h)
            dh.warnings.push_back("delta at a = " + std::to_string(d.a) + " placed on node x = " +
                                  std::to_string(g.node(kk + dh.first)));
        dh.H(kk, kk) += cplx(0.0, d.zeta / h);
    }
    return dh;
}

DiscretizedHamiltonian discretize(const PotentialSpec& pot, const Grid& g) {
    return discretize(pot, g, pot.domain.is_box() ? Boundary::Dirichlet : Boundary::Truncated);
}

double BiorthonormalSystem::biorthonormality_defect() const {
    ComplexMatrix G = h * psi.adjoint() * phi;
    G -= ComplexMatrix::Identity(G.rows(), G.cols());
    return sup_norm(G);
}

double BiorthonormalSystem::right_residual(const ComplexMatrix& H) const {
    const double scale = std::max(1.0, H.cwiseAbs().rowwise().sum().maxCoeff());
    double worst = 0.0;
    for (int k = 0; k < size(); ++k)
        worst = std::max(worst, (H * psi.col(k) - energies(k) * psi.col(k)).norm() / psi.col(k).norm());
    return worst / scale;
}

double BiorthonormalSystem::left_residual(const ComplexMatrix& H) const {
    const double scale = std::max(1.0, H.cwiseAbs().rowwise().sum().maxCoeff());
    double worst = 0.0;
    for (int k = 0; k < size(); ++k)
        worst = std::max(worst, (H.adjoint() * phi.col(k) - std::conj(energies(k)) * phi.col(k)).norm() /
                                    phi.col(k).norm());
    return worst / scale;
}

BiorthonormalSystem biorthonormalize(const ComplexMatrix& H, double h) {
    const int m = static_cast<int>(H.rows());
    Eigen::ComplexEigenSolver<ComplexMatrix> right(H, true);
    Eigen::ComplexEigenSolver<ComplexMatrix> left(H.adjoint(), true);
    if (right.info() != Eigen::Success || left.info() != Eigen::Success)
        throw NumericalError("eigensolver failed to converge");

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    const auto& E = right.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (E(a).real() != E(b).real()) return E(a).real() < E(b).real();
        return E(a).imag() < E(b).imag();
    });

    const double scale = std::max(1.0, E.cwiseAbs().maxCoeff());
    for (int k = 0; k + 1 < m; ++k)
        for (int l = k + 1; l < m; ++l)
            if (std::abs(E(order[k]) - E(order[l])) < 1e-9 * scale)
                throw ExceptionalPointError("eigenvalues " + std::to_string(order[k]) + " and " +
                                            std::to_string(order[l]) + " coalesce");

    BiorthonormalSystem sys;
    sys.h = h;
    sys.energies.resize(m);
    sys.psi.resize(m, m);
    sys.phi.resize(m, m);
    std::vector<bool> used(m, false);
    const auto& El = left.eigenvalues();
    for (int k = 0; k < m; ++k) {
        const int r = order[k];
        sys.energies(k) = E(r);
        Eigen::VectorXcd p = right.eigenvectors().col(r);
        p /= std::sqrt(h) * p.norm();
        Eigen::Index big;
        p.cwiseAbs().maxCoeff(&big);
        p *= std::abs(p(big)) / p(big);
        sys.psi.col(k) = p;

        int best = -1;
        double dist = 0.0;
        for (int l = 0; l < m; ++l) {
            if (used[l]) continue;
            const double d = std::abs(std::conj(El(l)) - E(r));
            if (best < 0 || d < dist) {
                best = l;
                dist = d;
            }
        }
        used[best] = true;
        Eigen::VectorXcd q = left.eigenvectors().col(best);
        const cplx overlap = h * p.dot(q); // conjugates p
        if (std::abs(overlap) < 1e-300) throw ExceptionalPointError("left and right eigenvectors are orthogonal");
        sys.phi.col(k) = q / overlap;
        // Eigenvalue condition number |psi| |phi| / |<psi|phi>| with both norms in the grid metric.
        sys.condition = std::max(sys.condition, std::sqrt(h) * sys.phi.col(k).norm());
    }
    if (!(sys.condition < 1e8))
        throw ExceptionalPointError("eigenvectors are nearly parallel (condition number " +
                                    std::to_string(sys.condition) + ")");
    return sys;
}

BiorthonormalSystem biorthonormalize(const DiscretizedHamiltonian& dh) { return biorthonormalize(dh.H, dh.grid.h()); }

Kernel spectral_metric(const BiorthonormalSystem& sys, const DiscretizedHamiltonian& dh, int n_modes) {
    const int m = sys.size();
    if (n_modes < 1 || n_modes > m)
        throw ConfigError("n_modes must lie in [1, " + std::to_string(m) + "], got " + std::to_string(n_modes));
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(sys.energies(a).real()) < std::abs(sys.energies(b).real());
    });
    ComplexMatrix Phi(m, n_modes);
    for (int k = 0; k < n_modes; ++k) Phi.col(k) = sys.phi.col(order[k]);
    Kernel out(dh.grid);
    out.smooth.block(dh.first, dh.first, m, m) = Phi * Phi.adjoint();
    return out;
}

void write_spectrum_csv(const BiorthonormalSystem& sys, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot write " + path);
    std::fprintf(f, "n,Re_E,Im_E\n");
    for (int k = 0; k < sys.size(); ++k)
        std::fprintf(f, "%d,%.12e,%.12e\n", k + 1, sys.energies(k).real(), sys.energies(k).imag());
    std::fclose(f);
}

} // namespace pseudometric
