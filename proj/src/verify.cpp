#include "pseudometric/verify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pseudometric/errors.hpp"

namespace pseudometric {

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["residual"] = residual;
    j["relative"] = relative;
    j["pass"] = pass;
    nlohmann::json m = meta;
    m["tolerance"] = tolerance;
    j["meta"] = m;
    return j;
}

double Tolerances::kg_tolerance(const PotentialSpec& pot, const Grid& g) const {
    const double s = pot.constants.c0() * pot.max_strength();
    return kg_coeff * s * s * g.X() + kg_floor;
}

double Tolerances::cross_tolerance(const PotentialSpec& pot, const Grid& g) const {
    const double s = pot.constants.c0() * pot.max_strength();
    return cross_coeff * s * s * g.X() + kg_floor;
}

void tolerances_from_json(const nlohmann::json& j, Tolerances& t) {
    try {
        t.kg_coeff = j.value("kg_coeff", t.kg_coeff);
        t.kg_floor = j.value("kg_floor", t.kg_floor);
        t.cross_coeff = j.value("cross_coeff", t.cross_coeff);
        t.pseudo_hermiticity = j.value("pseudo_hermiticity", t.pseudo_hermiticity);
        t.hermiticity = j.value("hermiticity", t.hermiticity);
        t.invertibility = j.value("invertibility", t.invertibility);
        t.positivity = j.value("positivity", t.positivity);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed tolerances: ") + e.what());
    }
}

nlohmann::json tolerances_to_json(const Tolerances& t) {
    return {{"kg_coeff", t.kg_coeff},
            {"kg_floor", t.kg_floor},
            {"cross_coeff", t.cross_coeff},
            {"pseudo_hermiticity", t.pseudo_hermiticity},
            {"hermiticity", t.hermiticity},
            {"invertibility", t.invertibility},
            {"positivity", t.positivity}};
}

ActiveBlock ActiveBlock::for_domain(const Domain& d, const Grid& g) {
    if (d.is_box()) return {1, g.n() - 2};
    return {0, g.n()};
}

ComplexMatrix kernel_matrix(const Kernel& k, const ActiveBlock& b) {
    const Grid& g = k.grid;
    if (b.first < 0 || b.first + b.size > g.n()) throw DomainError("active block exceeds the grid");
    ComplexMatrix M = k.smooth.block(b.first, b.first, b.size, b.size);
    const double h = g.h();
    for (int a = 0; a < b.size; ++a) {
        M(a, a) += k.c_diag / h;
        // Grid parity maps node i to n-1-i; the block is symmetric about the centre.
        const int mirror = g.n() - 1 - (a + b.first) - b.first;
        if (mirror >= 0 && mirror < b.size) M(a, mirror) += k.c_anti / h;
    }
    return M;
}

ComplexMatrix wave_operator(const ComplexMatrix& S, double h) {
    const int n = static_cast<int>(S.rows());
    ComplexMatrix W = ComplexMatrix::Zero(n, n);
    const double s = 1.0 / (h * h);
    for (int i = 1; i + 1 < n; ++i)
        for (int j = 1; j + 1 < n; ++j)
            W(i, j) = s * (-(S(i + 1, j) + S(i - 1, j)) + (S(i, j + 1) + S(i, j - 1)));
    return W;
}

CheckReport kg_residual(const Kernel& k, const PotentialSpec& pot, double tol) {
    const Grid& g = k.grid;
    const int n = g.n();
    const double h = g.h();
    const auto& S = k.smooth;
    const bool anti = k.c_anti != cplx{};
    if (pot.domain.is_box() && std::abs(g.X() - 0.5 * pot.domain.L) > 1e-12 * g.X())
        throw DomainError("kernel grid does not match the box");

    std::vector<cplx> vx(n);
    for (int i = 0; i < n; ++i) vx[i] = pot.segment_value(g.node(i));
    const double c0 = pot.constants.c0();
    auto mu2 = [&](int i, int j) { return c0 * (std::conj(vx[i]) - vx[j]); };

    double smooth_res = 0.0;
    const ComplexMatrix W = wave_operator(S, h);
    for (int i = 1; i + 1 < n; ++i)
        for (int j = 1; j + 1 < n; ++j) {
            if (std::abs(i - j) <= 1) continue;
            if (anti && std::abs(i + j - (n - 1)) <= 1) continue;
            smooth_res = std::max(smooth_res, std::abs(W(i, j) + mu2(i, j) * S(i, j)));
        }

    // Jumps across the diagonal (x > y side minus x < y side) and the
    // anti-diagonal (x + y > 0 side minus x + y < 0 side), from one-sided
    // linear extrapolation.
    std::vector<cplx> J(n), K(n);
    for (int i = 2; i + 2 < n; ++i) {
        const cplx up = 2.0 * S(i + 1, i - 1) - S(i + 2, i - 2);
        const cplx lo = 2.0 * S(i - 1, i + 1) - S(i - 2, i + 2);
        J[i] = up - lo;
        const int j = n - 1 - i;
        const cplx ap = 2.0 * S(i + 1, j + 1) - S(i + 2, j + 2);
        const cplx am = 2.0 * S(i - 1, j - 1) - S(i - 2, j - 2);
        K[i] = ap - am;
    }
    double diag_res = 0.0, anti_res = 0.0;
    for (int i = 3; i + 3 < n; ++i) {
        const cplx dJ = (J[i + 1] - J[i - 1]) / (2.0 * h);
        diag_res = std::max(diag_res, std::abs(mu2(i, i) * k.c_diag - 2.0 * dJ));
        const cplx dK = (K[i + 1] - K[i - 1]) / (2.0 * h);
        anti_res = std::max(anti_res, std::abs(mu2(i, n - 1 - i) * k.c_anti - 2.0 * dK));
    }

    CheckReport r;
    r.check = "kg_residual";
    r.residual = std::max({smooth_res, diag_res, anti_res});
    const double scale = sup_norm(S) + std::abs(k.c_diag) + std::abs(k.c_anti);
    r.relative = scale > 0.0 ? r.residual / scale : 0.0;
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    r.meta = {{"smooth_channel", smooth_res},
              {"singular_diag_channel", diag_res},
              {"singular_anti_channel", anti_res},
              {"n", n},
              {"X", g.X()},
              {"delta_terms_ignored", pot.has_deltas()}};
    return r;
}

CheckReport kg_residual(const Kernel& k, const PotentialSpec& pot, const Tolerances& t) {
    return kg_residual(k, pot, t.kg_tolerance(pot, k.grid));
}

CheckReport hermiticity_check(const Kernel& k, double tol) {
    CheckReport r;
    r.check = "hermiticity";
    r.residual = hermiticity_defect(k);
    const double scale = sup_norm(k.smooth) + std::abs(k.c_diag) + std::abs(k.c_anti);
    r.relative = scale > 0.0 ? r.residual / scale : 0.0;
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    r.meta = {{"n", k.grid.n()}, {"X", k.grid.X()}};
    return r;
}

CheckReport pseudo_hermiticity_residual(const Kernel& k, const DiscretizedHamiltonian& dh, double tol) {
    if (k.grid != dh.grid) throw DomainError("kernel and Hamiltonian grids differ");
    const ComplexMatrix M = kernel_matrix(k, {dh.first, dh.size()});
    const ComplexMatrix R = dh.H.adjoint() * M - M * dh.H;
    CheckReport r;
    r.check = "pseudo_hermiticity";
    r.residual = sup_norm(R);
    const double hn = dh.H.cwiseAbs().rowwise().sum().maxCoeff();
    const double mn = sup_norm(M);
    r.relative = mn * hn > 0.0 ? r.residual / (mn * hn) : 0.0;
    r.tolerance = tol;
    r.pass = r.relative <= tol;
    r.meta = {{"n", k.grid.n()}, {"active", dh.size()}};
    return r;
}

CheckReport positivity_check(const Kernel& k, const ActiveBlock& b, double tol) {
    const double defect = hermiticity_defect(k);
    const double scale = std::max(1.0, sup_norm(k.smooth) + std::abs(k.c_diag) / k.grid.h());
    if (defect > 1e-8 * scale)
        throw ConstraintError("positivity needs a Hermitian kernel (defect " + std::to_string(defect) + ")",
                              defect);
    const ComplexMatrix M = kernel_matrix(k, b);
    const ComplexMatrix Hm = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Hm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed on the metric matrix");
    const auto& ev = es.eigenvalues();
    CheckReport r;
    r.check = "positivity";
    r.residual = ev.minCoeff();
    const double top = ev.cwiseAbs().maxCoeff();
    r.relative = top > 0.0 ? r.residual / top : 0.0;
    r.tolerance = tol;
    r.pass = r.residual > tol;
    r.meta = {{"min_eigenvalue", ev.minCoeff()}, {"max_eigenvalue", ev.maxCoeff()}, {"active", b.size}};
    return r;
}

CheckReport invertibility_check(const Kernel& k, const ActiveBlock& b, double tol) {
    const ComplexMatrix M = kernel_matrix(k, b);
    Eigen::BDCSVD<ComplexMatrix> svd(M);
    const auto& s = svd.singularValues();
    CheckReport r;
    r.check = "invertibility";
    r.residual = s(s.size() - 1);
    r.relative = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
    r.tolerance = tol;
    r.pass = r.relative > tol;
    r.meta = {{"sigma_min", s(s.size() - 1)}, {"sigma_max", s(0)}, {"active", b.size}};
    return r;
}

CheckReport homogeneous_difference(const Kernel& series, const Kernel& spectral, const DiscretizedHamiltonian& dh,
                                   double tol, ComplexMatrix* field) {
    if (series.grid != dh.grid || spectral.grid != dh.grid)
        throw DomainError("cross-check kernels and Hamiltonian use different grids");
    const Grid& g = dh.grid;
    const int n = g.n();
    ComplexMatrix D = series.smooth - spectral.smooth;
    D.block(dh.first, dh.first, dh.size(), dh.size()) +=
        kernel_matrix(series, {dh.first, dh.size()}) - series.smooth.block(dh.first, dh.first, dh.size(), dh.size());
    D.block(dh.first, dh.first, dh.size(), dh.size()) -=
        kernel_matrix(spectral, {dh.first, dh.size()}) - spectral.smooth.block(dh.first, dh.first, dh.size(), dh.size());
    const ComplexMatrix W = wave_operator(D, g.h());
    const bool anti = series.c_anti != cplx{} || spectral.c_anti != cplx{};
    ComplexMatrix masked = ComplexMatrix::Zero(n, n);
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i)
        for (int j = 1; j + 1 < n; ++j) {
            if (std::abs(i - j) <= 1) continue;
            if (anti && std::abs(i + j - (n - 1)) <= 1) continue;
            masked(i, j) = W(i, j);
            worst = std::max(worst, std::abs(W(i, j)));
        }
    if (field) *field = masked;
    CheckReport r;
    r.check = "homogeneous_difference";
    r.residual = worst;
    const double scale = sup_norm(D);
    r.relative = scale > 0.0 ? worst / scale : 0.0;
    r.tolerance = tol;
    r.pass = worst <= tol;
    r.meta = {{"n", n}, {"band_masked", anti ? "diagonal+anti" : "diagonal"}};
    return r;
}

} // namespace pseudometric
