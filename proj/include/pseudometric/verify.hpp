#pragma once

#include <string>

#include <json.hpp>

#include "pseudometric/kernel.hpp"
#include "pseudometric/spectral.hpp"

namespace pseudometric {

struct CheckReport {
    std::string check;
    double residual = 0.0;
    double relative = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json meta = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Per-check tolerances. The kg and cross-check tolerances are a coefficient
/// times (c0 v_max)^2 X, plus a floor.
struct Tolerances {
    double kg_coeff = 2.0;
    double kg_floor = 1e-9;
    double cross_coeff = 8.0;
    double pseudo_hermiticity = 1e-6;
    double hermiticity = 1e-10;
    double invertibility = 1e-10;
    double positivity = 0.0;

    double kg_tolerance(const PotentialSpec& pot, const Grid& g) const;
    double cross_tolerance(const PotentialSpec& pot, const Grid& g) const;
};

void tolerances_from_json(const nlohmann::json& j, Tolerances& t);
nlohmann::json tolerances_to_json(const Tolerances& t);

/// Nodes that carry the operator: interior nodes for a box, all nodes otherwise.
struct ActiveBlock {
    int first = 0;
    int size = 0;
    static ActiveBlock for_domain(const Domain& d, const Grid& g);
};

/// M = c_diag I/h + c_anti P/h + smooth on the active block.
ComplexMatrix kernel_matrix(const Kernel& k, const ActiveBlock& b);

/// Discrete -d2/dx2 + d2/dy2 applied at interior nodes; boundary values 0.
ComplexMatrix wave_operator(const ComplexMatrix& S, double h);

/// Klein-Gordon residual of the segment potential. The smooth channel skips
/// stencils touching the diagonal (and the anti-diagonal when c_anti != 0);
/// the singular channels collect the delta(x-y) and delta(x+y) coefficients,
/// mass term plus the jump of the smooth part across each line.
CheckReport kg_residual(const Kernel& k, const PotentialSpec& pot, double tol);
CheckReport kg_residual(const Kernel& k, const PotentialSpec& pot, const Tolerances& t = {});

CheckReport hermiticity_check(const Kernel& k, double tol = 1e-10);

/// sup |H^dagger M - M H| / (sup|M| sup|H|).
CheckReport pseudo_hermiticity_residual(const Kernel& k, const DiscretizedHamiltonian& dh, double tol = 1e-6);

/// Smallest eigenvalue of the Hermitized M; throws ConstraintError when the
/// kernel's Hermiticity defect exceeds 1e-8.
CheckReport positivity_check(const Kernel& k, const ActiveBlock& b, double tol = 0.0);

/// Smallest over largest singular value of M.
CheckReport invertibility_check(const Kernel& k, const ActiveBlock& b, double tol = 1e-10);

/// Off-band sup of the wave operator applied to (series kernel - spectral metric)
/// on the Dirichlet block; the full residual field is returned through `field`.
CheckReport homogeneous_difference(const Kernel& series, const Kernel& spectral, const DiscretizedHamiltonian& dh,
                                   double tol, ComplexMatrix* field = nullptr);

} // namespace pseudometric
