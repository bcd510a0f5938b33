#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pseudometric/kernel.hpp"
#include "pseudometric/seed.hpp"

namespace pseudometric {

struct KConfig {
    /// Lower limit of the indefinite integrals; may be -infinity.
    double r0 = 0.0;
    /// Simpson subintervals per grid spacing in the outer integral.
    int simpson_per_h = 8;
    int max_order = 1;
    double stop_tol = 1e-14;

    void validate() const;

    /// r0 = 0 for box potentials, -infinity on the full line.
    static KConfig for_potential(const PotentialSpec& pot);
};

/// Fills the fields present in {"r0": number | "-inf", "simpson_per_h", "max_order", "stop_tol"}.
void kconfig_from_json(const nlohmann::json& j, KConfig& cfg);
nlohmann::json kconfig_to_json(const KConfig& cfg);

/// Counts target nodes whose integration path left a full-line grid.
struct KStats {
    long truncated_targets = 0;
};

/// Segment part of the potential acting on the smooth part of k.
Kernel apply_K_smooth(const Kernel& k, const PotentialSpec& pot, const KConfig& cfg, KStats* stats = nullptr);

/// K applied to delta(x - y), closed form for piecewise-constant segments.
Kernel apply_K_to_identity(const PotentialSpec& pot, const Grid& g, double r0);
/// K applied to delta(x + y), closed form for piecewise-constant segments.
Kernel apply_K_to_parity(const PotentialSpec& pot, const Grid& g, double r0);

/// Delta terms of the potential acting on all of k: singular parts in closed
/// form, the smooth part by line quadrature over the slices at y = a_n and x = a_n.
Kernel apply_K_delta_rule(const Kernel& k, const PotentialSpec& pot, double r0, KStats* stats = nullptr);

/// Full operator: singular parts through the closed forms, smooth part through
/// apply_K_smooth, delta terms through apply_K_delta_rule.
Kernel apply_K(const Kernel& k, const PotentialSpec& pot, const KConfig& cfg, KStats* stats = nullptr);

struct SeriesFlags {
    bool include_identity = true;
    bool include_parity = false;
};

struct SeriesState {
    std::vector<Kernel> iterates;
    Kernel partial_sum;
    std::vector<double> sup_norms;
    bool converged = false;
    bool divergence_warning = false;
    long truncated_targets = 0;
    std::vector<std::string> warnings;

    explicit SeriesState(const Grid& g) : partial_sum(g) {}
};

SeriesState neumann_series(const SeedPair& seed, const PotentialSpec& pot, const KConfig& cfg, const Grid& g,
                           SeriesFlags flags = {});

/// |z|^l (|x-a| + |y-a|)^(l-1) / 2 for a single delta term. Throws
/// UnsupportedError for any other potential.
Eigen::MatrixXd convergence_bound(const PotentialSpec& pot, const Grid& g, int order);

} // namespace pseudometric
