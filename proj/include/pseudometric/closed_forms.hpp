#pragma once

#include <string>
#include <vector>

#include "pseudometric/kernel.hpp"
#include "pseudometric/seed.hpp"

namespace pseudometric {

/// Analytic first-order kernels of the worked models. Nothing here calls the
/// series engine.
namespace closed {

/// (i m zeta / 2 hbar^2) |x+y| sign(x-y): K applied to delta(x-y) for the square well.
cplx square_well_K_delta(double zeta, double x, double y, const PhysConstants& k);
/// (i m zeta / 4 hbar^2)(|x+y+L| + |x+y-L| - 2|x+y|) sign(y-x) for the scattering potential.
cplx scattering_K_delta(double zeta, double L, double x, double y, const PhysConstants& k);
/// (i z / 2) theta(x+y-2a) sign(y-x) for a single delta term of coupling z.
cplx delta_K1(double z, double a, double x, double y);
/// (z^2/4)[theta(x-a)+theta(y-a)][(x+y-2a) theta(x+y-2a) - |x-y|].
/// Kept for comparison only. It is not K applied to delta_K1: it jumps
/// across x = a for y < a, and apply_K_delta_rule gives 0.625 rather than
/// 0.5 at (1, 0.5).
cplx delta_K2(double z, double a, double x, double y);

cplx bender_tan_Q(double zeta, double x, double y);
/// (i zeta/4)(|x-y| + |x+y| - pi) sign(x-y), smooth part of delta - Q.
cplx bender_tan_eta_smooth(double zeta, double x, double y);
/// (i m zeta/4 hbar^2)(2L + 2|x+y| - |x+y+L| - |x+y-L|) sign(x-y).
cplx scattering_eta1_preset_smooth(double zeta, double L, double x, double y, const PhysConstants& k);

} // namespace closed

/// delta + zeta [w+(x-y) + w-(x+y) + (i m / 2 hbar^2)|x+y| sign(x-y)].
Kernel square_well_eta1(double zeta, const SeedPair& w, const Grid& g, const PhysConstants& k);

/// -(i zeta/4)[x - y + sign(x-y)(|x+y| - pi)], bender-tan gauge.
cplx bender_tan_Q(double zeta, double x, double y);

/// delta + zeta [w+ + w- + (i m / 4 hbar^2)(2|x+y| - |x+y+L| - |x+y-L|) sign(x-y)].
Kernel scattering_eta1(double zeta, double L, const SeedPair& w, const Grid& g, const PhysConstants& k);

struct DeltaCoupling {
    double z = 0.0; // 2 m zeta / hbar^2
    double a = 0.0;
};

/// delta + sum_n z_n [w_n+(x-y) + w_n-(x+y) + (i/2) theta(x+y-2a_n) sign(y-x)].
/// `w` is either empty (all zero) or has one pair per coupling.
Kernel deltas_eta1(const std::vector<DeltaCoupling>& terms, const std::vector<SeedPair>& w, const Grid& g);

enum class ModelName { SquareWell, Scattering, Deltas };

struct ModelPreset {
    ModelName name = ModelName::SquareWell;
    double zeta = 0.0;
    double L = 0.0;
    std::vector<DeltaCoupling> deltas;
    PhysConstants gauge;
};

ModelName model_from_string(const std::string& s);
std::string to_string(ModelName m);

} // namespace pseudometric
