#include "pseudometric/closed_forms.hpp"

#include <cmath>
#include <numbers>

#include "pseudometric/errors.hpp"

namespace pseudometric {

namespace closed {

namespace {
constexpr cplx I{0.0, 1.0};
}

cplx square_well_K_delta(double zeta, double x, double y, const PhysConstants& k) {
    return I * k.mass * zeta / (2.0 * k.hbar * k.hbar) * std::abs(x + y) * sign(snap(x - y));
}

cplx scattering_K_delta(double zeta, double L, double x, double y, const PhysConstants& k) {
    const double w = x + y;
    return I * k.mass * zeta / (4.0 * k.hbar * k.hbar) *
           (std::abs(w + L) + std::abs(w - L) - 2.0 * std::abs(w)) * sign(snap(y - x));
}

cplx delta_K1(double z, double a, double x, double y) {
    return I * (0.5 * z) * step(snap(x + y - 2.0 * a)) * sign(snap(y - x));
}

cplx delta_K2(double z, double a, double x, double y) {
    const double w = snap(x + y - 2.0 * a);
    return 0.25 * z * z * (step(snap(x - a)) + step(snap(y - a))) * (w * step(w) - std::abs(x - y));
}

cplx bender_tan_Q(double zeta, double x, double y) {
    return -I * (0.25 * zeta) * (x - y + sign(snap(x - y)) * (std::abs(x + y) - std::numbers::pi));
}

cplx bender_tan_eta_smooth(double zeta, double x, double y) {
    return I * (0.25 * zeta) * (std::abs(x - y) + std::abs(x + y) - std::numbers::pi) * sign(snap(x - y));
}

cplx scattering_eta1_preset_smooth(double zeta, double L, double x, double y, const PhysConstants& k) {
    const double w = x + y;
    return I * k.mass * zeta / (4.0 * k.hbar * k.hbar) *
           (2.0 * L + 2.0 * std::abs(w) - std::abs(w + L) - std::abs(w - L)) * sign(snap(x - y));
}

} // namespace closed

namespace {

void add_seed(Kernel& k, const SeedPair& w, double factor) {
    check_seed(w, k.grid);
    const Grid& g = k.grid;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            k.smooth(i, j) += factor * (w.u_plus(g.node(i) - g.node(j)) + w.u_minus(g.node(i) + g.node(j)));
}

} // namespace

Kernel square_well_eta1(double zeta, const SeedPair& w, const Grid& g, const PhysConstants& k) {
    k.validate();
    Kernel out = Kernel::identity(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            out.smooth(i, j) = closed::square_well_K_delta(zeta, g.node(i), g.node(j), k);
    add_seed(out, w, zeta);
    return out;
}

cplx bender_tan_Q(double zeta, double x, double y) { return closed::bender_tan_Q(zeta, x, y); }

Kernel scattering_eta1(double zeta, double L, const SeedPair& w, const Grid& g, const PhysConstants& k) {
    k.validate();
    Kernel out = Kernel::identity(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            out.smooth(i, j) = closed::scattering_K_delta(zeta, L, g.node(i), g.node(j), k);
    add_seed(out, w, zeta);
    return out;
}

Kernel deltas_eta1(const std::vector<DeltaCoupling>& terms, const std::vector<SeedPair>& w, const Grid& g) {
    if (!w.empty() && w.size() != terms.size())
        throw ConfigError("deltas_eta1 needs one seed pair per delta term");
    Kernel out = Kernel::identity(g);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j)
                out.smooth(i, j) += closed::delta_K1(terms[t].z, terms[t].a, g.node(i), g.node(j));
        if (!w.empty()) add_seed(out, w[t], terms[t].z);
    }
    return out;
}

ModelName model_from_string(const std::string& s) {
    if (s == "square-well" || s == "square_well") return ModelName::SquareWell;
    if (s == "scattering") return ModelName::Scattering;
    if (s == "deltas") return ModelName::Deltas;
    throw ConfigError("unknown model '" + s + "' (expected square-well, scattering or deltas)");
}

std::string to_string(ModelName m) {
    switch (m) {
    case ModelName::SquareWell: return "square-well";
    case ModelName::Scattering: return "scattering";
    case ModelName::Deltas: return "deltas";
    }
    return "unknown";
}

} // namespace pseudometric
