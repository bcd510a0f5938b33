#pragma once

#include <complex>
#include <vector>

#include <json.hpp>

namespace pseudometric {

using cplx = std::complex<double>;

/// Step function with theta(0) = 1/2.
inline double step(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }
/// sign(x) = theta(x) - theta(-x), so sign(0) = 0.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
/// Rounds tiny step-function arguments to 0 so node sums like x_i + x_j - 2a
/// land on the step's midpoint.
inline double snap(double x, double eps = 1e-12) { return (x < eps && x > -eps) ? 0.0 : x; }

struct PhysConstants {
    double hbar = 1.0;
    double mass = 1.0;

    /// hbar = m = 1.
    static PhysConstants natural() { return {1.0, 1.0}; }
    /// hbar = 2m = 1 (the box width is then L = pi).
    static PhysConstants bender_tan() { return {1.0, 0.5}; }

    /// 2m / hbar^2, the factor in front of v in the mass term.
    double c0() const { return 2.0 * mass / (hbar * hbar); }
    /// m / hbar^2, the prefactor of the integral operator.
    double k_prefactor() const { return mass / (hbar * hbar); }

    void validate() const;
};

enum class DomainKind { FullLine, Box };

struct Domain {
    DomainKind kind = DomainKind::FullLine;
    double L = 0.0; // box width; unused on the full line

    static Domain line() { return {DomainKind::FullLine, 0.0}; }
    static Domain box(double width) { return {DomainKind::Box, width}; }

    bool is_box() const { return kind == DomainKind::Box; }
    bool contains(double x) const;
};

/// Constant complex value on [from, to).
struct Segment {
    double from = 0.0;
    double to = 0.0;
    cplx value{0.0, 0.0};
};

/// Imaginary point interaction i*zeta*delta(x - a).
struct DeltaTerm {
    double a = 0.0;
    double zeta = 0.0;
};

/// Piecewise-constant complex potential plus imaginary delta terms.
struct PotentialSpec {
    PhysConstants constants;
    Domain domain;
    std::vector<Segment> segments;
    std::vector<DeltaTerm> deltas;
    bool purely_imaginary = false;

    /// Throws ConfigError / DomainError when an invariant is broken.
    void validate() const;

    /// Segment part at x. At a jump the value is the mean of the one-sided
    /// limits; at a box wall only the inside limit counts.
    cplx segment_value(double x) const;

    /// Integral of the segment part over [a, b]; a and b may be infinite and
    /// may come in either order.
    cplx segment_integral(double a, double b) const;

    /// Dimensionless delta coupling z = 2m zeta / hbar^2.
    double coupling(const DeltaTerm& d) const { return constants.c0() * d.zeta; }

    /// v -> v*: segment values conjugated, delta strengths negated.
    PotentialSpec conjugated() const;
    /// v -> lambda v.
    PotentialSpec scaled(double lambda) const;

    bool has_segments() const { return !segments.empty(); }
    bool has_deltas() const { return !deltas.empty(); }
    /// v(-x) = v(x)* on the segment part, checked on segment endpoints and midpoints.
    bool is_pt_symmetric(double tol = 1e-14) const;
    /// Largest |value| over segments and |zeta| over deltas.
    double max_strength() const;
};

/// Segment part of v at x. Throws DomainError outside a box.
cplx eval_potential(const PotentialSpec& spec, double x);

/// mu^2(x, y) = (2m/hbar^2) [v(x)* - v(y)] from the segment part.
cplx eval_mass_term(const PotentialSpec& spec, double x, double y);

namespace models {

/// v = -i zeta sign(x) inside a box of width L.
PotentialSpec square_well(double zeta, double L, PhysConstants k = PhysConstants::bender_tan());
/// v = -i zeta sign(x) for |x| < L/2 and 0 outside, on the full line.
PotentialSpec scattering(double zeta, double L, PhysConstants k = PhysConstants::natural());
/// v = i sum_n zeta_n delta(x - a_n) on the full line.
PotentialSpec deltas(std::vector<DeltaTerm> terms, PhysConstants k = PhysConstants::natural());
/// Potential sampled at uniformly spaced points x0 + k*dx; each sample holds on
/// the cell of width dx centred on it.
PotentialSpec tabulated(double x0, double dx, const std::vector<cplx>& values, Domain domain,
                        PhysConstants k = PhysConstants::natural());

} // namespace models

/// Reads { "constants": {...}, "domain": {...}, "segments": [...], "deltas": [...] }.
PotentialSpec potential_from_json(const nlohmann::json& doc);
nlohmann::json potential_to_json(const PotentialSpec& spec);

} // namespace pseudometric
