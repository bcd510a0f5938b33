#include "pseudometric/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pseudometric/errors.hpp"

namespace pseudometric {

void PhysConstants::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ConfigError("mass must be positive, got " + std::to_string(mass));
    if (!(hbar > 0.0) || !std::isfinite(hbar))
        throw ConfigError("hbar must be positive, got " + std::to_string(hbar));
}

bool Domain::contains(double x) const {
    if (!is_box()) return std::isfinite(x);
    return x >= -0.5 * L && x <= 0.5 * L;
}

void PotentialSpec::validate() const {
    constants.validate();
    if (domain.is_box() && !(domain.L > 0.0))
        throw ConfigError("box width must be positive");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!std::isfinite(s.from) || !std::isfinite(s.to) || !(s.from < s.to))
            throw ConfigError("segment " + std::to_string(i) + " has an empty or infinite interval");
        if (i > 0 && s.from < segments[i - 1].to)
            throw ConfigError("segments must be disjoint and ordered (segment " + std::to_string(i) + ")");
        if (domain.is_box() && (s.from < -0.5 * domain.L || s.to > 0.5 * domain.L))
            throw DomainError("segment " + std::to_string(i) + " leaves the box");
        if (purely_imaginary && s.value.real() != 0.0)
            throw ConfigError("potential tagged purely imaginary has a real part on segment " +
                              std::to_string(i));
    }
    for (const auto& d : deltas) {
        if (!std::isfinite(d.a) || !std::isfinite(d.zeta))
            throw ConfigError("delta terms need finite location and strength");
        if (domain.is_box() && !domain.contains(d.a))
            throw DomainError("delta location " + std::to_string(d.a) + " lies outside the box");
    }
}

cplx PotentialSpec::segment_value(double x) const {
    cplx left{0.0, 0.0}, right{0.0, 0.0};
    for (const auto& s : segments) {
        if (s.from < x && x <= s.to) left = s.value;
        if (s.from <= x && x < s.to) right = s.value;
    }
    if (domain.is_box()) {
        if (x <= -0.5 * domain.L) return right;
        if (x >= 0.5 * domain.L) return left;
    }
    return 0.5 * (left + right);
}

cplx PotentialSpec::segment_integral(double a, double b) const {
    cplx total{0.0, 0.0};
    for (const auto& s : segments) {
        const double lo = std::clamp(a, s.from, s.to);
        const double hi = std::clamp(b, s.from, s.to);
        total += s.value * (hi - lo);
    }
    return total;
}

PotentialSpec PotentialSpec::conjugated() const {
    PotentialSpec out = *this;
    for (auto& s : out.segments) s.value = std::conj(s.value);
    for (auto& d : out.deltas) d.zeta = -d.zeta;
    return out;
}

PotentialSpec PotentialSpec::scaled(double lambda) const {
    PotentialSpec out = *this;
    for (auto& s : out.segments) s.value *= lambda;
    for (auto& d : out.deltas) d.zeta *= lambda;
    return out;
}

bool PotentialSpec::is_pt_symmetric(double tol) const {
    std::vector<double> probes;
    for (const auto& s : segments) {
        probes.push_back(s.from);
        probes.push_back(s.to);
        probes.push_back(0.5 * (s.from + s.to));
    }
    for (double x : probes) {
        if (domain.is_box() && !domain.contains(-x)) return false;
        if (std::abs(segment_value(-x) - std::conj(segment_value(x))) > tol) return false;
    }
    return true;
}

double PotentialSpec::max_strength() const {
    double m = 0.0;
    for (const auto& s : segments) m = std::max(m, std::abs(s.value));
    for (const auto& d : deltas) m = std::max(m, std::abs(d.zeta));
    return m;
}

cplx eval_potential(const PotentialSpec& spec, double x) {
    if (!spec.domain.contains(x))
        throw DomainError("x = " + std::to_string(x) + " lies outside the domain");
    return spec.segment_value(x);
}

cplx eval_mass_term(const PotentialSpec& spec, double x, double y) {
    return spec.constants.c0() * (std::conj(eval_potential(spec, x)) - eval_potential(spec, y));
}

namespace models {

PotentialSpec square_well(double zeta, double L, PhysConstants k) {
    PotentialSpec p;
    p.constants = k;
    p.domain = Domain::box(L);
    p.segments = {{-0.5 * L, 0.0, cplx(0.0, zeta)}, {0.0, 0.5 * L, cplx(0.0, -zeta)}};
    p.purely_imaginary = true;
    p.validate();
    return p;
}

PotentialSpec scattering(double zeta, double L, PhysConstants k) {
    PotentialSpec p;
    p.constants = k;
    p.domain = Domain::line();
    p.segments = {{-0.5 * L, 0.0, cplx(0.0, zeta)}, {0.0, 0.5 * L, cplx(0.0, -zeta)}};
    p.purely_imaginary = true;
    p.validate();
    return p;
}

PotentialSpec deltas(std::vector<DeltaTerm> terms, PhysConstants k) {
    PotentialSpec p;
    p.constants = k;
    p.domain = Domain::line();
    p.deltas = std::move(terms);
    p.purely_imaginary = true;
    p.validate();
    return p;
}

PotentialSpec tabulated(double x0, double dx, const std::vector<cplx>& values, Domain domain,
                        PhysConstants k) {
    if (!(dx > 0.0)) throw ConfigError("tabulated potential needs a positive spacing");
    PotentialSpec p;
    p.constants = k;
    p.domain = domain;
    const double lo_wall = domain.is_box() ? -0.5 * domain.L : -std::numeric_limits<double>::infinity();
    const double hi_wall = domain.is_box() ? 0.5 * domain.L : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double c = x0 + static_cast<double>(i) * dx;
        const double from = std::max(c - 0.5 * dx, lo_wall);
        const double to = std::min(c + 0.5 * dx, hi_wall);
        if (from < to) p.segments.push_back({from, to, values[i]});
    }
    p.validate();
    return p;
}

} // namespace models

PotentialSpec potential_from_json(const nlohmann::json& doc) {
    PotentialSpec p;
    try {
        if (doc.contains("constants")) {
            const auto& c = doc.at("constants");
            p.constants.hbar = c.value("hbar", 1.0);
            p.constants.mass = c.value("mass", 1.0);
        }
        if (doc.contains("domain")) {
            const auto& d = doc.at("domain");
            const std::string type = d.value("type", "line");
            if (type == "box")
                p.domain = Domain::box(d.at("L").get<double>());
            else if (type == "line")
                p.domain = Domain::line();
            else
                throw ConfigError("unknown domain type '" + type + "'");
        }
        if (doc.contains("segments")) {
            for (const auto& s : doc.at("segments"))
                p.segments.push_back({s.at("from").get<double>(), s.at("to").get<double>(),
                                      cplx(s.value("re", 0.0), s.value("im", 0.0))});
        }
        if (doc.contains("deltas")) {
            for (const auto& d : doc.at("deltas"))
                p.deltas.push_back({d.at("a").get<double>(), d.at("zeta").get<double>()});
        }
        p.purely_imaginary = doc.value("purely_imaginary", false);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed potential JSON: ") + e.what());
    }
    p.validate();
    return p;
}

nlohmann::json potential_to_json(const PotentialSpec& spec) {
    nlohmann::json doc;
    doc["constants"] = {{"hbar", spec.constants.hbar}, {"mass", spec.constants.mass}};
    if (spec.domain.is_box())
        doc["domain"] = {{"type", "box"}, {"L", spec.domain.L}};
    else
        doc["domain"] = {{"type", "line"}};
    doc["segments"] = nlohmann::json::array();
    for (const auto& s : spec.segments)
        doc["segments"].push_back(
            {{"from", s.from}, {"to", s.to}, {"re", s.value.real()}, {"im", s.value.imag()}});
    doc["deltas"] = nlohmann::json::array();
    for (const auto& d : spec.deltas) doc["deltas"].push_back({{"a", d.a}, {"zeta", d.zeta}});
    if (spec.purely_imaginary) doc["purely_imaginary"] = true;
    return doc;
}

} // namespace pseudometric
