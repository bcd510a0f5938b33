#include "pseudometric/seed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "pseudometric/errors.hpp"

namespace pseudometric {

SeedPair SeedPair::zero() {
    SeedPair s;
    s.u_plus = [](double) { return cplx{}; };
    s.u_minus = [](double) { return cplx{}; };
    s.name = "zero";
    return s;
}

namespace {

cplx lerp_table(const std::vector<double>& xs, const std::vector<cplx>& ys, double x) {
    if (xs.empty() || x < xs.front() || x > xs.back()) return {};
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    if (k == 0) return ys.front();
    const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return (1.0 - t) * ys[k - 1] + t * ys[k];
}

} // namespace

SeedPair SeedPair::tabulated(std::vector<double> xs, std::vector<cplx> plus, std::vector<cplx> minus) {
    if (xs.size() != plus.size() || xs.size() != minus.size())
        throw ConfigError("seed table columns have different lengths");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw ConfigError("seed table abscissae must increase");
    auto tx = std::make_shared<std::vector<double>>(std::move(xs));
    auto tp = std::make_shared<std::vector<cplx>>(std::move(plus));
    auto tm = std::make_shared<std::vector<cplx>>(std::move(minus));
    SeedPair s;
    s.u_plus = [tx, tp](double x) { return lerp_table(*tx, *tp, x); };
    s.u_minus = [tx, tm](double x) { return lerp_table(*tx, *tm, x); };
    s.name = "tabulated";
    return s;
}

SeedPair SeedPair::scaled(double f) const {
    SeedPair s;
    auto p = u_plus;
    auto m = u_minus;
    s.u_plus = [p, f](double x) { return f * p(x); };
    s.u_minus = [m, f](double x) { return f * m(x); };
    s.name = name;
    return s;
}

SeedPair operator+(const SeedPair& a, const SeedPair& b) {
    SeedPair s;
    auto ap = a.u_plus, am = a.u_minus, bp = b.u_plus, bm = b.u_minus;
    s.u_plus = [ap, bp](double x) { return ap(x) + bp(x); };
    s.u_minus = [am, bm](double x) { return am(x) + bm(x); };
    s.name = a.name + "+" + b.name;
    return s;
}

namespace seeds {

SeedPair bender_tan() {
    SeedPair s;
    s.u_plus = [](double x) { return cplx(0.0, 0.25) * (std::abs(x) - std::numbers::pi) * sign(x); };
    s.u_minus = [](double) { return cplx{}; };
    s.name = "bender-tan";
    return s;
}

SeedPair jmp_2005(double L, const PhysConstants& k) {
    const double c = k.mass * L / (2.0 * k.hbar * k.hbar);
    SeedPair s;
    s.u_plus = [c](double x) { return cplx(0.0, c) * sign(x); };
    s.u_minus = [](double) { return cplx{}; };
    s.name = "jmp-2005";
    return s;
}

SeedPair from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open seed file " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("seed file " + path + " is empty");
    if (line.rfind("x,plus_re,plus_im,minus_re,minus_im", 0) != 0)
        throw ConfigError("seed file " + path + " lacks the header x,plus_re,plus_im,minus_re,minus_im");
    std::vector<double> xs;
    std::vector<cplx> plus, minus;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, pr, pi, mr, mi;
        if (!(ss >> x >> pr >> pi >> mr >> mi))
            throw ConfigError("seed file " + path + ": bad row at line " + std::to_string(lineno));
        xs.push_back(x);
        plus.emplace_back(pr, pi);
        minus.emplace_back(mr, mi);
    }
    auto s = SeedPair::tabulated(std::move(xs), std::move(plus), std::move(minus));
    s.name = path;
    return s;
}

} // namespace seeds

std::vector<double> seed_arguments(const Grid& g) {
    std::vector<double> a(2 * g.n() - 1);
    for (int k = 0; k < 2 * g.n() - 1; ++k) a[k] = (k - (g.n() - 1)) * g.h();
    return a;
}

double seed_constraint_violation(const SeedPair& seed, const Grid& g) {
    double worst = 0.0;
    for (double x : seed_arguments(g)) {
        worst = std::max(worst, std::abs(std::conj(seed.u_plus(x)) - seed.u_plus(-x)));
        worst = std::max(worst, std::abs(seed.u_minus(x).imag()) * 2.0);
    }
    return worst;
}

void check_seed(const SeedPair& seed, const Grid& g, double tol) {
    double scale = 1.0;
    for (double x : seed_arguments(g))
        scale = std::max({scale, std::abs(seed.u_plus(x)), std::abs(seed.u_minus(x))});
    const double v = seed_constraint_violation(seed, g);
    if (!(v <= tol * scale))
        throw ConstraintError("seed '" + seed.name + "' violates u+(x)* = u+(-x) or u-(x)* = u-(x) by " +
                                  std::to_string(v),
                              v);
}

Kernel seed_to_kernel(const SeedPair& seed, const Grid& g, bool include_identity, bool include_parity) {
    check_seed(seed, g);
    const int n = g.n();
    const auto args = seed_arguments(g);
    std::vector<cplx> up(args.size()), um(args.size());
    for (std::size_t k = 0; k < args.size(); ++k) {
        up[k] = seed.u_plus(args[k]);
        um[k] = seed.u_minus(args[k]);
    }
    Kernel k(g);
    k.c_diag = include_identity ? 1.0 : 0.0;
    k.c_anti = include_parity ? 1.0 : 0.0;
    // x_i - y_j = (i - j) h and x_i + y_j = (i + j - (n-1)) h.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k.smooth(i, j) = up[i - j + n - 1] + um[i + j];
    return k;
}

} // namespace pseudometric
