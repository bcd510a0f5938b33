#include "pseudometric/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pseudometric/errors.hpp"

namespace pseudometric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_zero(cplx c) { return c.real() == 0.0 && c.imag() == 0.0; }

// Cumulative integrals along rows (the s direction) of every column of a
// piecewise-linear nodal field; eta vanishes outside the grid.
class ColumnPrimitives {
public:
    ColumnPrimitives(const ComplexMatrix& E, const Grid& g) : E_(E), X_(g.X()), h_(g.h()), n_(g.n()) {
        C_ = ComplexMatrix::Zero(n_, n_);
        for (int j = 0; j < n_; ++j)
            for (int k = 1; k < n_; ++k) C_(k, j) = C_(k - 1, j) + 0.5 * h_ * (E_(k - 1, j) + E_(k, j));
    }

    cplx at(int j, double s) const {
        if (s <= -X_) return {0.0, 0.0};
        if (s >= X_) return C_(n_ - 1, j);
        const double f = (s + X_) / h_;
        const int k = std::min(static_cast<int>(f), n_ - 2);
        const double t = f - k;
        return C_(k, j) + h_ * (t * E_(k, j) + 0.5 * t * t * (E_(k + 1, j) - E_(k, j)));
    }

private:
    const ComplexMatrix& E_;
    ComplexMatrix C_;
    double X_, h_;
    int n_;
};

// First term of K: c int_{r0}^{y} dr v(r) int_{x-y+r}^{x+y-r} ds eta(s, r).
ComplexMatrix first_term(const ComplexMatrix& E, const PotentialSpec& pot, bool conj_v, const Grid& g,
                         const KConfig& cfg, long& truncated) {
    const int n = g.n();
    const double X = g.X(), h = g.h();
    const double c = pot.constants.k_prefactor();
    const bool box = pot.domain.is_box();
    int nsub = std::max(cfg.simpson_per_h, 8);
    if (nsub % 2) ++nsub;

    double r0 = cfg.r0;
    if (box && std::isfinite(r0) && (r0 < -X - 1e-12 || r0 > X + 1e-12))
        throw DomainError("base point r0 = " + std::to_string(r0) + " lies outside the box");
    r0 = std::clamp(r0, -X, X);

    // Segment boundaries falling strictly inside each grid cell.
    std::vector<std::vector<double>> cuts(n - 1);
    for (const auto& s : pot.segments)
        for (double b : {s.from, s.to}) {
            if (b <= -X || b >= X) continue;
            const int cell = std::min(static_cast<int>((b + X) / h), n - 2);
            const double lo = -X + cell * h;
            if (b > lo + 1e-12 * h && b < lo + h - 1e-12 * h) cuts[cell].push_back(b);
        }
    for (auto& v : cuts) std::sort(v.begin(), v.end());

    ColumnPrimitives P(E, g);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    std::vector<double> pts;
    for (int i = 0; i < n; ++i) {
        const double x = g.node(i);
        for (int j = 0; j < n; ++j) {
            const double y = g.node(j);
            const double lo = std::min(r0, y), hi = std::max(r0, y);
            if (hi - lo <= 0.0) continue;
            const double orient = y >= r0 ? 1.0 : -1.0;
            auto I = [&](double r) {
                const double f = (r + X) / h;
                const int jj = std::min(std::max(static_cast<int>(std::floor(f)), 0), n - 2);
                const double tau = std::clamp(f - jj, 0.0, 1.0);
                const double A = x - y + r, B = x + y - r;
                return (1.0 - tau) * (P.at(jj, B) - P.at(jj, A)) + tau * (P.at(jj + 1, B) - P.at(jj + 1, A));
            };
            cplx acc{0.0, 0.0};
            bool left_grid = false;
            const int c0 = std::min(std::max(static_cast<int>(std::floor((lo + X) / h)), 0), n - 2);
            const int c1 = std::min(std::max(static_cast<int>(std::ceil((hi + X) / h)), 1), n - 1);
            for (int cell = c0; cell < c1; ++cell) {
                const double a = std::max(lo, -X + cell * h);
                const double b = std::min(hi, -X + (cell + 1) * h);
                if (b - a <= 1e-14 * h) continue;
                pts.clear();
                pts.push_back(a);
                for (double cut : cuts[cell])
                    if (cut > a && cut < b) pts.push_back(cut);
                pts.push_back(b);
                for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
                    const double p = pts[k], q = pts[k + 1];
                    cplx v = pot.segment_value(0.5 * (p + q));
                    if (conj_v) v = std::conj(v);
                    if (is_zero(v)) continue;
                    if (!box) {
                        const double lim = X * (1.0 + 1e-12);
                        for (double r : {p, q})
                            if (std::abs(x - y + r) > lim || std::abs(x + y - r) > lim) left_grid = true;
                    }
                    const double dh = (q - p) / nsub;
                    cplx s = I(p) + I(q);
                    for (int m = 1; m < nsub; ++m) s += (m % 2 ? 4.0 : 2.0) * I(p + m * dh);
                    acc += v * s * (dh / 3.0);
                }
            }
            if (left_grid) ++truncated;
            out(i, j) = c * orient * acc;
        }
    }
    if (!out.allFinite()) throw NumericalError("non-finite value while integrating the smooth kernel");
    return out;
}

// Piecewise-linear reconstruction of a kernel slice with jumps allowed at the
// given break points, plus its primitive.
class SlicePrimitive {
public:
    SlicePrimitive(const std::vector<cplx>& vals, const Grid& g, std::vector<double> breaks) : X_(g.X()) {
        const double h = g.h();
        const int n = g.n();
        const double eps = 1e-9 * h;
        std::sort(breaks.begin(), breaks.end());
        std::vector<double> ends{-X_};
        for (double b : breaks)
            if (b > -X_ + eps && b < X_ - eps && b > ends.back() + eps) ends.push_back(b);
        ends.push_back(X_);

        auto node_value_at = [&](double s) {
            const double f = std::clamp((s + X_) / h, 0.0, static_cast<double>(n - 1));
            const int k = std::min(static_cast<int>(f), n - 2);
            const double t = f - k;
            return (1.0 - t) * vals[k] + t * vals[k + 1];
        };

        for (std::size_t e = 0; e + 1 < ends.size(); ++e) {
            const double p = ends[e], q = ends[e + 1];
            const bool p_break = e > 0, q_break = e + 2 < ends.size();
            // Nodes used for this piece: strictly inside, or sitting on a grid end.
            int m0 = static_cast<int>(std::ceil((p + X_) / h - 1e-9));
            int m1 = static_cast<int>(std::floor((q + X_) / h + 1e-9));
            if (p_break && std::abs(-X_ + m0 * h - p) < eps) ++m0;
            if (q_break && std::abs(-X_ + m1 * h - q) < eps) --m1;
            if (m1 - m0 + 1 >= 2) {
                auto sx = [&](int m) { return -X_ + m * h; };
                if (p_break) push(p, vals[m0] + (p - sx(m0)) * (vals[m0 + 1] - vals[m0]) / h);
                for (int m = m0; m <= m1; ++m) push(sx(m), vals[m]);
                if (q_break) push(q, vals[m1] + (q - sx(m1)) * (vals[m1] - vals[m1 - 1]) / h);
            } else {
                push(p, node_value_at(p));
                for (int m = m0; m <= m1; ++m) push(-X_ + m * h, vals[m]);
                push(q, node_value_at(q));
            }
        }
        cum_.assign(s_.size(), cplx{});
        for (std::size_t k = 1; k < s_.size(); ++k)
            cum_[k] = cum_[k - 1] + 0.5 * (s_[k] - s_[k - 1]) * (v_[k] + v_[k - 1]);
    }

    cplx at(double s) const {
        if (s <= s_.front()) return {0.0, 0.0};
        if (s >= s_.back()) return cum_.back();
        const std::size_t k = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), s) - s_.begin());
        const double d = s - s_[k - 1];
        const double w = s_[k] - s_[k - 1];
        const cplx slope = (v_[k] - v_[k - 1]) / w;
        return cum_[k - 1] + d * v_[k - 1] + 0.5 * d * d * slope;
    }

private:
    void push(double s, cplx v) {
        if (!s_.empty() && s < s_.back()) s = s_.back();
        s_.push_back(s);
        v_.push_back(v);
    }

    double X_;
    std::vector<double> s_;
    std::vector<cplx> v_, cum_;
};

std::vector<cplx> column_slice(const ComplexMatrix& E, const Grid& g, double a) {
    const double f = (a + g.X()) / g.h();
    const int j = std::min(std::max(static_cast<int>(std::floor(f)), 0), g.n() - 2);
    const double t = f - j;
    std::vector<cplx> v(g.n());
    for (int m = 0; m < g.n(); ++m)
        v[m] = std::abs(t) < 1e-12 ? E(m, j)
               : std::abs(t - 1) < 1e-12 ? E(m, j + 1)
                                          : (1 - t) * E(m, j) + t * E(m, j + 1);
    return v;
}

} // namespace

void KConfig::validate() const {
    if (std::isnan(r0) || r0 == kInf) throw ConfigError("r0 must be finite or -inf");
    if (simpson_per_h < 8) throw ConfigError("simpson_per_h must be at least 8");
    if (max_order < 1) throw ConfigError("max_order must be at least 1");
    if (!(stop_tol > 0.0)) throw ConfigError("stop_tol must be positive");
}

KConfig KConfig::for_potential(const PotentialSpec& pot) {
    KConfig cfg;
    cfg.r0 = pot.domain.is_box() ? 0.0 : -kInf;
    return cfg;
}

void kconfig_from_json(const nlohmann::json& j, KConfig& cfg) {
    try {
        if (j.contains("r0")) {
            const auto& r = j.at("r0");
            if (r.is_string()) {
                if (r.get<std::string>() != "-inf") throw ConfigError("series.r0 must be a number or \"-inf\"");
                cfg.r0 = -kInf;
            } else {
                cfg.r0 = r.get<double>();
            }
        }
        cfg.simpson_per_h = j.value("simpson_per_h", cfg.simpson_per_h);
        cfg.max_order = j.value("max_order", cfg.max_order);
        cfg.stop_tol = j.value("stop_tol", cfg.stop_tol);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed series config: ") + e.what());
    }
    cfg.validate();
}

nlohmann::json kconfig_to_json(const KConfig& cfg) {
    nlohmann::json j;
    if (std::isinf(cfg.r0))
        j["r0"] = "-inf";
    else
        j["r0"] = cfg.r0;
    j["simpson_per_h"] = cfg.simpson_per_h;
    j["max_order"] = cfg.max_order;
    j["stop_tol"] = cfg.stop_tol;
    return j;
}

Kernel apply_K_smooth(const Kernel& k, const PotentialSpec& pot, const KConfig& cfg, KStats* stats) {
    cfg.validate();
    Kernel out(k.grid);
    if (!pot.has_segments() || sup_norm(k.smooth) == 0.0) return out;
    long truncated = 0;
    const ComplexMatrix f = first_term(k.smooth, pot, false, k.grid, cfg, truncated);
    const ComplexMatrix ET = k.smooth.transpose();
    const ComplexMatrix s = first_term(ET, pot, true, k.grid, cfg, truncated);
    out.smooth = f + s.transpose();
    if (stats && !pot.domain.is_box()) stats->truncated_targets += truncated;
    return out;
}

Kernel apply_K_to_identity(const PotentialSpec& pot, const Grid& g, double r0) {
    const double c = pot.constants.k_prefactor();
    auto V = [&](double s) { return pot.segment_integral(r0, s); };
    auto below = [&](double t) { return t < r0 ? 1.0 : 0.0; };
    Kernel out(g);
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.node(i);
        for (int j = 0; j < g.n(); ++j) {
            const double y = g.node(j);
            const double t = 0.5 * (x + y);
            const double d = snap(x - y);
            const cplx first = V(std::min(y, t)) - below(t) * V(t) - step(d) * V(y);
            const cplx second = std::conj(V(std::min(x, t)) - below(t) * V(t)) - step(-d) * std::conj(V(x));
            out.smooth(i, j) = c * (first + second);
        }
    }
    return out;
}

Kernel apply_K_to_parity(const PotentialSpec& pot, const Grid& g, double r0) {
    const double c = pot.constants.k_prefactor();
    auto V = [&](double s) { return pot.segment_integral(r0, s); };
    Kernel out(g);
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.node(i);
        for (int j = 0; j < g.n(); ++j) {
            const double y = g.node(j);
            const double w = step(snap(x + y));
            const double q = 0.5 * (y - x);
            const cplx first = w * V(y) - (V(std::max(y, q)) - V(std::max(r0, q)));
            const cplx second = w * std::conj(V(x)) - std::conj(V(std::max(x, -q)) - V(std::max(r0, -q)));
            out.smooth(i, j) = c * (first + second);
        }
    }
    return out;
}

Kernel apply_K_delta_rule(const Kernel& k, const PotentialSpec& pot, double r0, KStats* stats) {
    const Grid& g = k.grid;
    const int n = g.n();
    const double X = g.X();
    Kernel out(g);
    if (!pot.has_deltas()) return out;
    const bool box = pot.domain.is_box();
    const bool has_smooth = sup_norm(k.smooth) > 0.0;
    long truncated = 0;

    for (const auto& d : pot.deltas) {
        const double a = d.a;
        const double z = pot.coupling(d);
        if (has_smooth && (a < -X - 1e-12 || a > X + 1e-12))
            throw DomainError("slice at a = " + std::to_string(a) + " lies outside the grid");

        std::vector<double> breaks;
        for (const auto& e : pot.deltas)
            for (double b : {a, -a, 2 * e.a - a, a - 2 * e.a}) breaks.push_back(b);

        // Slices through (s, a) for the first term and (a, s) for the transposed one.
        std::vector<cplx> col, row;
        if (has_smooth) {
            col = column_slice(k.smooth, g, a);
            row = column_slice(ComplexMatrix(k.smooth.transpose()), g, a);
        }
        const SlicePrimitive Pc(has_smooth ? col : std::vector<cplx>(n), g, breaks);
        const SlicePrimitive Pr(has_smooth ? row : std::vector<cplx>(n), g, breaks);

        const double base = step(snap(r0 - a));
        for (int i = 0; i < n; ++i) {
            const double x = g.node(i);
            const double tx = step(snap(x - a)) - base;
            for (int j = 0; j < n; ++j) {
                const double y = g.node(j);
                const double ty = step(snap(y - a)) - base;
                const double sxy = step(snap(x + y - 2 * a));
                const double sp = step(snap(x + y));
                cplx f{0.0, 0.0}, s{0.0, 0.0};
                if (ty != 0.0) {
                    f = k.c_diag * (sxy - step(snap(x - y))) + k.c_anti * (sp - step(snap(x - y + 2 * a)));
                    if (has_smooth) {
                        const double A = x - y + a, B = x + y - a;
                        f += Pc.at(B) - Pc.at(A);
                        if (!box && (std::abs(A) > X * (1 + 1e-12) || std::abs(B) > X * (1 + 1e-12))) ++truncated;
                    }
                    f *= cplx(0.0, 0.5 * z) * ty;
                }
                if (tx != 0.0) {
                    s = k.c_diag * (sxy - step(snap(y - x))) + k.c_anti * (sp - step(snap(y - x + 2 * a)));
                    if (has_smooth) {
                        const double A = y - x + a, B = x + y - a;
                        s += Pr.at(B) - Pr.at(A);
                        if (!box && (std::abs(A) > X * (1 + 1e-12) || std::abs(B) > X * (1 + 1e-12))) ++truncated;
                    }
                    s *= cplx(0.0, -0.5 * z) * tx;
                }
                out.smooth(i, j) += f + s;
            }
        }
    }
    if (stats) stats->truncated_targets += truncated;
    return out;
}

Kernel apply_K(const Kernel& k, const PotentialSpec& pot, const KConfig& cfg, KStats* stats) {
    if (pot.domain.is_box() && std::isfinite(cfg.r0) && !pot.domain.contains(cfg.r0))
        throw DomainError("base point r0 = " + std::to_string(cfg.r0) + " lies outside the box");
    Kernel out(k.grid);
    if (pot.has_segments()) {
        if (!is_zero(k.c_diag)) out += k.c_diag * apply_K_to_identity(pot, k.grid, cfg.r0);
        if (!is_zero(k.c_anti)) out += k.c_anti * apply_K_to_parity(pot, k.grid, cfg.r0);
        out += apply_K_smooth(k, pot, cfg, stats);
    }
    if (pot.has_deltas()) out += apply_K_delta_rule(k, pot, cfg.r0, stats);
    return out;
}

SeriesState neumann_series(const SeedPair& seed, const PotentialSpec& pot, const KConfig& cfg, const Grid& g,
                           SeriesFlags flags) {
    cfg.validate();
    pot.validate();
    SeriesState st(g);
    Kernel it = seed_to_kernel(seed, g, flags.include_identity, flags.include_parity);
    st.partial_sum = it;
    st.sup_norms.push_back(sup_norm(it.smooth));
    st.iterates.push_back(std::move(it));
    KStats stats;
    for (int l = 1; l <= cfg.max_order; ++l) {
        Kernel next = apply_K(st.iterates.back(), pot, cfg, &stats);
        const double s = sup_norm(next.smooth);
        if (s < cfg.stop_tol) {
            st.converged = true;
            break;
        }
        st.partial_sum += next;
        st.sup_norms.push_back(s);
        st.iterates.push_back(std::move(next));
        const auto& sn = st.sup_norms;
        const std::size_t m = sn.size();
        if (!st.divergence_warning && m >= 5 && sn[m - 1] > sn[m - 2] && sn[m - 2] > sn[m - 3] &&
            sn[m - 3] > sn[m - 4] && sn[m - 1] > 10.0 * sn[1]) {
            st.divergence_warning = true;
            st.warnings.push_back("iterate sup-norms grew for three consecutive orders up to order " +
                                  std::to_string(l));
        }
    }
    st.truncated_targets = stats.truncated_targets;
    if (st.truncated_targets > 0)
        st.warnings.push_back(std::to_string(st.truncated_targets) +
                              " target nodes integrated along paths leaving the grid");
    return st;
}

Eigen::MatrixXd convergence_bound(const PotentialSpec& pot, const Grid& g, int order) {
    if (pot.deltas.size() != 1 || pot.has_segments())
        throw UnsupportedError("the convergence bound is derived for a single delta term only");
    if (order < 1) throw ConfigError("bound order must be at least 1");
    const double z = std::abs(pot.coupling(pot.deltas[0]));
    const double a = pot.deltas[0].a;
    Eigen::MatrixXd b(g.n(), g.n());
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            b(i, j) = 0.5 * std::pow(z, order) *
                      std::pow(std::abs(g.node(i) - a) + std::abs(g.node(j) - a), order - 1);
    return b;
}

} // namespace pseudometric
