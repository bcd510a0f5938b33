#include "pseudometric/operator_form.hpp"

#include <cmath>
#include <numbers>

#include "pseudometric/errors.hpp"

namespace pseudometric {

OperatorForm operator_form_free(const SeedPair& seed, const Grid& g, double hbar, double tol) {
    check_seed(seed, g);
    const auto xs = seed_arguments(g);
    const int N = static_cast<int>(xs.size());
    const int half = (N - 1) / 2;
    const double h = g.h();
    std::vector<cplx> up(N), um(N);
    for (int m = 0; m < N; ++m) {
        up[m] = seed.u_plus(xs[m]);
        um[m] = seed.u_minus(xs[m]);
    }

    OperatorForm f{g, hbar, {}, {}, {}, 0.0, 0.0};
    f.p.resize(N);
    f.L.resize(N);
    f.K.resize(N);
    std::vector<cplx> Lc(N);
    double scale = 0.0;
    for (int j = 0; j < N; ++j) {
        const double k = 2.0 * std::numbers::pi * (j - half) / (N * h);
        f.p[j] = hbar * k;
        cplx l{}, kk{};
        for (int m = 0; m < N; ++m) {
            // k x_m = 2 pi (j-half)(m-half)/N; reduce the phase to keep it exact.
            const long q = static_cast<long>(j - half) * (m - half) % N;
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(q) / N;
            const cplx e(std::cos(phase), -std::sin(phase));
            l += e * up[m];
            kk += std::conj(e) * um[m];
        }
        Lc[j] = h * l;
        f.K[j] = h * kk;
        scale = std::max({scale, std::abs(Lc[j]), std::abs(f.K[j])});
    }
    for (int j = 0; j < N; ++j) {
        f.L[j] = Lc[j].real();
        f.max_imag_L = std::max(f.max_imag_L, std::abs(Lc[j].imag()));
        f.max_K_defect = std::max(f.max_K_defect, std::abs(std::conj(f.K[j]) - f.K[N - 1 - j]));
    }
    const double bound = tol * std::max(1.0, scale);
    if (f.max_imag_L > bound || f.max_K_defect > bound)
        throw NumericalError("operator form violates its reality constraints (Im L " +
                             std::to_string(f.max_imag_L) + ", K defect " + std::to_string(f.max_K_defect) + ")");
    return f;
}

void operator_form_inverse(const OperatorForm& f, std::vector<cplx>& u_plus, std::vector<cplx>& u_minus) {
    const int N = static_cast<int>(f.p.size());
    const int half = (N - 1) / 2;
    const double h = f.grid.h();
    u_plus.assign(N, {});
    u_minus.assign(N, {});
    for (int m = 0; m < N; ++m) {
        cplx a{}, b{};
        for (int j = 0; j < N; ++j) {
            const long q = static_cast<long>(j - half) * (m - half) % N;
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(q) / N;
            const cplx e(std::cos(phase), std::sin(phase));
            a += e * f.L[j];
            b += std::conj(e) * f.K[j];
        }
        u_plus[m] = a / (N * h);
        u_minus[m] = b / (N * h);
    }
}

} // namespace pseudometric
