#include "pseudometric/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pseudometric/errors.hpp"

namespace pseudometric {

Grid::Grid(double X, int n) : X_(X), n_(n), h_(0.0) {
    if (n < 33) throw ConfigError("grid needs at least 33 nodes per axis, got " + std::to_string(n));
    if (n % 2 == 0) throw ConfigError("grid node count must be odd, got " + std::to_string(n));
    if (!(X > 0.0) || !std::isfinite(X)) throw ConfigError("grid half-width must be positive");
    h_ = 2.0 * X / (n - 1);
}

int Grid::nearest(double x) const {
    const long i = std::lround(x / h_) + center();
    if (i < 0) return 0;
    if (i >= n_) return n_ - 1;
    return static_cast<int>(i);
}

bool Grid::on_node(double x, double tol) const {
    const double t = x / h_;
    return std::abs(t - std::round(t)) < tol && std::abs(x) <= X_ * (1.0 + 1e-14);
}

Grid Grid::for_domain(const Domain& d, int n, double extent) {
    if (d.is_box()) return Grid(0.5 * d.L, n);
    return Grid(extent, n);
}

bool Grid::operator==(const Grid& o) const {
    return n_ == o.n_ && std::abs(X_ - o.X_) <= 1e-12 * std::max(1.0, std::abs(X_));
}

Kernel::Kernel(const Grid& g) : grid(g), smooth(ComplexMatrix::Zero(g.n(), g.n())) {}

Kernel Kernel::identity(const Grid& g) {
    Kernel k(g);
    k.c_diag = 1.0;
    return k;
}

Kernel Kernel::parity(const Grid& g) {
    Kernel k(g);
    k.c_anti = 1.0;
    return k;
}

cplx Kernel::smooth_at(double x, double y) const {
    const double h = grid.h();
    const double X = grid.X();
    const double eps = 1e-12 * h;
    if (x < -X - eps || x > X + eps || y < -X - eps || y > X + eps) return {0.0, 0.0};
    const int n = grid.n();
    double fx = (x + X) / h, fy = (y + X) / h;
    int i = std::min(std::max(static_cast<int>(std::floor(fx)), 0), n - 2);
    int j = std::min(std::max(static_cast<int>(std::floor(fy)), 0), n - 2);
    const double tx = std::clamp(fx - i, 0.0, 1.0), ty = std::clamp(fy - j, 0.0, 1.0);
    return (1 - tx) * (1 - ty) * smooth(i, j) + tx * (1 - ty) * smooth(i + 1, j) +
           (1 - tx) * ty * smooth(i, j + 1) + tx * ty * smooth(i + 1, j + 1);
}

Kernel& Kernel::operator+=(const Kernel& o) {
    if (grid != o.grid) throw DomainError("kernel grids differ");
    c_diag += o.c_diag;
    c_anti += o.c_anti;
    smooth += o.smooth;
    return *this;
}

Kernel& Kernel::operator-=(const Kernel& o) {
    if (grid != o.grid) throw DomainError("kernel grids differ");
    c_diag -= o.c_diag;
    c_anti -= o.c_anti;
    smooth -= o.smooth;
    return *this;
}

Kernel& Kernel::operator*=(cplx s) {
    c_diag *= s;
    c_anti *= s;
    smooth *= s;
    return *this;
}

Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
Kernel operator-(Kernel a, const Kernel& b) { return a -= b; }
Kernel operator*(cplx s, Kernel a) { return a *= s; }

double sup_norm(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Kernel& k) {
    return sup_norm(k.smooth.conjugate() - k.smooth.transpose()) + std::abs(k.c_diag.imag()) +
           std::abs(k.c_anti.imag());
}

double kernel_distance(const Kernel& a, const Kernel& b) {
    if (a.grid != b.grid) throw DomainError("kernel grids differ");
    return sup_norm(a.smooth - b.smooth) + std::abs(a.c_diag - b.c_diag) +
           std::abs(a.c_anti - b.c_anti);
}

} // namespace pseudometric
