#pragma once

#include <complex>

#include <Eigen/Dense>

#include "pseudometric/potentials.hpp"

namespace pseudometric {

using ComplexMatrix = Eigen::MatrixXcd;

/// Square grid [-X, X]^2 with n nodes per axis; n is odd so 0 is a node.
class Grid {
public:
    Grid(double X, int n);

    double X() const { return X_; }
    int n() const { return n_; }
    double h() const { return h_; }
    int center() const { return (n_ - 1) / 2; }
    double node(int i) const { return (i - center()) * h_; }

    /// Nearest node index, clamped to the grid.
    int nearest(double x) const;
    /// True when x lies within half a spacing of a node.
    bool on_node(double x, double tol = 1e-9) const;

    /// Box potentials get X = L/2; full-line ones use the caller's extent.
    static Grid for_domain(const Domain& d, int n, double extent);

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    double X_;
    int n_;
    double h_;
};

/// eta(x, y) = c_diag delta(x - y) + c_anti delta(x + y) + smooth(x, y).
/// Rows of `smooth` are x nodes, columns are y nodes.
struct Kernel {
    Grid grid;
    cplx c_diag{0.0, 0.0};
    cplx c_anti{0.0, 0.0};
    ComplexMatrix smooth;

    explicit Kernel(const Grid& g);

    static Kernel zero(const Grid& g) { return Kernel(g); }
    static Kernel identity(const Grid& g);
    static Kernel parity(const Grid& g);

    /// Bilinear interpolation of the smooth part, 0 outside the grid.
    cplx smooth_at(double x, double y) const;

    Kernel& operator+=(const Kernel& o);
    Kernel& operator-=(const Kernel& o);
    Kernel& operator*=(cplx s);
};

Kernel operator+(Kernel a, const Kernel& b);
Kernel operator-(Kernel a, const Kernel& b);
Kernel operator*(cplx s, Kernel a);

double sup_norm(const ComplexMatrix& m);

/// max |smooth(x,y)* - smooth(y,x)| + |Im c_diag| + |Im c_anti|.
double hermiticity_defect(const Kernel& k);

/// Sup-norm distance of smooth parts plus the singular coefficient gaps.
double kernel_distance(const Kernel& a, const Kernel& b);

} // namespace pseudometric
