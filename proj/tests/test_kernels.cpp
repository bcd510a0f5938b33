#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "pseudometric/errors.hpp"
#include "pseudometric/kernel.hpp"
#include "pseudometric/kernel_io.hpp"
#include "pseudometric/operator_form.hpp"
#include "pseudometric/seed.hpp"
#include "test_util.hpp"

using namespace pseudometric;
namespace fs = std::filesystem;

TEST(Grid, Construction) {
    const Grid g(2.0, 33);
    EXPECT_DOUBLE_EQ(g.h(), 0.125);
    EXPECT_EQ(g.center(), 16);
    EXPECT_DOUBLE_EQ(g.node(0), -2.0);
    EXPECT_DOUBLE_EQ(g.node(32), 2.0);
    EXPECT_EQ(g.nearest(0.13), 17);
    EXPECT_EQ(g.nearest(99.0), 32);
    EXPECT_THROW(Grid(1.0, 31), ConfigError);
    EXPECT_THROW(Grid(1.0, 34), ConfigError);
    EXPECT_DOUBLE_EQ(Grid::for_domain(Domain::box(std::numbers::pi), 65, 9.0).X(), 0.5 * std::numbers::pi);
}

TEST(Kernel, HermiticityDefectExamples) {
    const Grid g(1.5, 33);
    EXPECT_EQ(hermiticity_defect(Kernel::identity(g)), 0.0);
    Kernel s(g), lin(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
            s.smooth(i, j) = cplx(0, sign(g.node(i) - g.node(j)));
            lin.smooth(i, j) = g.node(i);
        }
    EXPECT_EQ(hermiticity_defect(s), 0.0);
    EXPECT_NEAR(hermiticity_defect(lin), 2 * g.X(), 1e-14);
    Kernel c(g);
    c.c_diag = cplx(1, 0.25);
    EXPECT_NEAR(hermiticity_defect(c), 0.25, 1e-15);
}

TEST(Kernel, SmoothInterpolation) {
    const Grid g(1.0, 33);
    Kernel k(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) k.smooth(i, j) = cplx(2 * g.node(i) - g.node(j), g.node(i) * 0.5);
    // bilinear reproduces affine fields exactly
    EXPECT_NEAR(std::abs(k.smooth_at(0.31, -0.77) - cplx(2 * 0.31 + 0.77, 0.155)), 0.0, 1e-13);
    EXPECT_EQ(k.smooth_at(1.5, 0.0), cplx(0, 0));
}

TEST(Seed, ZeroSeedIsIdentity) {
    const Grid g(1.0, 33);
    const Kernel k = seed_to_kernel(SeedPair::zero(), g, true, false);
    EXPECT_EQ(k.c_diag, cplx(1, 0));
    EXPECT_EQ(k.c_anti, cplx(0, 0));
    EXPECT_EQ(sup_norm(k.smooth), 0.0);
}

TEST(Seed, BenderTanPreset) {
    const Grid g(0.5 * std::numbers::pi, 65);
    const Kernel k = seed_to_kernel(seeds::bender_tan(), g, true, false);
    for (int i = 0; i < g.n(); i += 7)
        for (int j = 0; j < g.n(); j += 5) {
            const double d = g.node(i) - g.node(j);
            const cplx want = cplx(0, 0.25) * (std::abs(d) - std::numbers::pi) * sign(d);
            EXPECT_NEAR(std::abs(k.smooth(i, j) - want), 0.0, 1e-14);
        }
    EXPECT_LT(hermiticity_defect(k), 1e-14);
}

TEST(Seed, ViolationThrows) {
    const Grid g(1.0, 33);
    SeedPair bad;
    bad.u_plus = [](double x) { return cplx(x, 0); };
    bad.u_minus = [](double) { return cplx{}; };
    try {
        seed_to_kernel(bad, g, true, false);
        FAIL() << "expected ConstraintError";
    } catch (const ConstraintError& e) {
        // |u+(x)* - u+(-x)| = 2|x| peaks at the largest argument 2X
        EXPECT_NEAR(e.violation(), 4.0, 1e-12);
    }
}

TEST(Seed, CsvRoundTrip) {
    const fs::path p = fs::temp_directory_path() / "pm_seed_test.csv";
    {
        std::ofstream out(p);
        out << "x,plus_re,plus_im,minus_re,minus_im\n";
        out << "-1,0,-1,0.5,0\n0,0,0,1,0\n1,0,1,0.5,0\n";
    }
    const SeedPair s = seeds::from_csv(p.string());
    EXPECT_NEAR(std::abs(s.u_plus(0.5) - cplx(0, 0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.u_minus(-0.5) - cplx(0.75, 0)), 0.0, 1e-15);
    {
        std::ofstream out(p);
        out << "x,re,im\n1,2,3\n";
    }
    EXPECT_THROW(seeds::from_csv(p.string()), ConfigError);
    fs::remove(p);
}

TEST(OperatorForm, GaussianMatchesFourierTransform) {
    const Grid g(4.0, 129);
    SeedPair s;
    s.u_plus = [](double x) { return cplx(std::exp(-x * x), 0); };
    s.u_minus = [](double) { return cplx{}; };
    const auto f = operator_form_free(s, g);
    double worst = 0.0, kmax = 0.0;
    for (std::size_t j = 0; j < f.p.size(); ++j) {
        const double k = f.p[j];
        worst = std::max(worst, std::abs(f.L[j] - std::sqrt(std::numbers::pi) * std::exp(-k * k / 4)));
        kmax = std::max(kmax, std::abs(f.K[j]));
        EXPECT_GT(f.L[j], -1e-12);
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_EQ(kmax, 0.0);
}

TEST(OperatorForm, ZeroSeed) {
    const auto f = operator_form_free(SeedPair::zero(), Grid(1.0, 33));
    for (double l : f.L) EXPECT_EQ(l, 0.0);
    for (cplx k : f.K) EXPECT_EQ(k, cplx(0, 0));
}

TEST(OperatorForm, EvenBump) {
    // u- = (1 - x^2)^2 on |x| < 1; K(p) = int e^{ipx} u- = 16 (3 sin p - 3 p cos p - p^2 sin p) / p^5
    const Grid g(2.0, 257);
    SeedPair s;
    s.u_plus = [](double) { return cplx{}; };
    s.u_minus = [](double x) { return std::abs(x) < 1 ? cplx(std::pow(1 - x * x, 2), 0) : cplx{}; };
    const auto f = operator_form_free(s, g);
    double worst = 0.0;
    for (std::size_t j = 0; j < f.p.size(); ++j) {
        const double p = f.p[j];
        if (std::abs(p) > 10) continue;
        const double want = std::abs(p) < 1e-3 ? 16.0 / 15.0
                                                : 16 * (3 * std::sin(p) - 3 * p * std::cos(p) - p * p * std::sin(p)) /
                                                      std::pow(p, 5);
        worst = std::max(worst, std::abs(f.K[j] - want));
        EXPECT_NEAR(f.K[j].imag(), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(f.K[j] - f.K[f.p.size() - 1 - j]), 0.0, 1e-12);
        EXPECT_EQ(f.L[j], 0.0);
    }
    EXPECT_LT(worst, 1e-3);
}

TEST(OperatorForm, RoundTrip) {
    const Grid g(3.0, 65);
    SeedPair s;
    s.u_plus = [](double x) { return cplx(std::exp(-x * x), 0.3 * x * std::exp(-x * x)); };
    s.u_minus = [](double x) { return cplx(std::exp(-2 * (x - 0.1) * (x - 0.1)), 0); };
    const auto f = operator_form_free(s, g);
    std::vector<cplx> up, um;
    operator_form_inverse(f, up, um);
    const auto xs = seed_arguments(g);
    for (std::size_t m = 0; m < xs.size(); ++m) {
        EXPECT_NEAR(std::abs(up[m] - s.u_plus(xs[m])), 0.0, 1e-8);
        EXPECT_NEAR(std::abs(um[m] - s.u_minus(xs[m])), 0.0, 1e-8);
    }
}

TEST(KernelIo, CsvRoundTripAndErrors) {
    testutil::Gen gen(5);
    const Grid g(1.25, 33);
    Kernel k = gen.general_kernel(g);
    const fs::path p = fs::temp_directory_path() / "pm_kernel_test.csv";
    write_kernel_csv(k, p.string());
    const Kernel r = read_kernel_csv(p.string());
    EXPECT_TRUE(r.grid == g);
    EXPECT_LT(kernel_distance(k, r), 1e-11);

    std::ifstream in(p);
    std::string l1, l2, l3, l4;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    EXPECT_EQ(l1.rfind("# c_diag_re,c_diag_im,", 0), 0u);
    EXPECT_EQ(l2.rfind("# c_anti_re,c_anti_im,", 0), 0u);
    EXPECT_EQ(l4, "x,y,re,im");
    in.close();

    {
        std::ofstream out(p);
        out << "x,y,re,im\n0,0,1,1\n";
    }
    EXPECT_THROW(read_kernel_csv(p.string()), ConfigError);
    EXPECT_THROW(read_kernel_csv("/nonexistent/kernel.csv"), ConfigError);
    fs::remove(p);
}

TEST(KernelIo, PgmHeader) {
    const Grid g(1.0, 33);
    Kernel k(g);
    k.smooth(3, 4) = cplx(0, 2);
    const fs::path p = fs::temp_directory_path() / "pm_kernel_test.pgm";
    write_kernel_pgm(k, p.string());
    std::ifstream in(p);
    std::string magic, comment;
    std::getline(in, magic);
    std::getline(in, comment);
    EXPECT_EQ(magic, "P2");
    EXPECT_NE(comment.find("min"), std::string::npos);
    EXPECT_NE(comment.find("max"), std::string::npos);
    fs::remove(p);
}

// Random valid seeds give Hermitian kernels.
TEST(KernelProperties, SeedKernelsAreHermitian) {
    testutil::Gen gen(21);
    for (int c = 0; c < testutil::kCases; ++c) {
        const Grid g(gen.uniform(0.5, 3.0), 33 + 2 * gen.integer(0, 8));
        const SeedPair s = gen.valid_seed(g);
        const Kernel k = seed_to_kernel(s, g, gen.coin(), gen.coin());
        EXPECT_LT(hermiticity_defect(k), 1e-10);
    }
}

// Seeds breaking either reality constraint are always rejected; valid ones never are.
TEST(KernelProperties, SeedConstraintEnforcement) {
    testutil::Gen gen(22);
    for (int c = 0; c < testutil::kCases; ++c) {
        const Grid g(gen.uniform(0.5, 3.0), 33);
        const SeedPair good = gen.valid_seed(g);
        EXPECT_NO_THROW(check_seed(good, g));
        const double amp = gen.uniform(1e-6, 1.0);
        const double x0 = g.node(gen.integer(0, g.n() - 1)) + g.node(gen.integer(0, g.n() - 1));
        SeedPair bad = good;
        auto bump = [amp, x0, h = g.h()](double x) { return std::abs(x - x0) < 0.25 * h ? amp : 0.0; };
        const bool break_plus = gen.coin();
        if (break_plus) {
            // a real bump off the origin breaks u+(x)* = u+(-x); at the origin use an imaginary one
            auto up = good.u_plus;
            const bool at_origin = std::abs(x0) < 1e-12;
            bad.u_plus = [up, bump, at_origin](double x) {
                return up(x) + (at_origin ? cplx(0, bump(x)) : cplx(bump(x), 0));
            };
        } else {
            auto um = good.u_minus;
            bad.u_minus = [um, bump](double x) { return um(x) + cplx(0, bump(x)); };
        }
        try {
            seed_to_kernel(bad, g, true, false);
            ADD_FAILURE() << "violation of size " << amp << " not detected";
        } catch (const ConstraintError& e) {
            EXPECT_GE(e.violation(), amp * (1 - 1e-9));
        }
    }
}

// L(p) is real and K(p)* = K(-p) for every valid seed.
TEST(KernelProperties, OperatorFormReality) {
    testutil::Gen gen(23);
    for (int c = 0; c < testutil::kCases; ++c) {
        const Grid g(gen.uniform(0.5, 3.0), 33 + 2 * gen.integer(0, 4));
        const SeedPair s = gen.valid_seed(g);
        const OperatorForm f = operator_form_free(s, g, gen.uniform(0.5, 2.0));
        double scale = 1.0;
        for (std::size_t j = 0; j < f.p.size(); ++j) scale = std::max({scale, std::abs(f.L[j]), std::abs(f.K[j])});
        EXPECT_LE(f.max_imag_L, 1e-8 * scale);
        EXPECT_LE(f.max_K_defect, 1e-8 * scale);
        for (std::size_t j = 0; j < f.p.size(); ++j) EXPECT_NEAR(f.p[j], -f.p[f.p.size() - 1 - j], 1e-12 * scale);
    }
}
