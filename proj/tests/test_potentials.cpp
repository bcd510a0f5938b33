#include <gtest/gtest.h>

#include <numbers>

#include "pseudometric/errors.hpp"
#include "pseudometric/potentials.hpp"
#include "test_util.hpp"

using namespace pseudometric;

TEST(Potentials, SquareWellValues) {
    const auto sw = models::square_well(0.1, std::numbers::pi);
    EXPECT_NEAR(std::abs(eval_potential(sw, 0.5) - cplx(0, -0.1)), 0.0, 1e-15);
    EXPECT_EQ(eval_potential(sw, 0.0), cplx(0, 0));
    EXPECT_NEAR(std::abs(eval_potential(sw, -1.0) - cplx(0, 0.1)), 0.0, 1e-15);
    EXPECT_THROW(eval_potential(sw, 2.0), DomainError);
}

TEST(Potentials, ScatteringVanishesOutside) {
    const auto sc = models::scattering(0.3, 1.0);
    EXPECT_EQ(eval_potential(sc, 1.0), cplx(0, 0));
    EXPECT_EQ(eval_potential(sc, -5.0), cplx(0, 0));
    EXPECT_NEAR(std::abs(eval_potential(sc, 0.25) - cplx(0, -0.3)), 0.0, 1e-15);
}

TEST(Potentials, MassTermHandValue) {
    // c0 = 1 in the bender-tan gauge; v(0.5)* - v(0.3) = 0.1i + 0.1i
    const auto sw = models::square_well(0.1, std::numbers::pi);
    EXPECT_NEAR(std::abs(eval_mass_term(sw, 0.5, 0.3) - cplx(0, 0.2)), 0.0, 1e-15);
}

TEST(Potentials, MassTermFreeAndReal) {
    PotentialSpec free;
    EXPECT_EQ(eval_mass_term(free, 0.3, -0.7), cplx(0, 0));
    PotentialSpec real;
    real.segments = {{-1, 0, 0.4}, {0, 1, -0.2}};
    for (double x : {-0.9, -0.2, 0.0, 0.5}) EXPECT_EQ(eval_mass_term(real, x, x), cplx(0, 0));
}

TEST(Potentials, ValidationErrors) {
    PotentialSpec p;
    p.segments = {{0, 1, 1.0}, {0.5, 2, 1.0}};
    EXPECT_THROW(p.validate(), ConfigError);
    p.segments = {{0, 1, cplx(0.1, 0.2)}};
    p.purely_imaginary = true;
    EXPECT_THROW(p.validate(), ConfigError);
    auto box = models::square_well(0.1, 2.0);
    box.deltas = {{1.5, 0.1}};
    EXPECT_THROW(box.validate(), DomainError);
    PotentialSpec bad_mass;
    bad_mass.constants.mass = -1;
    EXPECT_THROW(bad_mass.validate(), ConfigError);
}

TEST(Potentials, SegmentIntegralOrientedAndInfinite) {
    const auto sc = models::scattering(0.2, 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    // v = -0.2i sign(x) on |x| < 1/2
    EXPECT_NEAR(std::abs(sc.segment_integral(-inf, inf)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sc.segment_integral(0, inf) - cplx(0, -0.1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sc.segment_integral(inf, 0) - cplx(0, 0.1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sc.segment_integral(-0.25, 0.25)), 0.0, 1e-15);
}

TEST(Potentials, JsonRoundTrip) {
    const nlohmann::json doc = nlohmann::json::parse(R"({
        "constants": {"hbar": 1.0, "mass": 0.5},
        "domain": {"type": "box", "L": 3.0},
        "segments": [{"from": -1.5, "to": 0.0, "re": 0.0, "im": 0.1},
                     {"from": 0.0, "to": 1.5, "re": 0.0, "im": -0.1}],
        "deltas": [{"a": 0.5, "zeta": 0.2}]
    })");
    const auto p = potential_from_json(doc);
    EXPECT_TRUE(p.domain.is_box());
    EXPECT_DOUBLE_EQ(p.domain.L, 3.0);
    ASSERT_EQ(p.segments.size(), 2u);
    EXPECT_EQ(p.segments[1].value, cplx(0, -0.1));
    ASSERT_EQ(p.deltas.size(), 1u);
    EXPECT_DOUBLE_EQ(p.deltas[0].zeta, 0.2);
    const auto back = potential_from_json(potential_to_json(p));
    EXPECT_EQ(potential_to_json(back), potential_to_json(p));
    EXPECT_THROW(potential_from_json(nlohmann::json::parse(R"({"domain": {"type": "ring"}})")), ConfigError);
}

TEST(Potentials, PtSymmetryFlag) {
    EXPECT_TRUE(models::square_well(0.3, 2.0).is_pt_symmetric());
    PotentialSpec p;
    p.segments = {{-1, 0, cplx(0, 0.1)}, {0, 1, cplx(0, 0.2)}};
    EXPECT_FALSE(p.is_pt_symmetric());
}

TEST(PotentialProperties, MassTermAntisymmetry) {
    testutil::Gen gen(11);
    const Grid g(2.0, 33);
    for (int c = 0; c < testutil::kCases; ++c) {
        const auto p = gen.potential(g, gen.coin(), false);
        for (int k = 0; k < 5; ++k) {
            const double x = gen.uniform(-2, 2), y = gen.uniform(-2, 2);
            EXPECT_NEAR(std::abs(eval_mass_term(p, x, y) + std::conj(eval_mass_term(p, y, x))), 0.0, 1e-14);
        }
    }
}

TEST(PotentialProperties, RealPotentialDiagonalVanishes) {
    testutil::Gen gen(12);
    for (int c = 0; c < testutil::kCases; ++c) {
        PotentialSpec p;
        double lo = -2;
        for (int k = 0; k < 3; ++k) {
            const double hi = lo + gen.uniform(0.1, 1.3);
            p.segments.push_back({lo, hi, gen.uniform(-1, 1)});
            lo = hi;
        }
        const double x = gen.uniform(-2.5, 2.5);
        EXPECT_EQ(eval_mass_term(p, x, x), cplx(0, 0));
    }
}

TEST(PotentialProperties, PtSymmetricIdentity) {
    // mu^2(-x, -y) = -mu^2(y, x) when v(-x) = v(x)*
    testutil::Gen gen(13);
    for (int c = 0; c < testutil::kCases; ++c) {
        const double X = gen.uniform(0.5, 3);
        PotentialSpec p;
        p.constants = gen.coin() ? PhysConstants::natural() : PhysConstants::bender_tan();
        const int m = gen.integer(1, 3);
        std::vector<double> cuts{0.0};
        for (int k = 0; k < m; ++k) cuts.push_back(cuts.back() + X / m);
        std::vector<cplx> vals(m);
        for (auto& v : vals) v = gen.complex();
        for (int k = m - 1; k >= 0; --k) p.segments.push_back({-cuts[k + 1], -cuts[k], std::conj(vals[k])});
        for (int k = 0; k < m; ++k) p.segments.push_back({cuts[k], cuts[k + 1], vals[k]});
        ASSERT_TRUE(p.is_pt_symmetric());
        for (int k = 0; k < 5; ++k) {
            const double x = gen.uniform(-X, X), y = gen.uniform(-X, X);
            EXPECT_NEAR(std::abs(eval_mass_term(p, -x, -y) + eval_mass_term(p, y, x)), 0.0, 1e-14);
        }
    }
}
