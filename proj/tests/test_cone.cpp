#include <gtest/gtest.h>

#include <cmath>

#include "hcone/cone.hpp"
#include "hcone/errors.hpp"
#include "hcone/integrals.hpp"
#include "hcone/rng.hpp"

using namespace hcone;

namespace {

double lorentz_det(const Vec& y) {
    double s = y[0] * y[0];
    for (std::size_t k = 1; k < y.size(); ++k) s -= y[k] * y[k];
    return s;
}

}  // namespace

TEST(Cone, BasePointHasUnitPowers) {
    for (const ConeStructure& c : {ConeStructure::lorentz(3), ConeStructure::lorentz(5), ConeStructure::spherical()}) {
        auto q = q_values(c, base_point(c));
        EXPECT_DOUBLE_EQ(q[0], 1.0);
        EXPECT_DOUBLE_EQ(q[1], 1.0);
    }
}

TEST(Cone, LorentzProductIsQuadraticForm) {
    Rng rng(11);
    for (int n : {3, 4, 6}) {
        const ConeStructure c = ConeStructure::lorentz(n);
        for (int i = 0; i < 50; ++i) {
            Vec y = random_cone_point(c, rng, 0.8);
            auto q = q_values(c, y);
            EXPECT_NEAR(q[0] * q[1], lorentz_det(y), 1e-10 * y[0] * y[0]);
            EXPECT_NEAR(q[0], y[0] + y[n - 1], 1e-12 * y[0]);
        }
    }
}

TEST(Cone, MembershipMatchesDefinition) {
    Rng rng(12);
    const ConeStructure l4 = ConeStructure::lorentz(4);
    const ConeStructure sp = ConeStructure::spherical();
    for (int i = 0; i < 500; ++i) {
        Vec y{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double r = std::sqrt(y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
        if (std::abs(y[0] - r) > 1e-6) EXPECT_EQ(in_cone(l4, y), y[0] > r);
        Vec s{y[0], y[1], y[2]};
        double det = s[0] * s[2] - s[1] * s[1];
        if (std::abs(det) > 1e-6) EXPECT_EQ(in_cone(sp, s), s[0] > 0 && det > 0);
    }
}

TEST(Cone, PowersAreRelativelyInvariant) {
    Rng rng(13);
    for (const ConeStructure& c : {ConeStructure::lorentz(3), ConeStructure::lorentz(5), ConeStructure::spherical()}) {
        for (int i = 0; i < 20; ++i) {
            TriangularElement t = random_triangular(c, rng, 0.7);
            Vec y = random_cone_point(c, rng, 0.7);
            Exponent a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            double lhs = q_power(c, group_act(c, t, y), a);
            double rhs = q_power(c, group_act_e(c, t), a) * q_power(c, y, a);
            EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
        }
    }
}

TEST(Cone, DecompositionInvertsTheAction) {
    Rng rng(14);
    const ConeStructure c = ConeStructure::lorentz(5);
    for (int i = 0; i < 20; ++i) {
        Vec y = random_cone_point(c, rng, 1.0);
        Vec back = group_act_e(c, triangular_decompose(c, y));
        for (int k = 0; k < c.n; ++k) EXPECT_NEAR(back[k], y[k], 1e-12 * y[0]);
        TriangularElement t = random_triangular(c, rng);
        Vec z = group_act(c, inverse(t), group_act(c, t, y));
        for (int k = 0; k < c.n; ++k) EXPECT_NEAR(z[k], y[k], 1e-11 * y[0]);
    }
}

TEST(Cone, CompositionIsAHomomorphism) {
    Rng rng(15);
    for (const ConeStructure& c : {ConeStructure::lorentz(4), ConeStructure::spherical()}) {
        TriangularElement a = random_triangular(c, rng), b = random_triangular(c, rng);
        Vec y = random_cone_point(c, rng);
        Vec lhs = group_act(c, compose(a, b), y);
        Vec rhs = group_act(c, a, group_act(c, b, y));
        for (int k = 0; k < c.n; ++k) EXPECT_NEAR(lhs[k], rhs[k], 1e-12 * std::abs(rhs[0]));
    }
}

TEST(Cone, DualActionIsTheAdjoint) {
    Rng rng(16);
    for (const ConeStructure& c : {ConeStructure::lorentz(3), ConeStructure::lorentz(6), ConeStructure::spherical()}) {
        for (int i = 0; i < 10; ++i) {
            TriangularElement t = random_triangular(c, rng);
            Vec x(c.n), xi(c.n);
            for (int k = 0; k < c.n; ++k) {
                x[k] = rng.normal();
                xi[k] = rng.normal();
            }
            double lhs = pairing(c, group_act(c, t, x), xi);
            double rhs = pairing(c, x, dual_group_act(c, t, xi));
            EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(lhs)));
        }
    }
}

TEST(Cone, GroupMatrixMatchesAction) {
    Rng rng(17);
    const ConeStructure c = ConeStructure::lorentz(4);
    TriangularElement t = random_triangular(c, rng);
    std::vector<double> m = group_matrix(c, t);
    Vec y = random_cone_point(c, rng);
    Vec direct = group_act(c, t, y);
    for (int i = 0; i < c.n; ++i) {
        double s = 0;
        for (int j = 0; j < c.n; ++j) s += m[i * c.n + j] * y[j];
        EXPECT_NEAR(s, direct[i], 1e-12 * std::abs(direct[0]));
    }
}

TEST(Cone, DualPowerSymbolOnLorentz) {
    Rng rng(18);
    const ConeStructure c = ConeStructure::lorentz(3);
    for (int i = 0; i < 10; ++i) {
        Vec xi = dual_group_act_e(c, random_triangular(c, rng));
        EXPECT_NEAR(dual_power(c, xi, {1, 1}), lorentz_det(xi), 1e-10 * xi[0] * xi[0]);
    }
}

TEST(Cone, InvariantDistance) {
    Rng rng(19);
    const ConeStructure c = ConeStructure::lorentz(4);
    Vec e = base_point(c);
    Vec e3 = e;
    for (double& v : e3) v *= 3.0;
    EXPECT_NEAR(invariant_distance(c, e, e3), kDistanceScale * std::log(3.0), 1e-12);
    for (int i = 0; i < 10; ++i) {
        Vec a = random_cone_point(c, rng), b = random_cone_point(c, rng);
        TriangularElement t = random_triangular(c, rng);
        double d0 = invariant_distance(c, a, b);
        EXPECT_NEAR(invariant_distance(c, group_act(c, t, a), group_act(c, t, b)), d0, 1e-9);
        EXPECT_NEAR(invariant_distance(c, b, a), d0, 1e-9);
    }
}

TEST(Cone, RejectsBadInput) {
    const ConeStructure c = ConeStructure::lorentz(3);
    EXPECT_THROW(ConeStructure::lorentz(2), ValidationError);
    EXPECT_THROW(q_values(c, Vec{1, 0}), ValidationError);
    EXPECT_THROW(q_values(c, Vec{1, 1, 0}), DomainError);
    EXPECT_THROW(triangular_decompose(c, Vec{-1, 0, 0}), DomainError);
}

TEST(Cone, StructureLabels) {
    const ConeStructure c = ConeStructure::lorentz(5);
    EXPECT_EQ(c.m, (std::array<int, 2>{3, 0}));
    EXPECT_EQ(c.nn, (std::array<int, 2>{0, 3}));
    EXPECT_EQ(c.frame_m(), (std::array<int, 2>{0, 3}));
    const ConeStructure s = ConeStructure::spherical();
    EXPECT_EQ(s.b, (std::array<int, 2>{0, 1}));
    EXPECT_EQ(s.tube().b, (std::array<int, 2>{0, 0}));
}
