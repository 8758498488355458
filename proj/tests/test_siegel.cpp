#include <gtest/gtest.h>

#include <cmath>

#include "hcone/errors.hpp"
#include "hcone/integrals.hpp"
#include "hcone/rng.hpp"
#include "hcone/siegel.hpp"

using namespace hcone;

TEST(Siegel, FormAndBase) {
    CVec f = ps_form(cplx(1, 2), cplx(3, -1));
    EXPECT_EQ(f[0], cplx(0));
    EXPECT_EQ(f[1], cplx(0));
    EXPECT_EQ(f[2], cplx(1, 2) * cplx(3, 1));
    SiegelPoint p{{cplx(0.5, 2), cplx(0, 0.3), cplx(1, 1.5)}, cplx(0.6, 0.8)};
    Vec b = siegel_base(p);
    EXPECT_DOUBLE_EQ(b[0], 2.0);
    EXPECT_DOUBLE_EQ(b[1], 0.3);
    EXPECT_NEAR(b[2], 0.5, 1e-15);
}

TEST(Siegel, MembershipMatchesDefinition) {
    const Domain dom = Domain::pyateckii_shapiro();
    Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        SiegelPoint p{{cplx(rng.normal(), rng.uniform(-0.5, 2)), cplx(rng.normal(), rng.uniform(-1, 1)),
                       cplx(rng.normal(), rng.uniform(-0.5, 3))},
                      cplx(rng.normal(), rng.normal())};
        double y11 = p.z[0].imag(), y12 = p.z[1].imag(), y22 = p.z[2].imag() - std::norm(p.u);
        double det = y11 * y22 - y12 * y12;
        if (std::abs(det) < 1e-6 || std::abs(y11) < 1e-6) continue;
        EXPECT_EQ(in_domain(dom, p), y11 > 0 && det > 0);
    }
}

TEST(Siegel, TubeDensityIsDeterminantPower) {
    const Domain dom = Domain::tube(ConeStructure::lorentz(3));
    Rng rng(22);
    for (int i = 0; i < 10; ++i) {
        TubePoint p{{rng.normal(), rng.normal(), rng.normal()}, random_cone_point(dom.cone, rng)};
        // ν − τ = (1/2, 1/2): density Δ(y)^{1/2}.
        double det = p.y[0] * p.y[0] - p.y[1] * p.y[1] - p.y[2] * p.y[2];
        EXPECT_NEAR(measure_density(dom, p, {2, 2}), std::sqrt(det), 1e-12 * p.y[0]);
    }
    EXPECT_THROW(measure_density(dom, TubePoint{{0, 0, 0}, {1, 2, 0}}, {2, 2}), DomainError);
}

TEST(Siegel, MixedNormBasics) {
    const Domain dom = Domain::tube(ConeStructure::lorentz(3));
    QuadratureSpec q;
    q.nodes = 4;
    ProductGrid g = make_product_grid(dom, q);
    double xs = 0;
    for (double w : g.x_weights) xs += w;
    EXPECT_NEAR(xs, std::pow(2 * q.r_x, 3), 1e-9);

    std::vector<std::vector<cplx>> ones(g.y_nodes.size(), std::vector<cplx>(g.x_nodes.size(), 1.0));
    std::vector<std::vector<cplx>> twos = ones;
    for (auto& row : twos)
        for (auto& v : row) v = 2.0;
    MixedNormParams mp{2.0, 3.0, {2, 2}};
    double a = mixed_norm(ones, g, mp, dom), b = mixed_norm(twos, g, mp, dom);
    EXPECT_NEAR(b / a, 2.0, 1e-12);

    // Constant rows: the inner norm is (Σ w)^{1/p}, so the p-dependence is explicit.
    MixedNormParams p1{1.0, 2.0, {2, 2}}, pinf{HUGE_VAL, 2.0, {2, 2}};
    double n1 = mixed_norm(ones, g, p1, dom), ninf = mixed_norm(ones, g, pinf, dom);
    EXPECT_NEAR(n1 / ninf, xs, 1e-9 * xs);
}

TEST(Siegel, ParameterValidation) {
    EXPECT_THROW((MixedNormParams{0.5, 2, {}}).validate(), ValidationError);
    EXPECT_THROW((MixedNormParams{2, HUGE_VAL, {}}).validate(), ValidationError);
    QuadratureSpec q;
    q.nodes = 1;
    EXPECT_THROW(make_product_grid(Domain::pyateckii_shapiro(), q), ValidationError);
}
