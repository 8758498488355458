#include <gtest/gtest.h>

#include <cmath>

#include "hcone/errors.hpp"
#include "hcone/integrals.hpp"
#include "hcone/kernels.hpp"
#include "hcone/projector.hpp"
#include "hcone/rng.hpp"

using namespace hcone;

namespace {

CVec tube_point(const ConeStructure& c, Rng& rng, double xs = 1.0) {
    Vec y = random_cone_point(c, rng, 0.3);
    CVec z(c.n);
    for (int k = 0; k < c.n; ++k) z[k] = cplx(rng.uniform(-xs, xs), y[k]);
    return z;
}

CVec ie(const ConeStructure& c) {
    Vec e = base_point(c);
    CVec z(c.n);
    for (int k = 0; k < c.n; ++k) z[k] = cplx(0, e[k]);
    return z;
}

}  // namespace

TEST(Projector, BoxEigenvalueOnDeterminantPowers) {
    // □_y Δ^{−s} = 4s(s + 1 − n/2) Δ^{−s−1} on the Lorentz cone, by direct differentiation.
    BoxSpec box;
    for (int n : {3, 4, 5, 6}) {
        const ConeStructure c = ConeStructure::lorentz(n);
        const double floor = 0.5 * (n - 2);  // admissible powers need s > (n − 2)/2
        if (n > 3) {
            EXPECT_THROW(box_apply_exact(c, {floor, floor}, box), ValidationError);
        }
        for (double s : {floor + 0.5, floor + 1.25, floor + 2.0}) {
            auto [next, cmu] = box_apply_exact(c, {s, s}, box);
            EXPECT_NEAR(cmu, 4 * s * (s + 1 - 0.5 * n), 1e-12) << n << " " << s;
            EXPECT_DOUBLE_EQ(next[0], s + 1);
            EXPECT_DOUBLE_EQ(next[1], s + 1);
        }
    }
}

TEST(Projector, FiniteDifferenceBoxMatchesEigenvalue) {
    Rng rng(51);
    const ConeStructure c = ConeStructure::lorentz(4);
    const Exponent mu{2.5, 1.5};
    auto [next, cmu] = box_apply_exact(c, mu, BoxSpec{});
    TubeFunction f = [&](const CVec& w) { return complex_power(c, w, mu).value; };
    for (int i = 0; i < 3; ++i) {
        CVec z = tube_point(c, rng);
        cplx ratio = box_fd_richardson(c, f, z, 0.05) / complex_power(c, z, next).value;
        EXPECT_NEAR(std::abs(ratio / cmu - 1.0), 0.0, 1e-6);
    }
}

TEST(Projector, SecondOrderStencilOnPlaneWaves) {
    Rng rng(52);
    const ConeStructure c = ConeStructure::lorentz(3);
    Vec xi = dual_group_act_e(c, random_triangular(c, rng, 0.3));
    const double symbol = xi[0] * xi[0] - xi[1] * xi[1] - xi[2] * xi[2];
    TubeFunction f = [&](const CVec& z) {
        double ph = 0;
        for (int k = 0; k < c.n; ++k) ph += z[k].real() * xi[k];
        return std::exp(cplx(0, ph));
    };
    CVec z = tube_point(c, rng);
    double e1 = std::abs(box_fd_at(c, f, z, 0.1, 2) - symbol * f(z));
    double e2 = std::abs(box_fd_at(c, f, z, 0.05, 2) - symbol * f(z));
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(Projector, GridBoxAgreesWithPointwiseStencil) {
    const ConeStructure c = ConeStructure::lorentz(3);
    const Exponent mu{2, 2};
    TubeFunction f = [&](const CVec& w) { return complex_power(c, w, mu).value; };
    const double h = 0.1;
    GridFunction g = sample_grid(c, f, {-0.4, -0.4, -0.4}, base_point(c), h, 9);
    BoxSpec box;
    box.h = h;
    GridFunction b = box_apply_fd(c, g, box);
    ASSERT_EQ(b.dims.size(), 3u);
    std::vector<int> idx(3, b.dims[0] / 2);
    Vec x = b.point(idx);
    CVec z(3);
    for (int k = 0; k < 3; ++k) z[k] = cplx(x[k], b.y[k]);
    EXPECT_NEAR(std::abs(b.values[b.index(idx)] - box_fd_at(c, f, z, h, 2)), 0.0, 1e-9);
}

TEST(Projector, BoxCommutesWithTheGroup) {
    Rng rng(53);
    for (int n : {3, 5}) {
        const ConeStructure c = ConeStructure::lorentz(n);
        TriangularElement t = random_triangular(c, rng, 0.5);
        std::vector<CVec> probes;
        for (int i = 0; i < 4; ++i) probes.push_back(tube_point(c, rng));
        // μ = (5/2, 5/2) keeps c_μ away from zero for both n.
        double dev = box_commutation_check(c, {2.5, 2.5}, t, BoxSpec{}, probes, tube_point(c, rng, 0.3));
        EXPECT_LT(dev, 1e-8);
    }
}

TEST(Projector, KernelHessianMatchesFiniteDifferences) {
    Rng rng(54);
    const ConeStructure c = ConeStructure::lorentz(3);
    const Exponent mu{2, 2};
    CVec w0 = tube_point(c, rng, 0.3), z = tube_point(c, rng);
    AmbientHessian H = kernel_hessian(c, mu, z, w0);
    auto f = [&](const CVec& v) { return complex_power(c, kernel_argument(v, w0), mu).value; };
    const double h = 1e-3;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            auto at = [&](int si, int sj) {
                CVec v = z;
                v[i] += si * h;
                v[j] += sj * h;
                return f(v);
            };
            cplx fd = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
            EXPECT_NEAR(std::abs(fd - H.h[i * c.n + j]), 0.0, 1e-5 * (1 + std::abs(fd)));
        }
}

TEST(Projector, MonteCarloReproducesTheKernel) {
    const ConeStructure c = ConeStructure::lorentz(3);
    const Domain dom = Domain::tube(c);
    KernelParams kp = normalize({{1.5, 1.5}, 1.0, false}, dom, QuadratureSpec{});
    MonteCarloProjector mc(c, kp, 7);
    const CVec w0 = ie(c);
    Rng rng(55);
    std::vector<CVec> probes;
    for (int i = 0; i < 3; ++i) {
        CVec z = w0;
        for (int k = 0; k < c.n; ++k) z[k] += cplx(rng.uniform(-0.3, 0.3), rng.uniform(-0.2, 0.2));
        probes.push_back(z);
    }
    std::vector<cplx> got = mc.apply_kernel(w0, probes, 200000);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        cplx want = bergman_kernel_tube(c, probes[i], w0, kp);
        EXPECT_LT(std::abs(got[i] - want) / std::abs(want), 0.05);
    }
    // Same batch, same points; the generic path agrees with the kernel path.
    std::vector<cplx> again = mc.apply_kernel(w0, probes, 200000);
    EXPECT_EQ(got, again);
    TubeFunction f = [&](const CVec& z) { return bergman_kernel_tube(c, z, w0, kp); };
    std::vector<cplx> generic = mc.apply(f, probes, 200000);
    for (std::size_t i = 0; i < probes.size(); ++i) EXPECT_NEAR(std::abs(generic[i] - got[i]), 0.0, 1e-9 * std::abs(got[i]));
    EXPECT_NE(mc.apply_kernel(w0, probes, 1000, 1), mc.apply_kernel(w0, probes, 1000, 2));
}

TEST(Projector, SchurTestFunctionOnLambda3) {
    const ConeStructure c = ConeStructure::lorentz(3);
    const Exponent nu{2, 2}, mu{2, 2}, alpha{0, 0};
    auto iv = schur_gamma_intervals(c, mu, alpha, nu, 2.0);
    ASSERT_LT(iv[0][0], iv[0][1]);
    ASSERT_LT(iv[1][0], iv[1][1]);
    Exponent gamma{0.5 * (iv[0][0] + iv[0][1]), 0.5 * (iv[1][0] + iv[1][1])};
    QuadratureSpec q;
    q.step = 0.6;
    q.tail_tol = 1e-5;
    q.tol = 1e-3;
    Rng rng(56);
    std::vector<Vec> probes;
    for (int i = 0; i < 4; ++i) probes.push_back(random_cone_point(c, rng));
    SchurReport r = schur_eigen_check(c, gamma, mu, alpha, nu, 2.0, probes, q, 0.02);
    EXPECT_TRUE(r.pass) << r.forward.max_deviation << " " << r.adjoint.max_deviation;
    // Just outside the open interval the integral diverges and is refused.
    Exponent edge{iv[0][1], gamma[1]};
    EXPECT_THROW(schur_eigen_check(c, edge, mu, alpha, nu, 2.0, probes, q, 0.02), DivergenceError);
}

TEST(Projector, SchurRejectsInfeasibleGammaOnLambda4) {
    const ConeStructure c = ConeStructure::lorentz(4);
    Rng rng(57);
    std::vector<Vec> probes{random_cone_point(c, rng)};
    EXPECT_THROW(schur_eigen_check(c, {-0.75, -0.75}, {2, 2}, {0, 0}, {2, 2}, 2.0, probes, QuadratureSpec{}, 0.02),
                 DivergenceError);
}

TEST(Projector, BoxProjectorIdentityHasConstantRatio) {
    const ConeStructure c = ConeStructure::lorentz(3);
    BoxSpec box;
    box.k = 1;
    box.h = 0.05;
    Bump bump;
    bump.center = base_point(c);
    Rng rng(58);
    std::vector<CVec> probes;
    for (int i = 0; i < 3; ++i) {
        CVec z = tube_point(c, rng);
        z[0] += cplx(0, 1.0);
        probes.push_back(z);
    }
    OperatorProbeReport r =
        box_projector_identity_probe(c, {1.5, 1.5}, bump, box, probes, 20000, 9, QuadratureSpec{});
    EXPECT_TRUE(r.pass) << r.verdict;
    ASSERT_EQ(r.ratios.size(), probes.size());
    for (double v : r.ratios) EXPECT_NEAR(v / r.ratios.front(), 1.0, 1e-3);
}

TEST(Projector, UGridOperatorMatrixMatchesApply) {
    QuadratureSpec q;
    q.nodes = 3;
    UGrid g = make_u_grid(q);
    ASSERT_FALSE(g.t.empty());
    for (double v : g.cell) EXPECT_GT(v, 0.0);
    const Exponent mu{3, 3}, alpha{1, 1};
    std::vector<double> M = rmu_alpha_matrix(g, mu, alpha);
    const std::size_t N = g.t.size();
    ASSERT_EQ(M.size(), N * N);
    Rng rng(59);
    std::vector<double> x(N);
    for (double& v : x) v = rng.uniform();
    std::vector<double> y = rmu_alpha_apply(g, x, mu, alpha);
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < N; ++j) s += M[i * N + j] * x[j];
        EXPECT_NEAR(y[i], s, 1e-10 * (1 + std::abs(s)));
    }
}
