#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hcone/errors.hpp"
#include "hcone/integrals.hpp"
#include "hcone/kernels.hpp"
#include "hcone/rng.hpp"
#include "oracle.hpp"

using namespace hcone;

namespace {

CVec tube_point(const ConeStructure& c, Rng& rng, double xs = 1.0) {
    Vec y = random_cone_point(c, rng, 0.3);
    CVec z(c.n);
    for (int k = 0; k < c.n; ++k) z[k] = cplx(rng.uniform(-xs, xs), y[k]);
    return z;
}

}  // namespace

TEST(Kernels, ComplexPowerIsRealOnTheImaginaryCone) {
    Rng rng(41);
    for (const ConeStructure& c : {ConeStructure::lorentz(3), ConeStructure::lorentz(5)}) {
        for (int i = 0; i < 10; ++i) {
            Vec y = random_cone_point(c, rng);
            CVec z(c.n);
            for (int k = 0; k < c.n; ++k) z[k] = cplx(0, y[k]);
            Exponent a{rng.uniform(-2, 3), rng.uniform(-2, 3)};
            cplx v = complex_power(c, z, a).value;
            double want = q_power(c, y, {-a[0], -a[1]});
            EXPECT_NEAR(v.real() / want, 1.0, 1e-12);
            EXPECT_NEAR(v.imag() / want, 0.0, 1e-12);
        }
    }
}

TEST(Kernels, TrackedBranchAgreesWithPrincipalLog) {
    Rng rng(42);
    const ConeStructure c = ConeStructure::lorentz(4);
    for (int i = 0; i < 20; ++i) {
        CVec z = tube_point(c, rng, 3.0);
        CVec w(c.n);
        for (int k = 0; k < c.n; ++k) w[k] = z[k] / cplx(0, 1);
        Exponent a{1.7, 2.3};
        cplx tracked = complex_power(c, z, a).value;
        cplx principal = power_at(to_sym(c, w), a);
        EXPECT_NEAR(std::abs(tracked - principal) / std::abs(tracked), 0.0, 1e-10);
    }
}

TEST(Kernels, ComplexPowerIsHolomorphic) {
    Rng rng(43);
    const ConeStructure c = ConeStructure::lorentz(3);
    const Exponent a{2.5, 1.5};
    const double h = 1e-5;
    for (int i = 0; i < 5; ++i) {
        CVec z = tube_point(c, rng);
        for (int k = 0; k < c.n; ++k) {
            CVec zp = z, zm = z, wp = z, wm = z;
            zp[k] += h;
            zm[k] -= h;
            wp[k] += cplx(0, h);
            wm[k] -= cplx(0, h);
            cplx dx = (complex_power(c, zp, a).value - complex_power(c, zm, a).value) / (2 * h);
            cplx dy = (complex_power(c, wp, a).value - complex_power(c, wm, a).value) / (2 * h);
            // ∂f/∂y = i ∂f/∂x for holomorphic f.
            EXPECT_NEAR(std::abs(dy - cplx(0, 1) * dx), 0.0, 1e-6 * (1 + std::abs(dx)));
        }
    }
}

TEST(Kernels, BergmanKernelIsHermitian) {
    Rng rng(44);
    const ConeStructure c = ConeStructure::lorentz(3);
    KernelParams p{{1.5, 1.5}, 1.0, false};
    for (int i = 0; i < 10; ++i) {
        CVec z = tube_point(c, rng), w = tube_point(c, rng);
        cplx a = bergman_kernel_tube(c, z, w, p), b = bergman_kernel_tube(c, w, z, p);
        EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-12 * std::abs(a));
        cplx d = bergman_kernel_tube(c, z, z, p);
        EXPECT_GT(d.real(), 0.0);
        EXPECT_NEAR(d.imag(), 0.0, 1e-12 * d.real());
    }
}

TEST(Kernels, SiegelKernelIsHermitian) {
    Rng rng(45);
    KernelParams p{{2, 2}, 1.0, false};
    auto point = [&] {
        const ConeStructure c = ConeStructure::spherical();
        SiegelPoint s{CVec(3), cplx(0.5 * rng.normal(), 0.5 * rng.normal())};
        Vec y = random_cone_point(c, rng, 0.3);
        y[2] += std::norm(s.u);
        for (int k = 0; k < 3; ++k) s.z[k] = cplx(rng.uniform(-1, 1), y[k]);
        return s;
    };
    for (int i = 0; i < 10; ++i) {
        SiegelPoint a = point(), b = point();
        cplx ab = bergman_kernel_ps(a, b, p), ba = bergman_kernel_ps(b, a, p);
        EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-12 * std::abs(ab));
        EXPECT_GT(bergman_kernel_ps(a, a, p).real(), 0.0);
    }
}

TEST(Kernels, HalfLineNormalisationHasClosedForm) {
    QuadratureSpec q;
    for (double nu : {0.5, 1.0, 2.5}) {
        // ∫ ((x² + A²)/4)^{−a} dx = 4^a A^{1−2a} √π Γ(a − 1/2)/Γ(a), then a Beta integral in y.
        const double a = nu + 1;
        const double pi = std::numbers::pi;
        double beta = std::tgamma(nu) * std::tgamma(nu + 1) / std::tgamma(2 * nu + 1);
        double integral = std::pow(4.0, a) * std::sqrt(pi) * std::tgamma(a - 0.5) / std::tgamma(a) * beta;
        EXPECT_NEAR(normalize_half_line(nu, q) * integral, 1.0, 1e-8) << nu;
    }
    EXPECT_THROW(normalize_half_line(0.0, q), ValidationError);
}

TEST(Kernels, TubeNormalisationMatchesOracle) {
    // Λ3, ν = (3/2, 3/2): after rescaling x by e + y the y-integral is elementary,
    // leaving d_ν⁻¹ = (8·512π/105)·∫_{R³}|Δ(e − ix)|^{−6} dx.
    const Domain dom = Domain::tube(ConeStructure::lorentz(3));
    QuadratureSpec q;
    KernelParams kp = normalize({{1.5, 1.5}, 1.0, false}, dom, q);
    EXPECT_TRUE(kp.normalized);
    const double c6 = oracle::lorentz3_x_integral(6.0);
    const double want = 105.0 / (8.0 * 512.0 * std::numbers::pi * c6);
    EXPECT_NEAR(kp.d_nu / want, 1.0, 1e-6);
}

TEST(Kernels, RejectsInadmissibleWeights) {
    const Domain dom = Domain::tube(ConeStructure::lorentz(3));
    EXPECT_THROW(check_kernel_params(dom, {1.5, 0.0}), ValidationError);
    EXPECT_NO_THROW(check_kernel_params(dom, {1.5, 1.5}));
}
