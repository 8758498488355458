#pragma once

#include <array>
#include <complex>

#include "hcone/cone.hpp"
#include "hcone/quadrature.hpp"
#include "hcone/siegel.hpp"

namespace hcone {

struct ComplexPowerValue {
    cplx value;
    std::array<cplx, 2> log_q;  // tracked log Q_j(z/i)
};

// Q^{−α}(z/i) continued along the segment from i·Im z to z, anchored at the
// positive value on iΩ. Each step keeps the change of every log Q_j below π/4.
ComplexPowerValue complex_power(const ConeStructure& c, const CVec& z, const Exponent& alpha);

// Principal-log evaluation of log Q_j(w) for w = z/i in sym coordinates. On the
// tube Re Q1(w) > 0 and Δ2(w) stays off the negative axis, so this agrees with
// the tracked branch; it is the form used inside kernel sums.
std::array<cplx, 2> log_q(const CSym2& w);
// log Q*_j(ζ) for Re ζ ∈ Ω*.
std::array<cplx, 2> dual_log_q(const CSym2& zeta);
cplx dual_complex_power(const ConeStructure& c, const CVec& zeta, const Exponent& alpha);

// (z − conj w)/2, the tube point whose power gives the kernel.
CVec kernel_argument(const CVec& z, const CVec& w);

// Allocation-free pieces for kernel sums. Arguments are in sym coordinates.
// kernel_sym returns ((z − conj w)/2)/i, i.e. (Im z + Im w)/2 − i(Re z − Re w)/2.
CSym2 kernel_sym(const CSym2& z, const CSym2& w);
inline cplx power_at(const CSym2& w, const Exponent& a) {
    auto L = log_q(w);
    return std::exp(-a[0] * L[0] - a[1] * L[1]);
}

struct KernelParams {
    Exponent nu{};
    double d_nu = 1.0;
    bool normalized = false;
};

void check_kernel_params(const Domain& dom, const Exponent& nu);

// d_ν Q^{−ν−τ}((z − conj w)/2i).
cplx bergman_kernel_tube(const ConeStructure& c, const CVec& z, const CVec& w, const KernelParams& p);
// d_ν Q^{−ν−τ−b/2}((z − conj w)/2i − F(u,v)) on the Pyateckii-Shapiro domain.
cplx bergman_kernel_ps(const SiegelPoint& zu, const SiegelPoint& wv, const KernelParams& p);

// Fills d_ν from the reproducing identity at the base point:
// B(ζ0,ζ0) = ∫|B(ζ0,ζ)|² dV_ν(ζ) with ζ0 = (ie, 0).
KernelParams normalize(const KernelParams& params, const Domain& dom, const QuadratureSpec& spec);

// Same identity for the upper half-plane (rank one, τ = 1), done by direct
// two-dimensional quadrature. Sanity configuration for the normalisation path.
double normalize_half_line(double nu, const QuadratureSpec& spec);

}  // namespace hcone
