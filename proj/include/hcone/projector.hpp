#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/integrals.hpp"
#include "hcone/kernels.hpp"
#include "hcone/quadrature.hpp"
#include "hcone/siegel.hpp"

namespace hcone {

struct BoxSpec {
    Exponent rho{1.0, 1.0};
    int k = 1;
    double h = 1e-2;
    int fd_order = 2;
    void validate() const;
};

struct OperatorProbeReport {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    std::string family;
    std::vector<double> ratios;
    std::string verdict;
    bool pass = false;
};

using TubeFunction = std::function<cplx(const CVec&)>;

// The Box operator in ambient coordinates, □ = Σ C_ij ∂_i∂_j, with symbol
// +(Q*)^{(1,1)}(ξ) on e^{i(x|ξ)}.
std::vector<double> box_coefficients(const ConeStructure& c);

// (μ + ρ, c_μ) with □Q^{−μ}(z/i) = c_μ Q^{−μ−ρ}(z/i), evaluated at z = ie.
std::pair<Exponent, double> box_apply_exact(const ConeStructure& c, const Exponent& mu,
                                            const BoxSpec& box);

// Finite-difference □ of a function of x at z (Im z fixed).
cplx box_fd_at(const ConeStructure& c, const TubeFunction& f, const CVec& z, double h, int order);
// Richardson extrapolation over h, h/2, h/4, h/8 of the second-order stencil.
cplx box_fd_richardson(const ConeStructure& c, const TubeFunction& f, const CVec& z, double h);

// Complex samples on a uniform x-grid (Im z fixed), row-major with the first
// axis slowest.
struct GridFunction {
    std::vector<int> dims;
    double h = 0.1;
    Vec origin;
    Vec y;
    std::vector<cplx> values;

    std::size_t index(const std::vector<int>& i) const;
    Vec point(const std::vector<int>& i) const;
};
GridFunction sample_grid(const ConeStructure& c, const TubeFunction& f, const Vec& origin,
                         const Vec& y, double h, int points_per_axis);
// Output covers the interior where the stencil fits (dims shrink by the stencil radius).
GridFunction box_apply_fd(const ConeStructure& c, const GridFunction& g, const BoxSpec& box);

// Exact Hessian of z ↦ Q^{−μ}((z − conj w0)/2i) in the real part x, ambient
// coordinates, row-major n x n. `value` is the function itself.
struct AmbientHessian {
    cplx value;
    std::vector<cplx> h;
};
AmbientHessian kernel_hessian(const ConeStructure& c, const Exponent& mu, const CVec& z, const CVec& w0);
cplx box_of_kernel(const ConeStructure& c, const Exponent& mu, const CVec& z, const CVec& w0);

// Max relative gap between □(f∘π(h)) and Q^ρ(h·e)(□f)∘π(h) for the kernel-type
// function f = Q^{−μ}((z − conj w0)/2i), both sides from exact Hessians.
double box_commutation_check(const ConeStructure& c, const Exponent& mu, const TriangularElement& t,
                             const BoxSpec& box, const std::vector<CVec>& probes, const CVec& w0);

// Monte-Carlo weighted Bergman projector on T_{Λ_n}. Samples are drawn from a
// proposal shaped like |B_ν(·, ie)|² dV_ν and regenerated from the seed on every
// call, so repeated calls on the same batch use the same points.
class MonteCarloProjector {
public:
    MonteCarloProjector(const ConeStructure& c, KernelParams params, std::uint64_t seed);

    struct Sample {
        CSym2 w;  // sym coordinates of the sample point
        CVec ambient;
        Vec y;
        double weight;  // dV_ν / proposal density
    };
    // Calls visit(sample) for `count` samples of the given batch.
    void for_each_sample(std::uint64_t batch, std::uint64_t count,
                         const std::function<void(const Sample&)>& visit) const;

    // (P_ν f)(z) at the probes from `count` samples of one batch.
    std::vector<cplx> apply(const TubeFunction& f, const std::vector<CVec>& probes,
                            std::uint64_t count, std::uint64_t batch = 0) const;
    // Same for f = B_{ν}(·, w0) without the std::function indirection.
    std::vector<cplx> apply_kernel(const CVec& w0, const std::vector<CVec>& probes,
                                   std::uint64_t count, std::uint64_t batch = 0) const;

    const KernelParams& params() const { return params_; }

private:
    ConeStructure c_;
    KernelParams params_;
    std::uint64_t seed_;
};

// Smooth bump supported in |x_i| < half_width, |y − center| < radius.
struct Bump {
    Vec center;
    double radius = 0.3;
    double half_width = 0.5;
    double amplitude = 1.0;
    cplx operator()(const CVec& w) const;
};

// Compares □^k(P_ν f) with P_{ν+kρ}(M_{−k} f), M_{−k} f = Q^{−kρ}(Im w)·f, at the
// probes. Both sides use the same uniform samples of the support of f; the left
// side takes □^k by Richardson finite differences of the sampled sum.
OperatorProbeReport box_projector_identity_probe(const ConeStructure& c, const Exponent& nu,
                                                 const Bump& f, const BoxSpec& box,
                                                 const std::vector<CVec>& probes,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 const QuadratureSpec& spec);

// ‖f‖^q against ‖□^k f‖^q in L^{p,q}_ν and L^{p,q}_{ν+kqρ} for f = B_{ν+(1,1)}(·, w0),
// one ratio per base point w0.
OperatorProbeReport hardy_probe(const ConeStructure& c, const Exponent& nu, double p, double q,
                                const BoxSpec& box, const std::vector<CVec>& base_points,
                                const QuadratureSpec& spec);

// Discretised U = {(t,u) : t ∈ Γ + F(u,u)} for the Pyateckii-Shapiro domain:
// t = t0 + F(u,u) with t0 on a truncated cone shell and u on a polar grid.
struct UGrid {
    std::vector<Vec> t;
    std::vector<cplx> u;
    std::vector<Vec> base;  // t − F(u,u)
    std::vector<double> cell;  // Lebesgue volume dt dv(u) of each node
};
UGrid make_u_grid(const QuadratureSpec& spec);

// R_{μ,α} g at every grid node.
std::vector<double> rmu_alpha_apply(const UGrid& grid, const std::vector<double>& g,
                                    const Exponent& mu, const Exponent& alpha);
// Dense matrix M with (R g)_i = Σ_j M_ij g_j, row-major, and the dV_ν weights of the nodes.
std::vector<double> rmu_alpha_matrix(const UGrid& grid, const Exponent& mu, const Exponent& alpha);
std::vector<double> u_grid_weights(const UGrid& grid, const Exponent& nu);
// Warnings for parameters outside the boundedness conditions (not enforced).
std::vector<std::string> rmu_alpha_warnings(const Exponent& mu, const Exponent& alpha,
                                            const Exponent& nu, double q);

// Schur eigenfunction check for the tube kernel
// N(y;t) = Q^α(y) Q^{−μ−α}(y+t) Q^{μ−ν}(t) against dV_ν with φ = Q^γ.
// "(q)" integrates over y with φ(y)^q, "(q')" over t with φ(t)^{q'}.
// Refuses (DivergenceError) when γ is outside the open feasibility intervals.
struct SchurReport {
    IdentityReport forward;  // (q)
    IdentityReport adjoint;  // (q')
    bool pass = false;
};
// Open γ-intervals (lo, hi) per index, in the frame of Q1, Q2; empty if lo >= hi.
std::array<std::array<double, 2>, 2> schur_gamma_intervals(const ConeStructure& c, const Exponent& mu,
                                                           const Exponent& alpha, const Exponent& nu,
                                                           double q);
SchurReport schur_eigen_check(const ConeStructure& c, const Exponent& gamma, const Exponent& mu,
                              const Exponent& alpha, const Exponent& nu, double q,
                              const std::vector<Vec>& probes, const QuadratureSpec& spec, double tol);

}  // namespace hcone
