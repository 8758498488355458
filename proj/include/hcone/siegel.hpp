#pragma once

#include <complex>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/quadrature.hpp"

namespace hcone {

using cplx = std::complex<double>;

// Either the tube V + iΩ over a cone, or the Pyateckii-Shapiro domain
// {(z,u) ∈ C³×C : Im z − F(u,u) ∈ Γ} over the spherical cone.
struct Domain {
    ConeStructure cone;
    bool siegel = false;

    static Domain tube(const ConeStructure& c) { return {c.tube(), false}; }
    static Domain pyateckii_shapiro() { return {ConeStructure::spherical(), true}; }

    std::array<int, 2> b() const { return cone.b; }
    // Exponent ν − b/2 − τ of the weight.
    Exponent density_exponent(const Exponent& nu) const;
};

struct TubePoint {
    Vec x;
    Vec y;
};

struct SiegelPoint {
    CVec z;  // length 3
    cplx u;
};

struct MixedNormParams {
    double p = 2.0;  // may be +inf
    double q = 2.0;
    Exponent nu{};
    void validate() const;
};

// F(u,v) = (0, 0, u·conj(v)).
CVec ps_form(cplx u, cplx v);
// Im z − F(u,u), the point of Γ the Siegel point lies over.
Vec siegel_base(const SiegelPoint& p);
bool in_domain(const Domain& dom, const SiegelPoint& p);
bool in_domain(const Domain& dom, const TubePoint& p);

double measure_density(const Domain& dom, const TubePoint& p, const Exponent& nu);
double measure_density(const Domain& dom, const SiegelPoint& p, const Exponent& nu);

// Product grid for the nested norm: inner nodes in x, outer nodes in (y, u).
struct ProductGrid {
    std::vector<Vec> x_nodes;
    std::vector<double> x_weights;
    std::vector<Vec> y_nodes;  // Im z for Siegel points (already shifted by F(u,u))
    std::vector<cplx> u_nodes;
    std::vector<double> outer_weights;  // Lebesgue weight of each (y, u) cell
};

// Uniform midpoint grid on [−r_x, r_x]^n, times the truncated shell
// q1, q2 ∈ [eps_y, r_y], |w_k| ≤ √r_y (log-midpoint in q), times a polar disc
// |u| ≤ r_u for the Siegel domain. `nodes` points per axis.
ProductGrid make_product_grid(const Domain& dom, const QuadratureSpec& spec);

// samples[outer][inner]: inner L^p over x, outer L^q over (y,u) against dV_ν.
double mixed_norm(const std::vector<std::vector<cplx>>& samples, const ProductGrid& grid,
                  const MixedNormParams& params, const Domain& dom);

}  // namespace hcone
