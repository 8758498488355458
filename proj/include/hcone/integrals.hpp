#pragma once

#include <string>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/quadrature.hpp"
#include "hcone/siegel.hpp"

namespace hcone {

struct IdentityReport {
    std::string name;
    std::vector<std::vector<double>> samples;
    std::vector<double> ratios;
    double max_deviation = 0.0;
    double fitted_constant = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Fills fitted_constant (mean ratio), max_deviation (max |r/mean − 1|) and pass.
void finish_report(IdentityReport& r);

// Integrals are computed in the ambient measure dy. Threshold checks can be
// switched off so that the quadrature itself has to detect divergence.
struct IntegralOptions {
    bool check_thresholds = true;
};

// ∫_Ω e^{−(ξ|y)} Q^{ν−τ}(y) dy.
Checked<double> laplace_integral(const ConeStructure& c, const Exponent& nu, const Vec& xi,
                                 const QuadratureSpec& spec, IntegralOptions opt = {});
// Same with complex ζ, Re ζ ∈ Ω*.
Checked<cplx> laplace_integral(const ConeStructure& c, const Exponent& nu, const CVec& zeta,
                               const QuadratureSpec& spec, IntegralOptions opt = {});
double gamma_omega(const ConeStructure& c, const Exponent& nu, const QuadratureSpec& spec,
                   IntegralOptions opt = {});
IdentityReport verify_laplace_identity(const ConeStructure& c, const Exponent& nu,
                                       const std::vector<Vec>& xis, const std::vector<CVec>& zetas,
                                       const QuadratureSpec& spec, double tol);

// ∫_Ω Q^μ(y+v) Q^{λ−τ}(v) dv.
double j_mu_lambda(const ConeStructure& c, const Vec& y, const Exponent& mu, const Exponent& lambda,
                   const QuadratureSpec& spec, IntegralOptions opt = {});
IdentityReport verify_j_mu_lambda(const ConeStructure& c, const std::vector<Vec>& ys,
                                  const Exponent& mu, const Exponent& lambda,
                                  const QuadratureSpec& spec, double tol);

// ∫_V |Q^{−α}((x+iy)/i)| dx.
double j_alpha(const ConeStructure& c, const Vec& y, const Exponent& alpha,
               const QuadratureSpec& spec, IntegralOptions opt = {});
IdentityReport verify_j_alpha(const ConeStructure& c, const std::vector<Vec>& ys,
                              const Exponent& alpha, const QuadratureSpec& spec, double tol);

// ∫_C Q^{−λ}(y + t + F(s,s) − 2 Re F(u,s)) dv(s) on the Pyateckii-Shapiro domain.
double i_lambda(const Vec& y, cplx u, const Vec& t, const Exponent& lambda,
                const QuadratureSpec& spec, IntegralOptions opt = {});
struct ILambdaSample {
    Vec y;
    cplx u;
    Vec t;
};
IdentityReport verify_i_lambda(const std::vector<ILambdaSample>& samples, const Exponent& lambda,
                               const QuadratureSpec& spec, double tol);

// Random interior points and group elements for the verifiers.
class Rng;
TriangularElement random_triangular(const ConeStructure& c, Rng& rng, double spread = 0.5);
Vec random_cone_point(const ConeStructure& c, Rng& rng, double spread = 0.5);

}  // namespace hcone
