#include "hcone/integrals.hpp"

#include <cmath>
#include <numbers>

#include "hcone/errors.hpp"
#include "hcone/kernels.hpp"
#include "hcone/rng.hpp"

namespace hcone {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DivergenceError("integral diverges: needs " + what);
}

// Grid placement uses only the overall size of ξ, not its orientation, so the
// quadrature at different ξ is not a transported copy of the one at e.
ConeChart chart_for_weight(const ConeStructure& c, const Sym2& xi) {
    const double kappa = pairing_factor(c);
    const double size = kappa * 0.5 * (xi.a11 + xi.a22);
    ConeChart ch;
    ch.s1_center = std::log(1.0 / size);
    ch.s2_center = std::log(1.0 / size);
    ch.w_scale = 1.0 / std::sqrt(size);
    return ch;
}

template <class T>
Checked<T> laplace_impl(const ConeStructure& c, const Exponent& nu, const Sym2T<T>& z,
                        const Sym2& re, const QuadratureSpec& spec, IntegralOptions opt) {
    const auto fm = c.frame_m();
    if (opt.check_thresholds) {
        require(nu[0] > 0.5 * fm[0], "nu_1 > " + fmt(0.5 * fm[0]));
        require(nu[1] > 0.5 * fm[1], "nu_2 > " + fmt(0.5 * fm[1]));
    }
    const double a1 = nu[0] - c.tau[0], a2 = nu[1] - c.tau[1];
    const double kappa = pairing_factor(c);
    const double L = lebesgue_factor(c);
    const ConeChart ch = chart_for_weight(c, re);
    const int d = c.off_dim();
    auto f = [&](const Sym2& y, double q1, double q2) -> T {
        T pair = z.a11 * y.a11 + z.a22 * y.a22;
        for (int k = 0; k < d; ++k) pair += 2.0 * z.a12[k] * y.a12[k];
        return std::exp(-kappa * pair) * (std::pow(q1, a1) * std::pow(q2, a2));
    };
    auto run = [&](const QuadratureSpec& q) { return L * integrate_cone<T>(c, ch, q, f); };
    return checked<T>(spec, run);
}

}  // namespace

void finish_report(IdentityReport& r) {
    if (r.ratios.empty()) {
        r.pass = false;
        return;
    }
    double mean = 0;
    for (double v : r.ratios) mean += v;
    mean /= static_cast<double>(r.ratios.size());
    double dev = 0;
    for (double v : r.ratios) dev = std::max(dev, std::abs(v / mean - 1.0));
    r.fitted_constant = mean;
    r.max_deviation = std::max(r.max_deviation, dev);
    r.pass = r.max_deviation <= r.tolerance;
}

Checked<double> laplace_integral(const ConeStructure& c, const Exponent& nu, const Vec& xi,
                                 const QuadratureSpec& spec, IntegralOptions opt) {
    if (!in_dual_cone(c, xi)) throw DomainError("xi must lie in the open dual cone");
    Sym2 s = to_sym(c, xi);
    return laplace_impl<double>(c, nu, s, s, spec, opt);
}

Checked<cplx> laplace_integral(const ConeStructure& c, const Exponent& nu, const CVec& zeta,
                               const QuadratureSpec& spec, IntegralOptions opt) {
    Vec re(zeta.size());
    for (std::size_t k = 0; k < zeta.size(); ++k) re[k] = zeta[k].real();
    if (!in_dual_cone(c, re)) throw DomainError("Re zeta must lie in the open dual cone");
    return laplace_impl<cplx>(c, nu, to_sym(c, std::span<const cplx>(zeta)), to_sym(c, re), spec,
                              opt);
}

double gamma_omega(const ConeStructure& c, const Exponent& nu, const QuadratureSpec& spec,
                   IntegralOptions opt) {
    return laplace_integral(c, nu, base_point(c), spec, opt).value;
}

IdentityReport verify_laplace_identity(const ConeStructure& c, const Exponent& nu,
                                       const std::vector<Vec>& xis, const std::vector<CVec>& zetas,
                                       const QuadratureSpec& spec, double tol) {
    IdentityReport r;
    r.name = "laplace";
    r.tolerance = tol;
    for (const Vec& xi : xis) {
        double v = laplace_integral(c, nu, xi, spec).value;
        r.samples.push_back(xi);
        r.ratios.push_back(v * dual_power(c, xi, nu));
    }
    // Complex samples: the ratio must be real and equal to the same constant.
    std::vector<cplx> cr;
    for (const CVec& z : zetas) {
        cplx v = laplace_integral(c, nu, z, spec).value;
        Vec flat;
        for (const cplx& e : z) {
            flat.push_back(e.real());
            flat.push_back(e.imag());
        }
        r.samples.push_back(flat);
        cr.push_back(v * dual_complex_power(c, z, nu));
        r.ratios.push_back(cr.back().real());
    }
    finish_report(r);
    for (const cplx& v : cr)
        r.max_deviation = std::max(r.max_deviation, std::abs(v / r.fitted_constant - 1.0));
    r.pass = r.max_deviation <= r.tolerance;
    return r;
}

double j_mu_lambda(const ConeStructure& c, const Vec& y, const Exponent& mu, const Exponent& lambda,
                   const QuadratureSpec& spec, IntegralOptions opt) {
    const auto fm = c.frame_m();
    const auto fn = c.frame_nn();
    if (opt.check_thresholds) {
        for (int j = 0; j < 2; ++j) {
            require(lambda[j] > 0.5 * fm[j],
                    "lambda_" + std::to_string(j + 1) + " > " + fmt(0.5 * fm[j]));
            require(mu[j] + lambda[j] < -0.5 * fn[j],
                    "mu_" + std::to_string(j + 1) + " + lambda_" + std::to_string(j + 1) + " < " +
                        fmt(-0.5 * fn[j]));
        }
    }
    const Sym2 ys = to_sym(c, y);
    if (!in_cone(c, y)) throw DomainError("y must be interior");
    const int d = c.off_dim();
    const double a1 = lambda[0] - c.tau[0], a2 = lambda[1] - c.tau[1];
    ConeChart ch;
    const double q2y = ys.det() / ys.a11;
    ch.s1_center = std::log(ys.a11);
    ch.s2_center = std::log(q2y);
    ch.w_scale = std::sqrt(q2y);
    auto f = [&](const Sym2& v, double q1, double q2) {
        Sym2 s = ys;
        s.a11 += v.a11;
        s.a22 += v.a22;
        for (int k = 0; k < d; ++k) s.a12[k] += v.a12[k];
        double p1 = s.a11, p2 = s.det() / s.a11;
        return std::pow(p1, mu[0]) * std::pow(p2, mu[1]) * std::pow(q1, a1) * std::pow(q2, a2);
    };
    const double L = lebesgue_factor(c);
    return checked<double>(spec, [&](const QuadratureSpec& q) {
               return L * integrate_cone<double>(c, ch, q, f);
           }).value;
}

IdentityReport verify_j_mu_lambda(const ConeStructure& c, const std::vector<Vec>& ys,
                                  const Exponent& mu, const Exponent& lambda,
                                  const QuadratureSpec& spec, double tol) {
    IdentityReport r;
    r.name = "j_mu_lambda";
    r.tolerance = tol;
    const Exponent s{mu[0] + lambda[0], mu[1] + lambda[1]};
    for (const Vec& y : ys) {
        r.samples.push_back(y);
        r.ratios.push_back(j_mu_lambda(c, y, mu, lambda, spec) / q_power(c, y, s));
    }
    finish_report(r);
    return r;
}

namespace {

// ∫_{R^n} g(X) dX over sym coordinates, written through a Lorentz-type variable
// u = (u1, r·ω) with X11 = u1 + u_n, X12 = (u_2..u_{n−1}), X22 = u1 − u_n, so that
// the spectral values of X are u1 ± r. Along the null lines u1 = ±r the integrand
// varies on a unit scale however large r is, so the u1-line is split at ±r and
// each piece uses a map that clusters nodes at its ends.
template <class G>
double integrate_spectral(int d, const QuadratureSpec& q, double scale, G&& g) {
    if (d > 2) throw ValidationError("spectral quadrature supports n <= 4");
    constexpr int n_phi = 32;
    constexpr int n_psi = 24;
    std::vector<Vec> omegas;
    std::vector<double> ow;
    const double two_pi = 2.0 * std::numbers::pi;
    if (d == 1) {
        for (int k = 0; k < n_phi; ++k) {
            double ph = (k + q.offset) * two_pi / n_phi;
            omegas.push_back({std::cos(ph), std::sin(ph)});
            ow.push_back(two_pi / n_phi);
        }
    } else {
        // Gauss-Legendre in cos ψ times a uniform azimuth.
        std::vector<double> xg(n_psi), wg(n_psi);
        for (int i = 0; i < n_psi; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n_psi + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = x;
                for (int k = 2; k <= n_psi; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n_psi * (x * p1 - p0) / (x * x - 1);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    wg[i] = 2.0 / ((1 - x * x) * dp * dp);
                    break;
                }
            }
            xg[i] = x;
        }
        for (int i = 0; i < n_psi; ++i) {
            double st = std::sqrt(1 - xg[i] * xg[i]);
            for (int k = 0; k < n_phi; ++k) {
                double ph = (k + q.offset) * two_pi / n_phi;
                omegas.push_back({xg[i], st * std::cos(ph), st * std::sin(ph)});
                ow.push_back(wg[i] * two_pi / n_phi);
            }
        }
    }
    const int n = d + 2;
    Sym2 X;
    X.d = d;
    double total = 0.0;
    for (std::size_t a = 0; a < omegas.size(); ++a) {
        const Vec& om = omegas[a];
        total += ow[a] * march<double>(
                             [&](double rho) {
                                 const double r = scale * std::exp(rho);
                                 auto at = [&](double u1) {
                                     X.a11 = u1 + r * om[d];
                                     X.a22 = u1 - r * om[d];
                                     for (int k = 0; k < d; ++k) X.a12[k] = r * om[k];
                                     return g(X);
                                 };
                                 auto outer_piece = [&](double sgn) {
                                     return march<double>(
                                         [&](double t) {
                                             double e = scale * std::exp(t);
                                             return e * at(sgn * (r + e));
                                         },
                                         0.0, q);
                                 };
                                 double mid = march<double>(
                                     [&](double t) {
                                         double th = std::tanh(t);
                                         return r * (1 - th * th) * at(r * th);
                                     },
                                     0.0, q);
                                 return std::pow(r, d + 1) * (outer_piece(1.0) + outer_piece(-1.0) + mid);
                             },
                             0.0, q);
    }
    (void)n;
    // dX = 2 du for the sym coordinates built from u.
    return 2.0 * total;
}

}  // namespace

double j_alpha(const ConeStructure& c, const Vec& y, const Exponent& alpha,
               const QuadratureSpec& spec, IntegralOptions opt) {
    const auto fm = c.frame_m();
    const auto fn = c.frame_nn();
    if (opt.check_thresholds) {
        for (int j = 0; j < 2; ++j)
            require(alpha[j] > 1.0 + fn[j] + 0.5 * fm[j],
                    "alpha_" + std::to_string(j + 1) + " > " + fmt(1.0 + fn[j] + 0.5 * fm[j]));
    }
    if (!in_cone(c, y)) throw DomainError("y must be interior");
    const Sym2 ys = to_sym(c, y);
    const int d = c.off_dim();
    const double e1 = alpha[1] - alpha[0], e2 = -alpha[1];
    auto g = [&](const Sym2& xs) {
        CSym2 w;
        w.d = d;
        w.a11 = cplx(ys.a11, -xs.a11);
        w.a22 = cplx(ys.a22, -xs.a22);
        for (int k = 0; k < d; ++k) w.a12[k] = cplx(ys.a12[k], -xs.a12[k]);
        // |Q1|^{−α1}|Q2|^{−α2} = |W11|^{α2−α1} |det W|^{−α2}
        return std::pow(std::abs(w.a11), e1) * std::pow(std::abs(w.det()), e2);
    };
    const double scale = 0.5 * (ys.a11 + ys.a22);
    const double L = lebesgue_factor(c);
    return checked<double>(spec, [&](const QuadratureSpec& q) {
               return L * integrate_spectral(d, q, scale, g);
           }).value;
}

IdentityReport verify_j_alpha(const ConeStructure& c, const std::vector<Vec>& ys,
                              const Exponent& alpha, const QuadratureSpec& spec, double tol) {
    IdentityReport r;
    r.name = "j_alpha";
    r.tolerance = tol;
    const Exponent s{-alpha[0] + c.tau[0], -alpha[1] + c.tau[1]};
    for (const Vec& y : ys) {
        r.samples.push_back(y);
        r.ratios.push_back(j_alpha(c, y, alpha, spec) / q_power(c, y, s));
    }
    finish_report(r);
    return r;
}

double i_lambda(const Vec& y, cplx u, const Vec& t, const Exponent& lambda,
                const QuadratureSpec& spec, IntegralOptions opt) {
    const ConeStructure c = ConeStructure::spherical();
    const auto fn = c.frame_nn();
    if (opt.check_thresholds) {
        for (int j = 0; j < 2; ++j)
            require(lambda[j] - c.b[j] > 0.5 * fn[j],
                    "lambda_" + std::to_string(j + 1) + " > " + fmt(c.b[j] + 0.5 * fn[j]));
    }
    Vec yb = y;
    yb[2] -= std::norm(u);
    if (!in_cone(c, yb)) throw DomainError("y − F(u,u) must lie in the cone");
    if (!in_cone(c, t)) throw DomainError("t must lie in the cone");
    const double s11 = y[0] + t[0], s12 = y[1] + t[1];
    const double q2base = y[2] + t[2] - s12 * s12 / s11;
    std::array<double, 8> centers{u.real(), u.imag()}, scales{};
    scales[0] = scales[1] = std::sqrt(q2base - std::norm(u));
    auto f = [&](const std::array<double, 8>& s) {
        const double extra = s[0] * s[0] + s[1] * s[1] - 2.0 * (u.real() * s[0] + u.imag() * s[1]);
        return std::pow(s11, -lambda[0]) * std::pow(q2base + extra, -lambda[1]);
    };
    return checked<double>(spec, [&](const QuadratureSpec& q) {
               return integrate_space<double>(2, centers, scales, q, f);
           }).value;
}

IdentityReport verify_i_lambda(const std::vector<ILambdaSample>& samples, const Exponent& lambda,
                               const QuadratureSpec& spec, double tol) {
    const ConeStructure c = ConeStructure::spherical();
    IdentityReport r;
    r.name = "i_lambda";
    r.tolerance = tol;
    const Exponent s{-lambda[0] + c.b[0], -lambda[1] + c.b[1]};
    for (const auto& smp : samples) {
        Vec base = smp.y;
        base[2] += smp.t[2] - std::norm(smp.u);
        base[0] += smp.t[0];
        base[1] += smp.t[1];
        r.samples.push_back({smp.y[0], smp.y[1], smp.y[2], smp.u.real(), smp.u.imag(), smp.t[0],
                             smp.t[1], smp.t[2]});
        r.ratios.push_back(i_lambda(smp.y, smp.u, smp.t, lambda, spec) / q_power(c, base, s));
    }
    finish_report(r);
    return r;
}

TriangularElement random_triangular(const ConeStructure& c, Rng& rng, double spread) {
    TriangularElement t;
    t.diag1 = std::exp(spread * rng.normal());
    t.diag2 = std::exp(spread * rng.normal());
    t.off.resize(c.off_dim());
    for (double& w : t.off) w = spread * rng.normal();
    return t;
}

Vec random_cone_point(const ConeStructure& c, Rng& rng, double spread) {
    return group_act_e(c, random_triangular(c, rng, spread));
}

}  // namespace hcone
