#include "hcone/kernels.hpp"

#include <cmath>
#include <numbers>

#include "hcone/errors.hpp"
#include "hcone/integrals.hpp"

namespace hcone {

namespace {

std::array<cplx, 2> q_at(const CSym2& w) {
    cplx q1 = w.a11;
    return {q1, w.det() / q1};
}

CSym2 over_i(const ConeStructure& c, const CVec& z) {
    CVec w(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) w[k] = z[k] / cplx(0, 1);
    return to_sym(c, std::span<const cplx>(w));
}

}  // namespace

ComplexPowerValue complex_power(const ConeStructure& c, const CVec& z, const Exponent& alpha) {
    if (static_cast<int>(z.size()) != c.n) throw ValidationError("z has wrong length");
    Vec y(c.n), x(c.n);
    for (int k = 0; k < c.n; ++k) {
        x[k] = z[k].real();
        y[k] = z[k].imag();
    }
    if (!in_cone(c, y)) throw DomainError("Im z must lie in the open cone");
    auto qy = q_values(c, y);
    std::array<cplx, 2> L{std::log(qy[0]), std::log(qy[1])};
    std::array<cplx, 2> prev{qy[0], qy[1]};

    // w(t) = y − i t x, t ∈ [0, 1].
    auto at = [&](double t) {
        CVec zt(c.n);
        for (int k = 0; k < c.n; ++k) zt[k] = cplx(t * x[k], y[k]);
        return q_at(over_i(c, zt));
    };
    double t = 0.0, dt = 1.0 / 16;
    int guard = 0;
    while (t < 1.0) {
        double tn = std::min(1.0, t + dt);
        auto cur = at(tn);
        bool ok = true;
        std::array<cplx, 2> inc{};
        for (int j = 0; j < 2; ++j) {
            if (std::abs(cur[j]) < 1e-280) throw DomainError("continuation ran into a zero of Q_j");
            inc[j] = std::log(cur[j] / prev[j]);
            if (std::abs(inc[j].imag()) >= std::numbers::pi / 4) ok = false;
        }
        if (!ok) {
            dt *= 0.5;
            if (dt < 1e-12 || ++guard > 10000)
                throw DomainError("continuation step underflow near a zero of Q_j");
            continue;
        }
        for (int j = 0; j < 2; ++j) L[j] += inc[j];
        prev = cur;
        t = tn;
        dt = std::min(dt * 2.0, 1.0 / 16);
    }
    ComplexPowerValue v;
    v.log_q = L;
    v.value = std::exp(-alpha[0] * L[0] - alpha[1] * L[1]);
    return v;
}

std::array<cplx, 2> log_q(const CSym2& w) {
    cplx l1 = std::log(w.a11);
    return {l1, std::log(w.det()) - l1};
}

std::array<cplx, 2> dual_log_q(const CSym2& zeta) {
    cplx l2 = std::log(zeta.a22);
    return {std::log(zeta.det()) - l2, l2};
}

cplx dual_complex_power(const ConeStructure& c, const CVec& zeta, const Exponent& alpha) {
    auto L = dual_log_q(to_sym(c, std::span<const cplx>(zeta)));
    return std::exp(alpha[0] * L[0] + alpha[1] * L[1]);
}

CVec kernel_argument(const CVec& z, const CVec& w) {
    if (z.size() != w.size()) throw ValidationError("kernel points of different length");
    CVec a(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) a[k] = 0.5 * (z[k] - std::conj(w[k]));
    return a;
}

CSym2 kernel_sym(const CSym2& z, const CSym2& w) {
    const cplx mi(0, -0.5);
    CSym2 r;
    r.d = z.d;
    r.a11 = mi * (z.a11 - std::conj(w.a11));
    r.a22 = mi * (z.a22 - std::conj(w.a22));
    for (int k = 0; k < z.d; ++k) r.a12[k] = mi * (z.a12[k] - std::conj(w.a12[k]));
    return r;
}

void check_kernel_params(const Domain& dom, const Exponent& nu) {
    const auto fm = dom.cone.frame_m();
    for (int j = 0; j < 2; ++j) {
        double th = 0.5 * (fm[j] + dom.cone.b[j]);
        if (!(nu[j] > th))
            throw ValidationError("kernel needs nu_" + std::to_string(j + 1) + " > " +
                                  std::to_string(th));
    }
}

cplx bergman_kernel_tube(const ConeStructure& c, const CVec& z, const CVec& w, const KernelParams& p) {
    Vec yz(c.n), yw(c.n);
    for (int k = 0; k < c.n; ++k) {
        yz[k] = z.at(k).imag();
        yw[k] = w.at(k).imag();
    }
    if (!in_cone(c, yz) || !in_cone(c, yw)) throw DomainError("kernel points must lie in the tube");
    const Exponent a{p.nu[0] + c.tau[0], p.nu[1] + c.tau[1]};
    auto L = log_q(over_i(c, kernel_argument(z, w)));
    return p.d_nu * std::exp(-a[0] * L[0] - a[1] * L[1]);
}

cplx bergman_kernel_ps(const SiegelPoint& zu, const SiegelPoint& wv, const KernelParams& p) {
    const Domain dom = Domain::pyateckii_shapiro();
    if (!in_domain(dom, zu) || !in_domain(dom, wv)) throw DomainError("kernel points must lie in the domain");
    const ConeStructure& c = dom.cone;
    CVec arg = kernel_argument(zu.z, wv.z);
    // (z − w̄)/2i − F(u,v) = [ (z − w̄)/2 − i F(u,v) ] / i
    arg[2] -= cplx(0, 1) * zu.u * std::conj(wv.u);
    const Exponent a{p.nu[0] + c.tau[0] + 0.5 * c.b[0], p.nu[1] + c.tau[1] + 0.5 * c.b[1]};
    auto L = log_q(over_i(c, arg));
    return p.d_nu * std::exp(-a[0] * L[0] - a[1] * L[1]);
}

KernelParams normalize(const KernelParams& params, const Domain& dom, const QuadratureSpec& spec) {
    const ConeStructure& c = dom.cone;
    check_kernel_params(dom, params.nu);
    const Exponent& nu = params.nu;
    const double bh1 = dom.siegel ? 0.5 * c.b[0] : 0.0, bh2 = dom.siegel ? 0.5 * c.b[1] : 0.0;
    const Exponent a{nu[0] + c.tau[0] + bh1, nu[1] + c.tau[1] + bh2};
    const Exponent two_a{2 * a[0], 2 * a[1]};
    const Vec e = base_point(c);

    // x-integral of |Q^{−a}((ie − w̄)/2i)|²: substitute x = −2x' to land on
    // J_{2a}((e+y)/2) = c_{2a} Q^{−2a+τ}((e+y)/2), with c_{2a} = J_{2a}(e).
    const double c2a = j_alpha(c, e, two_a, spec);
    const double xfac = std::pow(2.0, c.n) * c2a;
    const Exponent pe{-two_a[0] + c.tau[0], -two_a[1] + c.tau[1]};
    const Exponent we{nu[0] - bh1 - c.tau[0], nu[1] - bh2 - c.tau[1]};
    const int d = c.off_dim();

    auto half_shift = [&](const Sym2& y, double r) {
        Sym2 s = y;
        s.a11 = 0.5 * (1.0 + y.a11);
        s.a22 = 0.5 * (1.0 + y.a22 + r);
        for (int k = 0; k < d; ++k) s.a12[k] = 0.5 * y.a12[k];
        return s;
    };
    ConeChart ch;
    auto run = [&](const QuadratureSpec& q) {
        auto f = [&](const Sym2& y, double q1, double q2) {
            double w = std::pow(q1, we[0]) * std::pow(q2, we[1]);
            if (!dom.siegel) {
                Sym2 s = half_shift(y, 0.0);
                return w * std::pow(s.a11, pe[0]) * std::pow(s.det() / s.a11, pe[1]);
            }
            // u ∈ C in polar form with r = |u|², du = π dr.
            double inner = march<double>(
                [&](double sr) {
                    double r = std::exp(sr);
                    Sym2 s = half_shift(y, r);
                    return r * std::pow(s.a11, pe[0]) * std::pow(s.det() / s.a11, pe[1]);
                },
                0.0, q);
            return w * std::numbers::pi * inner;
        };
        return lebesgue_factor(c) * integrate_cone<double>(c, ch, q, f);
    };
    const double iy = checked<double>(spec, run).value;
    KernelParams out = params;
    out.d_nu = 1.0 / (xfac * iy);
    out.normalized = true;
    return out;
}

double normalize_half_line(double nu, const QuadratureSpec& spec) {
    if (!(nu > 0)) throw ValidationError("half-line kernel needs nu > 0");
    const double a = nu + 1.0;
    // |((i − w̄)/2i)|^{−2a} = |(−x + i(1+y))/2|^{−2a}, weight y^{ν−1}
    auto run = [&](const QuadratureSpec& q) {
        return march<double>(
            [&](double s) {
                double y = std::exp(s);
                double inner = march<double>(
                    [&](double sig) {
                        double x = (1.0 + y) * std::sinh(sig);
                        double mod2 = 0.25 * (x * x + (1.0 + y) * (1.0 + y));
                        return (1.0 + y) * std::cosh(sig) * std::pow(mod2, -a);
                    },
                    0.0, q);
                return y * std::pow(y, nu - 1.0) * inner;
            },
            0.0, q);
    };
    return 1.0 / checked<double>(spec, run).value;
}

}  // namespace hcone
