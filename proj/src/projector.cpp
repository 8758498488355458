#include "hcone/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hcone/errors.hpp"
#include "hcone/rng.hpp"

namespace hcone {

namespace {

constexpr double kPi = std::numbers::pi;

Exponent add(const Exponent& a, const Exponent& b) { return {a[0] + b[0], a[1] + b[1]}; }
Exponent scale(const Exponent& a, double s) { return {a[0] * s, a[1] * s}; }

CSym2 sym_of(const ConeStructure& c, const CVec& z) { return to_sym(c, std::span<const cplx>(z)); }

CSym2 combine(const Sym2& x, const Sym2& y) {
    CSym2 r;
    r.d = x.d;
    r.a11 = cplx(x.a11, y.a11);
    r.a22 = cplx(x.a22, y.a22);
    for (int k = 0; k < x.d; ++k) r.a12[k] = cplx(x.a12[k], y.a12[k]);
    return r;
}

// S[a*n + j]: sym variable a (11, 12_1..12_d, 22) of the ambient unit vector e_j.
std::vector<double> sym_matrix(const ConeStructure& c) {
    const int n = c.n, d = c.off_dim();
    std::vector<double> s(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        Vec u(n, 0.0);
        u[j] = 1.0;
        Sym2 y = to_sym(c, u);
        s[0 * n + j] = y.a11;
        for (int k = 0; k < d; ++k) s[(1 + k) * n + j] = y.a12[k];
        s[(d + 1) * n + j] = y.a22;
    }
    return s;
}

// F = Q^{−μ}(W) and its Hessian F(g_a g_b + g_ab) in the sym variables of W,
// with g = (μ2 − μ1) log W11 − μ2 log Δ(W).
std::vector<cplx> power_hessian_sym(const CSym2& w, const Exponent& mu, cplx& value) {
    const int d = w.d, m = d + 2;
    const cplx D = w.det();
    value = power_at(w, mu);
    std::vector<cplx> dg(m), dD(m);
    dD[0] = w.a22;
    for (int k = 0; k < d; ++k) dD[1 + k] = -2.0 * w.a12[k];
    dD[d + 1] = w.a11;
    for (int a = 0; a < m; ++a) dg[a] = -mu[1] * dD[a] / D;
    dg[0] += (mu[1] - mu[0]) / w.a11;
    std::vector<cplx> h(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            cplx ddD = 0;
            if ((a == 0 && b == d + 1) || (a == d + 1 && b == 0)) ddD = 1.0;
            if (a == b && a >= 1 && a <= d) ddD = -2.0;
            cplx gab = -mu[1] * (ddD / D - dD[a] * dD[b] / (D * D));
            if (a == 0 && b == 0) gab -= (mu[1] - mu[0]) / (w.a11 * w.a11);
            h[a * m + b] = value * (dg[a] * dg[b] + gab);
        }
    }
    return h;
}

// Ambient x-Hessian of Q^{−μ}(W(x)) where dW/dx_sym = χ.
AmbientHessian ambient_hessian(const ConeStructure& c, const CSym2& w, const Exponent& mu, cplx chi) {
    const int n = c.n;
    AmbientHessian r;
    std::vector<cplx> hs = power_hessian_sym(w, mu, r.value);
    const std::vector<double> s = sym_matrix(c);
    const cplx chi2 = chi * chi;
    r.h.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) acc += s[a * n + i] * hs[a * n + b] * s[b * n + j];
            r.h[i * n + j] = chi2 * acc;
        }
    return r;
}

cplx contract(const std::vector<double>& coef, const std::vector<cplx>& h) {
    cplx s = 0;
    for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * h[k];
    return s;
}

void check_box_exponent(const ConeStructure& c, const Exponent& mu) {
    if (mu[0] == 0.0 && mu[1] == 0.0) return;  // constant function, □1 = 0
    const auto fm = c.frame_m();
    for (int j = 0; j < 2; ++j)
        if (!(mu[j] > 0.5 * fm[j]))
            throw ValidationError("box needs mu_" + std::to_string(j + 1) + " > " +
                                  std::to_string(0.5 * fm[j]));
}

CVec shifted(const CVec& z, int i, double di, int j, double dj) {
    CVec w = z;
    w[i] += di;
    w[j] += dj;
    return w;
}

double bump_profile(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

}  // namespace

void BoxSpec::validate() const {
    if (rho[0] != 1.0 || rho[1] != 1.0) throw ValidationError("only rho = (1,1) is built in");
    if (k < 0) throw ValidationError("box order k must be non-negative");
    if (!(h > 0)) throw ValidationError("fd step must be positive");
    if (fd_order != 2 && fd_order != 4) throw ValidationError("fd_order must be 2 or 4");
}

std::vector<double> box_coefficients(const ConeStructure& c) {
    const int n = c.n;
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    if (c.kind == ConeKind::Lorentz) {
        m[0] = -1.0;
        for (int i = 1; i < n; ++i) m[i * n + i] = 1.0;
    } else {
        m[0 * n + 2] = m[2 * n + 0] = -0.5;
        m[1 * n + 1] = 0.25;
    }
    return m;
}

AmbientHessian kernel_hessian(const ConeStructure& c, const Exponent& mu, const CVec& z, const CVec& w0) {
    if (static_cast<int>(z.size()) != c.n || static_cast<int>(w0.size()) != c.n)
        throw ValidationError("points have wrong length");
    return ambient_hessian(c, kernel_sym(sym_of(c, z), sym_of(c, w0)), mu, cplx(0, -0.5));
}

cplx box_of_kernel(const ConeStructure& c, const Exponent& mu, const CVec& z, const CVec& w0) {
    return contract(box_coefficients(c), kernel_hessian(c, mu, z, w0).h);
}

std::pair<Exponent, double> box_apply_exact(const ConeStructure& c, const Exponent& mu, const BoxSpec& box) {
    box.validate();
    check_box_exponent(c, mu);
    const std::vector<double> coef = box_coefficients(c);
    CSym2 e;  // sym coordinates of e are the identity for both cone kinds
    e.d = c.off_dim();
    e.a11 = e.a22 = 1.0;
    Exponent cur = mu;
    double constant = 1.0;
    for (int step = 0; step < box.k; ++step) {
        // W = z/i, so dW/dx = −i. Q^{−μ−ρ}(e) = 1.
        AmbientHessian h = ambient_hessian(c, e, cur, cplx(0, -1));
        constant *= contract(coef, h.h).real();
        cur = add(cur, box.rho);
    }
    return {cur, constant};
}

cplx box_fd_at(const ConeStructure& c, const TubeFunction& f, const CVec& z, double h, int order) {
    if (order != 2 && order != 4) throw ValidationError("fd_order must be 2 or 4");
    if (static_cast<int>(z.size()) != c.n) throw ValidationError("z has wrong length");
    const int n = c.n;
    const std::vector<double> coef = box_coefficients(c);
    const cplx f0 = f(z);
    cplx sum = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double cij = coef[i * n + j] * (i == j ? 1.0 : 2.0);
            if (cij == 0.0) continue;
            cplx dd;
            if (i == j) {
                if (order == 2) {
                    dd = (f(shifted(z, i, h, i, 0)) - 2.0 * f0 + f(shifted(z, i, -h, i, 0))) / (h * h);
                } else {
                    dd = (-f(shifted(z, i, 2 * h, i, 0)) + 16.0 * f(shifted(z, i, h, i, 0)) - 30.0 * f0 +
                          16.0 * f(shifted(z, i, -h, i, 0)) - f(shifted(z, i, -2 * h, i, 0))) /
                         (12 * h * h);
                }
            } else if (order == 2) {
                dd = (f(shifted(z, i, h, j, h)) - f(shifted(z, i, h, j, -h)) - f(shifted(z, i, -h, j, h)) +
                      f(shifted(z, i, -h, j, -h))) /
                     (4 * h * h);
            } else {
                static constexpr int off[4] = {-2, -1, 1, 2};
                static constexpr double w[4] = {1, -8, 8, -1};
                dd = 0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        dd += w[a] * w[b] * f(shifted(z, i, off[a] * h, j, off[b] * h));
                dd /= 144 * h * h;
            }
            sum += cij * dd;
        }
    }
    return sum;
}

cplx box_fd_richardson(const ConeStructure& c, const TubeFunction& f, const CVec& z, double h) {
    std::array<cplx, 4> t;
    for (int l = 0; l < 4; ++l) t[l] = box_fd_at(c, f, z, h / (1 << l), 2);
    // Error expansion in h², h⁴, h⁶.
    double factor = 4.0;
    for (int level = 1; level < 4; ++level) {
        for (int l = 3; l >= level; --l) t[l] = (factor * t[l] - t[l - 1]) / (factor - 1.0);
        factor *= 4.0;
    }
    return t[3];
}

std::size_t GridFunction::index(const std::vector<int>& i) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) idx = idx * dims[a] + i[a];
    return idx;
}

Vec GridFunction::point(const std::vector<int>& i) const {
    Vec x(dims.size());
    for (std::size_t a = 0; a < dims.size(); ++a) x[a] = origin[a] + h * i[a];
    return x;
}

GridFunction sample_grid(const ConeStructure& c, const TubeFunction& f, const Vec& origin, const Vec& y,
                         double h, int points_per_axis) {
    if (static_cast<int>(origin.size()) != c.n || static_cast<int>(y.size()) != c.n)
        throw ValidationError("grid origin / y have wrong length");
    if (points_per_axis < 1 || !(h > 0)) throw ValidationError("empty grid");
    GridFunction g;
    g.dims.assign(c.n, points_per_axis);
    g.h = h;
    g.origin = origin;
    g.y = y;
    std::size_t total = 1;
    for (int a = 0; a < c.n; ++a) total *= points_per_axis;
    g.values.resize(total);
    std::vector<int> i(c.n, 0);
    CVec z(c.n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int a = c.n - 1; a >= 0; --a) {
            i[a] = static_cast<int>(rest % points_per_axis);
            rest /= points_per_axis;
        }
        for (int a = 0; a < c.n; ++a) z[a] = cplx(origin[a] + h * i[a], y[a]);
        g.values[idx] = f(z);
    }
    return g;
}

GridFunction box_apply_fd(const ConeStructure& c, const GridFunction& g, const BoxSpec& box) {
    box.validate();
    const int n = c.n;
    if (static_cast<int>(g.dims.size()) != n) throw ValidationError("grid dimension does not match the cone");
    const int r = box.fd_order == 2 ? 1 : 2;
    GridFunction out;
    out.h = g.h;
    out.y = g.y;
    out.origin.resize(n);
    out.dims.resize(n);
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) {
        out.dims[a] = g.dims[a] - 2 * r;
        if (out.dims[a] < 1) throw ValidationError("grid too coarse for the fd stencil");
        out.origin[a] = g.origin[a] + r * g.h;
        total *= out.dims[a];
    }
    const std::vector<double> coef = box_coefficients(c);
    const double h = g.h;
    out.values.resize(total);
    std::vector<int> o(n), p(n);
    auto at = [&](int i, int di, int j, int dj) {
        p = o;
        for (int a = 0; a < n; ++a) p[a] += r;
        p[i] += di;
        p[j] += dj;
        return g.values[g.index(p)];
    };
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int a = n - 1; a >= 0; --a) {
            o[a] = static_cast<int>(rest % out.dims[a]);
            rest /= out.dims[a];
        }
        cplx sum = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double cij = coef[i * n + j] * (i == j ? 1.0 : 2.0);
                if (cij == 0.0) continue;
                cplx dd;
                if (i == j) {
                    if (r == 1)
                        dd = (at(i, 1, i, 0) - 2.0 * at(i, 0, i, 0) + at(i, -1, i, 0)) / (h * h);
                    else
                        dd = (-at(i, 2, i, 0) + 16.0 * at(i, 1, i, 0) - 30.0 * at(i, 0, i, 0) +
                              16.0 * at(i, -1, i, 0) - at(i, -2, i, 0)) /
                             (12 * h * h);
                } else if (r == 1) {
                    dd = (at(i, 1, j, 1) - at(i, 1, j, -1) - at(i, -1, j, 1) + at(i, -1, j, -1)) / (4 * h * h);
                } else {
                    static constexpr int off[4] = {-2, -1, 1, 2};
                    static constexpr double w[4] = {1, -8, 8, -1};
                    dd = 0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b) dd += w[a] * w[b] * at(i, off[a], j, off[b]);
                    dd /= 144 * h * h;
                }
                sum += cij * dd;
            }
        }
        out.values[idx] = sum;
    }
    return out;
}

double box_commutation_check(const ConeStructure& c, const Exponent& mu, const TriangularElement& t,
                             const BoxSpec& box, const std::vector<CVec>& probes, const CVec& w0) {
    box.validate();
    const int n = c.n;
    const std::vector<double> coef = box_coefficients(c);
    const std::vector<double> P = group_matrix(c, t);
    const double factor = q_power(c, group_act_e(c, t), box.rho);
    // P C Pᵀ: the coefficients of □ seen through x ↦ Px.
    std::vector<double> pcp(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += P[a * n + i] * coef[i * n + j] * P[b * n + j];
            pcp[a * n + b] = s;
        }
    double worst = 0.0;
    for (const CVec& z : probes) {
        CVec pz(n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < n; ++j) pz[a] += P[a * n + j] * z.at(j);
        AmbientHessian h = kernel_hessian(c, mu, pz, w0);
        cplx lhs = contract(pcp, h.h);
        cplx rhs = factor * contract(coef, h.h);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Monte-Carlo projector.

namespace {

struct Draw {
    CSym2 w;
    Sym2 x, y;
    double weight;
};

// Proposal on T_Ω in sym coordinates. Y: s_j = log Q_j(Y) logistic, the shear w
// Student-t (3 dof) with scale √((1+q1)(1+q2)); X = 2·π(t)X' with t·e = (e+Y)/2
// and X' standard multivariate Cauchy, which follows the x-profile of B(·, ie).
template <class Visit>
void draw_samples(const ConeStructure& c, const Exponent& nu, std::uint64_t seed, std::uint64_t batch,
                  std::uint64_t count, Visit&& visit) {
    Rng rng(seed, "mc-batch-" + std::to_string(batch));
    const int d = c.off_dim(), n = c.n;
    const double lf = lebesgue_factor(c);
    const Exponent wexp{nu[0] - c.tau[0], nu[1] - c.tau[1]};
    const double lct = std::lgamma(0.5 * (3 + d)) - std::lgamma(1.5) - 0.5 * d * std::log(3 * kPi);
    const double lcc = std::lgamma(0.5 * (n + 1)) - 0.5 * (n + 1) * std::log(kPi);
    Draw s;
    s.x.d = s.y.d = s.w.d = d;
    std::array<double, kMaxOff + 2> xp{};
    for (std::uint64_t i = 0; i < count; ++i) {
        double u1 = rng.uniform_open(), u2 = rng.uniform_open();
        double s1 = std::log(u1 / (1 - u1)), s2 = std::log(u2 / (1 - u2));
        double q1 = std::exp(s1), q2 = std::exp(s2);
        double sig = std::sqrt((1 + q1) * (1 + q2));
        double chi = 0;
        for (int k = 0; k < 3; ++k) {
            double g = rng.normal();
            chi += g * g;
        }
        double tscale = sig / std::sqrt(chi / 3.0);
        double r2 = 0, wsq = 0;
        double rq = std::sqrt(q1);
        s.y.a11 = q1;
        for (int k = 0; k < d; ++k) {
            double w = rng.normal() * tscale;
            r2 += w * w / (sig * sig);
            wsq += w * w;
            s.y.a12[k] = rq * w;
        }
        s.y.a22 = wsq + q2;
        double lp = std::log(u1 * (1 - u1)) + std::log(u2 * (1 - u2)) + lct - d * std::log(sig) -
                    0.5 * (3 + d) * std::log1p(r2 / 3.0) - (0.5 * d + 1) * s1 - s2;

        double g0 = std::abs(rng.normal());
        double xn = 0;
        for (int k = 0; k < n; ++k) {
            xp[k] = rng.normal() / g0;
            xn += xp[k] * xp[k];
        }
        // Yh = (e + Y)/2, t·e = Yh.
        double h11 = 0.5 * (1 + s.y.a11), h22 = 0.5 * (1 + s.y.a22);
        double a = std::sqrt(h11);
        double off_sq = 0;
        std::array<double, kMaxOff> off{};
        for (int k = 0; k < d; ++k) {
            off[k] = 0.5 * s.y.a12[k] / a;
            off_sq += off[k] * off[k];
        }
        double b = std::sqrt(h22 - off_sq);
        double wx = 0;
        for (int k = 0; k < d; ++k) wx += off[k] * xp[1 + k];
        s.x.a11 = 2 * a * a * xp[0];
        for (int k = 0; k < d; ++k) s.x.a12[k] = 2 * a * (xp[0] * off[k] + b * xp[1 + k]);
        s.x.a22 = 2 * (off_sq * xp[0] + 2 * b * wx + b * b * xp[d + 1]);
        lp += lcc - 0.5 * (n + 1) * std::log1p(xn) - n * std::log(2.0) - (2 + d) * (std::log(a) + std::log(b));

        s.weight = lf * lf * std::exp(wexp[0] * s1 + wexp[1] * s2 - lp);
        s.w = combine(s.x, s.y);
        visit(s);
    }
}

}  // namespace

MonteCarloProjector::MonteCarloProjector(const ConeStructure& c, KernelParams params, std::uint64_t seed)
    : c_(c.tube()), params_(params), seed_(seed) {
    if (c.kind != ConeKind::Lorentz) throw ValidationError("Monte-Carlo projector supports Lorentz tubes");
    check_kernel_params(Domain::tube(c_), params.nu);
}

void MonteCarloProjector::for_each_sample(std::uint64_t batch, std::uint64_t count,
                                          const std::function<void(const Sample&)>& visit) const {
    Sample out;
    draw_samples(c_, params_.nu, seed_, batch, count, [&](const Draw& s) {
        Vec x = from_sym(c_, s.x);
        out.y = from_sym(c_, s.y);
        out.ambient.resize(c_.n);
        for (int k = 0; k < c_.n; ++k) out.ambient[k] = cplx(x[k], out.y[k]);
        out.w = s.w;
        out.weight = s.weight;
        visit(out);
    });
}

std::vector<cplx> MonteCarloProjector::apply(const TubeFunction& f, const std::vector<CVec>& probes,
                                             std::uint64_t count, std::uint64_t batch) const {
    if (count == 0) throw ValidationError("Monte-Carlo needs at least one sample");
    const Exponent a{params_.nu[0] + c_.tau[0], params_.nu[1] + c_.tau[1]};
    std::vector<CSym2> zs;
    for (const CVec& z : probes) zs.push_back(sym_of(c_, z));
    std::vector<cplx> acc(probes.size(), 0.0);
    for_each_sample(batch, count, [&](const Sample& s) {
        cplx fv = f(s.ambient) * s.weight;
        if (fv == 0.0) return;
        for (std::size_t p = 0; p < zs.size(); ++p) acc[p] += power_at(kernel_sym(zs[p], s.w), a) * fv;
    });
    for (cplx& v : acc) v *= params_.d_nu / static_cast<double>(count);
    return acc;
}

std::vector<cplx> MonteCarloProjector::apply_kernel(const CVec& w0, const std::vector<CVec>& probes,
                                                    std::uint64_t count, std::uint64_t batch) const {
    if (count == 0) throw ValidationError("Monte-Carlo needs at least one sample");
    const Exponent a{params_.nu[0] + c_.tau[0], params_.nu[1] + c_.tau[1]};
    const CSym2 w0s = sym_of(c_, w0);
    std::vector<CSym2> zs;
    for (const CVec& z : probes) zs.push_back(sym_of(c_, z));
    std::vector<cplx> acc(probes.size(), 0.0);
    draw_samples(c_, params_.nu, seed_, batch, count, [&](const Draw& s) {
        cplx fv = power_at(kernel_sym(s.w, w0s), a) * s.weight;
        for (std::size_t p = 0; p < zs.size(); ++p) acc[p] += power_at(kernel_sym(zs[p], s.w), a) * fv;
    });
    const double dd = params_.d_nu * params_.d_nu / static_cast<double>(count);
    for (cplx& v : acc) v *= dd;
    return acc;
}

// ---------------------------------------------------------------------------
// Operator probes.

cplx Bump::operator()(const CVec& w) const {
    double rx = 0, ry = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        rx = std::max(rx, std::abs(w[k].real()) / half_width);
        double dy = w[k].imag() - center.at(k);
        ry += dy * dy;
    }
    ry = std::sqrt(ry) / radius;
    if (rx >= 1.0 || ry >= 1.0) return 0.0;
    double prod = bump_profile(ry);
    for (const cplx& v : w) prod *= bump_profile(std::abs(v.real()) / half_width);
    return amplitude * prod;
}

OperatorProbeReport box_projector_identity_probe(const ConeStructure& c, const Exponent& nu, const Bump& f,
                                                 const BoxSpec& box, const std::vector<CVec>& probes,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 const QuadratureSpec& spec) {
    box.validate();
    if (samples == 0) throw ValidationError("probe needs samples");
    const ConeStructure tc = c.tube();
    const Domain dom = Domain::tube(tc);
    const int n = tc.n;
    if (static_cast<int>(f.center.size()) != n) throw ValidationError("bump centre has wrong length");
    // Conservative: the y-ball must stay well inside the cone.
    if (!(spectral_values(tc, f.center)[1] > 2.0 * f.radius))
        throw ValidationError("bump support must lie inside the cone");
    const Exponent nuk = add(nu, scale(box.rho, box.k));
    KernelParams pn = normalize({nu, 1.0, false}, dom, spec);
    KernelParams pk = normalize({nuk, 1.0, false}, dom, spec);
    const Exponent a{nu[0] + tc.tau[0], nu[1] + tc.tau[1]};
    const Exponent ak{nuk[0] + tc.tau[0], nuk[1] + tc.tau[1]};
    const Exponent wexp{nu[0] - tc.tau[0], nu[1] - tc.tau[1]};

    // Uniform samples of the support box; only those with f ≠ 0 are kept.
    struct Kept {
        CSym2 w;
        cplx fw;  // f(w) · cell · Q^{ν−τ}(v)
        cplx mfw;  // (M_{−k} f)(w) · cell · Q^{ν+kρ−τ}(v)
    };
    std::vector<Kept> kept;
    Rng rng(seed, "box-projector-probe");
    double vol = 1.0;
    for (int k = 0; k < n; ++k) vol *= (2 * f.half_width) * (2 * f.radius);
    const double cell = vol / static_cast<double>(samples);
    CVec w(n);
    Vec yv(n);
    for (std::uint64_t i = 0; i < samples; ++i) {
        for (int k = 0; k < n; ++k) w[k].real(rng.uniform(-f.half_width, f.half_width));
        for (int k = 0; k < n; ++k) {
            yv[k] = f.center[k] + rng.uniform(-f.radius, f.radius);
            w[k].imag(yv[k]);
        }
        cplx fv = f(w);
        if (fv == 0.0) continue;
        auto q = q_values(tc, yv);
        double dens = std::pow(q[0], wexp[0]) * std::pow(q[1], wexp[1]);
        double mk = std::pow(q[0], -box.k * box.rho[0]) * std::pow(q[1], -box.k * box.rho[1]);
        double dk = std::pow(q[0], box.k * box.rho[0]) * std::pow(q[1], box.k * box.rho[1]);
        kept.push_back({sym_of(tc, w), fv * cell * dens, fv * mk * cell * dens * dk});
    }

    TubeFunction pf = [&](const CVec& z) {
        CSym2 zs = sym_of(tc, z);
        cplx s = 0;
        for (const Kept& kp : kept) s += power_at(kernel_sym(zs, kp.w), a) * kp.fw;
        return pn.d_nu * s;
    };
    std::function<cplx(const CVec&, int)> box_k = [&](const CVec& z, int k) -> cplx {
        if (k == 0) return pf(z);
        TubeFunction inner = [&](const CVec& zz) { return box_k(zz, k - 1); };
        return box_fd_richardson(tc, inner, z, box.h);
    };

    OperatorProbeReport rep;
    rep.name = "box-projector identity";
    rep.params = {{"nu1", nu[0]}, {"nu2", nu[1]}, {"k", static_cast<double>(box.k)},
                  {"samples", static_cast<double>(samples)}, {"support_samples", static_cast<double>(kept.size())}};
    rep.family = "smooth bump, |x_i| < " + std::to_string(f.half_width) + ", |y - c| < " +
                 std::to_string(f.radius);
    if (kept.empty()) {
        rep.verdict = "f vanishes on every sample: both sides are 0";
        rep.pass = true;
        return rep;
    }
    double max_imag = 0;
    for (const CVec& z : probes) {
        cplx lhs = box_k(z, box.k);
        CSym2 zs = sym_of(tc, z);
        cplx rhs = 0;
        for (const Kept& kp : kept) rhs += power_at(kernel_sym(zs, kp.w), ak) * kp.mfw;
        rhs *= pk.d_nu;
        cplx r = lhs / rhs;
        rep.ratios.push_back(r.real());
        max_imag = std::max(max_imag, std::abs(r.imag()) / std::abs(r));
    }
    double mean = 0, var = 0;
    for (double r : rep.ratios) mean += r;
    mean /= rep.ratios.size();
    for (double r : rep.ratios) var += (r - mean) * (r - mean);
    double cv = std::sqrt(var / rep.ratios.size()) / std::abs(mean);
    rep.params.push_back({"gamma", mean});
    rep.params.push_back({"coefficient_of_variation", cv});
    rep.params.push_back({"max_relative_imag", max_imag});
    rep.pass = cv < 0.15 && max_imag < 0.15 && std::isfinite(mean);
    rep.verdict = rep.pass ? "fitted gamma consistent across probes" : "fitted gamma varies across probes";
    return rep;
}

OperatorProbeReport hardy_probe(const ConeStructure& c, const Exponent& nu, double p, double q,
                                const BoxSpec& box, const std::vector<CVec>& base_points,
                                const QuadratureSpec& spec) {
    box.validate();
    const ConeStructure tc = c.tube();
    const Domain dom = Domain::tube(tc);
    for (int j = 0; j < 2; ++j) {
        double th = 0.5 * (tc.m[j] + tc.nn[j] + tc.b[j]);
        if (!(nu[j] > th))
            throw ValidationError("Hardy probe needs nu_" + std::to_string(j + 1) + " > " + std::to_string(th));
    }
    MixedNormParams lhs_par{p, q, nu};
    MixedNormParams rhs_par{p, q, add(nu, scale(box.rho, box.k * q))};
    lhs_par.validate();
    rhs_par.validate();

    const Exponent nup = add(nu, {1.0, 1.0});
    const Exponent a{nup[0] + tc.tau[0], nup[1] + tc.tau[1]};
    // □^k Q^{−a}((z − w̄)/2i) = 4^{−k} Π c_{a+jρ} Q^{−a−kρ}((z − w̄)/2i).
    auto [ak, ck] = box_apply_exact(tc, a, box);
    const double boxc = ck * std::pow(0.25, box.k);

    ProductGrid grid = make_product_grid(dom, spec);
    std::vector<Sym2> xs, ys;
    for (const Vec& x : grid.x_nodes) xs.push_back(to_sym(tc, x));
    for (const Vec& y : grid.y_nodes) ys.push_back(to_sym(tc, y));

    OperatorProbeReport rep;
    rep.name = "hardy";
    rep.params = {{"nu1", nu[0]}, {"nu2", nu[1]}, {"p", p}, {"q", q}, {"k", static_cast<double>(box.k)}};
    rep.family = "f = B_{nu+(1,1)}(., w0) over " + std::to_string(base_points.size()) + " base points";
    std::vector<std::vector<cplx>> fs(ys.size(), std::vector<cplx>(xs.size()));
    std::vector<std::vector<cplx>> gs = fs;
    for (const CVec& w0 : base_points) {
        const CSym2 w0s = sym_of(tc, w0);
        for (std::size_t o = 0; o < ys.size(); ++o)
            for (std::size_t i = 0; i < xs.size(); ++i) {
                auto L = log_q(kernel_sym(combine(xs[i], ys[o]), w0s));
                fs[o][i] = std::exp(-a[0] * L[0] - a[1] * L[1]);
                gs[o][i] = boxc * std::exp(-ak[0] * L[0] - ak[1] * L[1]);
            }
        double lhs = std::pow(mixed_norm(fs, grid, lhs_par, dom), q);
        double rhs = std::pow(mixed_norm(gs, grid, rhs_par, dom), q);
        rep.ratios.push_back(lhs / rhs);
    }
    double lo = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    double hi = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.params.push_back({"max_over_min", hi / lo});
    rep.pass = std::isfinite(hi) && lo > 0 && hi / lo < 10.0;
    rep.verdict = rep.pass ? "ratio bounded across the family" : "ratio spread exceeds 10 across the family";
    return rep;
}

// ---------------------------------------------------------------------------
// R_{μ,α} on the Pyateckii-Shapiro domain.

namespace {

double q_pow_sym(double a11, double a12, double a22, const Exponent& e) {
    double q2 = a22 - a12 * a12 / a11;
    return std::pow(a11, e[0]) * std::pow(q2, e[1]);
}

}  // namespace

UGrid make_u_grid(const QuadratureSpec& spec) {
    const int nt = spec.nodes;
    const int nr = std::max(1, spec.nodes / 2), nth = spec.nodes;
    if (nt < 1 || !(spec.eps_y > 0) || !(spec.r_y > spec.eps_y) || !(spec.r_u > 0))
        throw ValidationError("invalid U-grid bounds");
    const double lq0 = std::log(spec.eps_y), dlq = (std::log(spec.r_y) - lq0) / nt;
    const double wmax = std::sqrt(spec.r_y), dw = 2 * wmax / nt;
    const double dr = spec.r_u / nr, dth = 2 * kPi / nth;
    UGrid g;
    for (int i1 = 0; i1 < nt; ++i1)
        for (int i2 = 0; i2 < nt; ++i2)
            for (int iw = 0; iw < nt; ++iw) {
                double q1 = std::exp(lq0 + (i1 + 0.5) * dlq), q2 = std::exp(lq0 + (i2 + 0.5) * dlq);
                double w = -wmax + (iw + 0.5) * dw;
                // dY = q1^{1/2} dq1 dq2 dw, dq = q d(log q).
                double dt = std::sqrt(q1) * q1 * q2 * dlq * dlq * dw;
                Vec t0{q1, std::sqrt(q1) * w, w * w + q2};
                for (int ir = 0; ir < nr; ++ir)
                    for (int ith = 0; ith < nth; ++ith) {
                        double r = (ir + 0.5) * dr, th = (ith + 0.5) * dth;
                        cplx u = std::polar(r, th);
                        Vec t = t0;
                        t[2] += r * r;
                        g.t.push_back(t);
                        g.u.push_back(u);
                        g.base.push_back(t0);
                        g.cell.push_back(dt * r * dr * dth);
                    }
            }
    return g;
}

std::vector<double> u_grid_weights(const UGrid& grid, const Exponent& nu) {
    const Domain dom = Domain::pyateckii_shapiro();
    const Exponent e = dom.density_exponent(nu);
    std::vector<double> w(grid.t.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        w[j] = grid.cell[j] * q_pow_sym(grid.base[j][0], grid.base[j][1], grid.base[j][2], e);
    return w;
}

std::vector<double> rmu_alpha_matrix(const UGrid& grid, const Exponent& mu, const Exponent& alpha) {
    const ConeStructure c = ConeStructure::spherical();
    const std::size_t N = grid.t.size();
    const Exponent kexp{-mu[0] - alpha[0] - 0.5 * c.b[0], -mu[1] - alpha[1] - 0.5 * c.b[1]};
    const std::vector<double> wmu = u_grid_weights(grid, mu);
    std::vector<double> m(N * N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec& bi = grid.base[i];
        double left = q_pow_sym(bi[0], bi[1], bi[2], alpha);
        for (std::size_t j = 0; j < N; ++j) {
            double a11 = grid.t[i][0] + grid.t[j][0];
            double a12 = grid.t[i][1] + grid.t[j][1];
            double a22 = grid.t[i][2] + grid.t[j][2] - 2 * (grid.u[i] * std::conj(grid.u[j])).real();
            m[i * N + j] = left * q_pow_sym(a11, a12, a22, kexp) * wmu[j];
        }
    }
    return m;
}

std::vector<double> rmu_alpha_apply(const UGrid& grid, const std::vector<double>& g, const Exponent& mu,
                                    const Exponent& alpha) {
    const std::size_t N = grid.t.size();
    if (g.size() != N) throw ValidationError("g does not match the U-grid");
    const std::vector<double> m = rmu_alpha_matrix(grid, mu, alpha);
    std::vector<double> out(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < N; ++j) s += m[i * N + j] * g[j];
        out[i] = s;
    }
    return out;
}

std::vector<std::string> rmu_alpha_warnings(const Exponent& mu, const Exponent& alpha, const Exponent& nu,
                                            double q) {
    const ConeStructure c = ConeStructure::spherical();
    const auto m = c.frame_m(), nn = c.frame_nn();
    std::vector<std::string> out;
    for (int j = 0; j < 2; ++j) {
        const std::string idx = std::to_string(j + 1);
        if (!(alpha[j] * q + nu[j] > (q - 1) * nn[j] / 2.0 + m[j] / 2.0 + c.b[j] / 2.0))
            out.push_back("alpha_" + idx + " q + nu_" + idx + " is at or below its threshold");
        if (!(mu[j] * q - nu[j] > nn[j] / 2.0 + (q - 1) * (m[j] / 2.0 + c.b[j] / 2.0)))
            out.push_back("mu_" + idx + " q - nu_" + idx + " is at or below its threshold");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schur test on the tube.

std::array<std::array<double, 2>, 2> schur_gamma_intervals(const ConeStructure& c, const Exponent& mu,
                                                           const Exponent& alpha, const Exponent& nu,
                                                           double q) {
    if (!(q > 1)) throw ValidationError("Schur check needs q > 1");
    const double qp = q / (q - 1);
    const auto m = c.frame_m(), nn = c.frame_nn();
    std::array<std::array<double, 2>, 2> out{};
    for (int j = 0; j < 2; ++j) {
        double lo1 = (-nu[j] - alpha[j] + 0.5 * m[j]) / q, hi1 = (mu[j] - nu[j] - 0.5 * nn[j]) / q;
        double lo2 = (-mu[j] + 0.5 * m[j]) / qp, hi2 = (alpha[j] - 0.5 * nn[j]) / qp;
        out[j] = {std::max(lo1, lo2), std::min(hi1, hi2)};
    }
    return out;
}

SchurReport schur_eigen_check(const ConeStructure& c, const Exponent& gamma, const Exponent& mu,
                              const Exponent& alpha, const Exponent& nu, double q,
                              const std::vector<Vec>& probes, const QuadratureSpec& spec, double tol) {
    const ConeStructure tc = c.tube();
    auto iv = schur_gamma_intervals(tc, mu, alpha, nu, q);
    for (int j = 0; j < 2; ++j)
        if (!(gamma[j] > iv[j][0] && gamma[j] < iv[j][1]))
            throw DivergenceError("gamma_" + std::to_string(j + 1) + " outside the open interval (" +
                                  std::to_string(iv[j][0]) + ", " + std::to_string(iv[j][1]) +
                                  "): the Schur integrals diverge");
    const double qp = q / (q - 1);
    const Exponent gq = scale(gamma, q), gqp = scale(gamma, qp);
    const Exponent neg{-mu[0] - alpha[0], -mu[1] - alpha[1]};
    const Exponent lam_fwd = add(add(alpha, gq), nu);
    const Exponent lam_adj = add(mu, gqp);
    const Exponent mu_nu{mu[0] - nu[0], mu[1] - nu[1]};

    SchurReport rep;
    rep.forward.name = "schur (q)";
    rep.adjoint.name = "schur (q')";
    for (const Vec& t : probes) {
        double kf = q_power(tc, t, mu_nu) * j_mu_lambda(tc, t, neg, lam_fwd, spec);
        rep.forward.samples.push_back(t);
        rep.forward.ratios.push_back(kf / q_power(tc, t, gq));
        double ka = q_power(tc, t, alpha) * j_mu_lambda(tc, t, neg, lam_adj, spec);
        rep.adjoint.samples.push_back(t);
        rep.adjoint.ratios.push_back(ka / q_power(tc, t, gqp));
    }
    rep.forward.tolerance = rep.adjoint.tolerance = tol;
    finish_report(rep.forward);
    finish_report(rep.adjoint);
    rep.pass = rep.forward.pass && rep.adjoint.pass;
    return rep;
}

}  // namespace hcone
