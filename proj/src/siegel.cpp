#include "hcone/siegel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hcone/errors.hpp"

namespace hcone {

Exponent Domain::density_exponent(const Exponent& nu) const {
    return {nu[0] - 0.5 * cone.b[0] - cone.tau[0], nu[1] - 0.5 * cone.b[1] - cone.tau[1]};
}

void MixedNormParams::validate() const {
    if (!(p >= 1.0)) throw ValidationError("mixed norm needs p >= 1");
    if (!(q >= 1.0) || std::isinf(q)) throw ValidationError("mixed norm needs 1 <= q < inf");
}

CVec ps_form(cplx u, cplx v) { return {0.0, 0.0, u * std::conj(v)}; }

Vec siegel_base(const SiegelPoint& p) {
    if (p.z.size() != 3) throw ValidationError("Siegel point needs z in C^3");
    return {p.z[0].imag(), p.z[1].imag(), p.z[2].imag() - std::norm(p.u)};
}

bool in_domain(const Domain& dom, const SiegelPoint& p) {
    if (!dom.siegel) throw ValidationError("Siegel point on a tube domain");
    return in_cone(dom.cone, siegel_base(p));
}

bool in_domain(const Domain& dom, const TubePoint& p) {
    if (static_cast<int>(p.x.size()) != dom.cone.n) throw ValidationError("x has wrong length");
    return in_cone(dom.cone, p.y);
}

double measure_density(const Domain& dom, const TubePoint& p, const Exponent& nu) {
    if (!in_domain(dom, p)) throw DomainError("point outside the tube");
    return q_power(dom.cone, p.y, dom.density_exponent(nu));
}

double measure_density(const Domain& dom, const SiegelPoint& p, const Exponent& nu) {
    if (!in_domain(dom, p)) throw DomainError("point outside the Siegel domain");
    return q_power(dom.cone, siegel_base(p), dom.density_exponent(nu));
}

ProductGrid make_product_grid(const Domain& dom, const QuadratureSpec& spec) {
    const ConeStructure& c = dom.cone;
    const int N = spec.nodes;
    if (N < 2) throw ValidationError("grid needs at least 2 nodes per axis");
    if (!(spec.eps_y > 0 && spec.r_y > spec.eps_y && spec.r_x > 0 && spec.r_u > 0))
        throw ValidationError("bad truncation parameters");
    ProductGrid g;

    const double hx = 2.0 * spec.r_x / N;
    std::vector<double> axis(N);
    for (int i = 0; i < N; ++i) axis[i] = -spec.r_x + (i + 0.5) * hx;
    std::vector<int> idx(c.n, 0);
    while (true) {
        Vec x(c.n);
        for (int k = 0; k < c.n; ++k) x[k] = axis[idx[k]];
        g.x_nodes.push_back(std::move(x));
        g.x_weights.push_back(std::pow(hx, c.n));
        int k = 0;
        while (k < c.n && ++idx[k] == N) idx[k++] = 0;
        if (k == c.n) break;
    }

    // Shell in the chart coordinates (q1, q2, w).
    const int d = c.off_dim();
    const double ls = std::log(spec.eps_y), lr = std::log(spec.r_y);
    const double hs = (lr - ls) / N;
    const double wmax = std::sqrt(spec.r_y);
    const double hw = 2.0 * wmax / N;
    std::vector<Vec> shell;
    std::vector<double> shell_w;
    std::vector<int> wi(d, 0);
    for (int i1 = 0; i1 < N; ++i1) {
        double q1 = std::exp(ls + (i1 + 0.5) * hs);
        for (int i2 = 0; i2 < N; ++i2) {
            double q2 = std::exp(ls + (i2 + 0.5) * hs);
            std::fill(wi.begin(), wi.end(), 0);
            while (true) {
                Sym2 s;
                s.d = d;
                s.a11 = q1;
                double wsq = 0;
                for (int k = 0; k < d; ++k) {
                    double w = -wmax + (wi[k] + 0.5) * hw;
                    s.a12[k] = std::sqrt(q1) * w;
                    wsq += w * w;
                }
                s.a22 = wsq + q2;
                shell.push_back(from_sym(c, s));
                shell_w.push_back(lebesgue_factor(c) * std::pow(q1, 0.5 * d) * q1 * q2 * hs * hs *
                                  std::pow(hw, d));
                int k = 0;
                while (k < d && ++wi[k] == N) wi[k++] = 0;
                if (k == d) break;
            }
        }
    }

    if (!dom.siegel) {
        g.y_nodes = std::move(shell);
        g.u_nodes.assign(g.y_nodes.size(), cplx{});
        g.outer_weights = std::move(shell_w);
        return g;
    }
    const double hr = spec.r_u / N;
    const double ht = 2.0 * std::numbers::pi / N;
    for (std::size_t s = 0; s < shell.size(); ++s) {
        for (int ir = 0; ir < N; ++ir) {
            double r = (ir + 0.5) * hr;
            for (int it = 0; it < N; ++it) {
                cplx u = std::polar(r, it * ht);
                Vec y = shell[s];
                y[2] += r * r;
                g.y_nodes.push_back(std::move(y));
                g.u_nodes.push_back(u);
                g.outer_weights.push_back(shell_w[s] * r * hr * ht);
            }
        }
    }
    return g;
}

double mixed_norm(const std::vector<std::vector<cplx>>& samples, const ProductGrid& grid,
                  const MixedNormParams& params, const Domain& dom) {
    params.validate();
    if (samples.empty() || grid.x_nodes.empty()) throw ValidationError("empty grid");
    if (samples.size() != grid.y_nodes.size()) throw ValidationError("sample table does not match grid");
    const Exponent ex = dom.density_exponent(params.nu);
    const bool sup = std::isinf(params.p);
    double outer = 0.0;
    for (std::size_t o = 0; o < samples.size(); ++o) {
        const auto& row = samples[o];
        if (row.size() != grid.x_nodes.size()) throw ValidationError("sample row does not match grid");
        double inner = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            double a = std::abs(row[i]);
            if (sup)
                inner = std::max(inner, a);
            else
                inner += grid.x_weights[i] * std::pow(a, params.p);
        }
        if (!sup) inner = std::pow(inner, 1.0 / params.p);
        if (inner == 0.0) continue;
        Vec base = grid.y_nodes[o];
        if (dom.siegel) base[2] -= std::norm(grid.u_nodes[o]);
        double dens = q_power(dom.cone, base, ex);
        outer += grid.outer_weights[o] * dens * std::pow(inner, params.q);
    }
    return std::pow(outer, 1.0 / params.q);
}

}  // namespace hcone
