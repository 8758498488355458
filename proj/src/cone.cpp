#include "hcone/cone.hpp"

#include <cmath>

#include "hcone/errors.hpp"

namespace hcone {

namespace {

void check_dim(const ConeStructure& c, std::size_t len) {
    if (static_cast<int>(len) != c.n)
        throw ValidationError("vector length " + std::to_string(len) + " != n = " +
                              std::to_string(c.n));
}

Sym2 act_sym(const TriangularElement& t, const Sym2& y) {
    const double a = t.diag1, b = t.diag2;
    Sym2 r;
    r.d = y.d;
    double wy = 0, ww = 0;
    for (int k = 0; k < y.d; ++k) {
        wy += t.off[k] * y.a12[k];
        ww += t.off[k] * t.off[k];
    }
    r.a11 = a * a * y.a11;
    for (int k = 0; k < y.d; ++k) r.a12[k] = a * (y.a11 * t.off[k] + b * y.a12[k]);
    r.a22 = ww * y.a11 + 2 * b * wy + b * b * y.a22;
    return r;
}

Sym2 dual_act_sym(const TriangularElement& t, const Sym2& x) {
    const double a = t.diag1, b = t.diag2;
    Sym2 r;
    r.d = x.d;
    double wx = 0, ww = 0;
    for (int k = 0; k < x.d; ++k) {
        wx += t.off[k] * x.a12[k];
        ww += t.off[k] * t.off[k];
    }
    r.a11 = a * a * x.a11 + 2 * a * wx + ww * x.a22;
    for (int k = 0; k < x.d; ++k) r.a12[k] = b * (a * x.a12[k] + x.a22 * t.off[k]);
    r.a22 = b * b * x.a22;
    return r;
}

bool sym_inside(const Sym2& s, double eps) {
    double scale = std::abs(s.a11) + std::abs(s.a22);
    for (int k = 0; k < s.d; ++k) scale += std::abs(s.a12[k]);
    if (!(scale > 0)) return false;
    return s.a11 > eps * scale && s.det() > eps * scale * scale;
}

}  // namespace

ConeStructure ConeStructure::lorentz(int n) {
    if (n < 3) throw ValidationError("Lorentz cone needs n >= 3");
    ConeStructure c;
    c.kind = ConeKind::Lorentz;
    c.n = n;
    c.m = {n - 2, 0};
    c.nn = {0, n - 2};
    c.tau = {n / 2.0, n / 2.0};
    c.b = {0, 0};
    return c;
}

ConeStructure ConeStructure::spherical() {
    ConeStructure c;
    c.kind = ConeKind::Spherical3;
    c.n = 3;
    c.m = {1, 0};
    c.nn = {0, 1};
    c.tau = {1.5, 1.5};
    c.b = {0, 1};
    return c;
}

ConeStructure ConeStructure::tube() const {
    ConeStructure c = *this;
    c.b = {0, 0};
    return c;
}

std::string ConeStructure::name() const {
    if (kind == ConeKind::Spherical3) return "spherical3";
    return "lorentz" + std::to_string(n);
}

TriangularElement TriangularElement::identity(const ConeStructure& c) {
    TriangularElement t;
    t.off.assign(c.off_dim(), 0.0);
    return t;
}

Vec base_point(const ConeStructure& c) {
    Vec e(c.n, 0.0);
    if (c.kind == ConeKind::Lorentz) {
        e[0] = 1.0;
    } else {
        e[0] = 1.0;
        e[2] = 1.0;
    }
    return e;
}

Sym2 to_sym(const ConeStructure& c, std::span<const double> y) {
    check_dim(c, y.size());
    if (c.off_dim() > kMaxOff) throw ValidationError("n too large for cone kernels");
    Sym2 s;
    s.d = c.off_dim();
    if (c.kind == ConeKind::Lorentz) {
        s.a11 = y[0] + y[c.n - 1];
        s.a22 = y[0] - y[c.n - 1];
        for (int k = 0; k < s.d; ++k) s.a12[k] = y[1 + k];
    } else {
        s.a11 = y[0];
        s.a12[0] = y[1];
        s.a22 = y[2];
    }
    return s;
}

CSym2 to_sym(const ConeStructure& c, std::span<const std::complex<double>> y) {
    check_dim(c, y.size());
    if (c.off_dim() > kMaxOff) throw ValidationError("n too large for cone kernels");
    CSym2 s;
    s.d = c.off_dim();
    if (c.kind == ConeKind::Lorentz) {
        s.a11 = y[0] + y[c.n - 1];
        s.a22 = y[0] - y[c.n - 1];
        for (int k = 0; k < s.d; ++k) s.a12[k] = y[1 + k];
    } else {
        s.a11 = y[0];
        s.a12[0] = y[1];
        s.a22 = y[2];
    }
    return s;
}

Vec from_sym(const ConeStructure& c, const Sym2& s) {
    Vec y(c.n);
    if (c.kind == ConeKind::Lorentz) {
        y[0] = 0.5 * (s.a11 + s.a22);
        y[c.n - 1] = 0.5 * (s.a11 - s.a22);
        for (int k = 0; k < s.d; ++k) y[1 + k] = s.a12[k];
    } else {
        y[0] = s.a11;
        y[1] = s.a12[0];
        y[2] = s.a22;
    }
    return y;
}

double lebesgue_factor(const ConeStructure& c) {
    return c.kind == ConeKind::Lorentz ? 0.5 : 1.0;
}

double pairing_factor(const ConeStructure& c) {
    return c.kind == ConeKind::Lorentz ? 0.5 : 1.0;
}

double pairing(const ConeStructure& c, std::span<const double> x, std::span<const double> xi) {
    check_dim(c, x.size());
    check_dim(c, xi.size());
    if (c.kind == ConeKind::Lorentz) {
        double s = 0;
        for (int k = 0; k < c.n; ++k) s += x[k] * xi[k];
        return s;
    }
    return x[0] * xi[0] + 2 * x[1] * xi[1] + x[2] * xi[2];
}

std::array<double, 2> delta(const ConeStructure& c, std::span<const double> y) {
    Sym2 s = to_sym(c, y);
    return {s.a11, s.det()};
}

bool in_cone(const ConeStructure& c, std::span<const double> y) {
    return sym_inside(to_sym(c, y), c.boundary_eps);
}

std::array<double, 2> q_values(const ConeStructure& c, std::span<const double> y) {
    Sym2 s = to_sym(c, y);
    if (!sym_inside(s, c.boundary_eps)) throw DomainError("point not inside the open cone");
    return {s.a11, s.det() / s.a11};
}

double q_power(const ConeStructure& c, std::span<const double> y, const Exponent& alpha) {
    auto q = q_values(c, y);
    return std::pow(q[0], alpha[0]) * std::pow(q[1], alpha[1]);
}

TriangularElement triangular_decompose(const ConeStructure& c, std::span<const double> y) {
    Sym2 s = to_sym(c, y);
    if (!sym_inside(s, c.boundary_eps)) throw DomainError("decomposition needs an interior point");
    TriangularElement t;
    t.diag1 = std::sqrt(s.a11);
    t.off.resize(s.d);
    for (int k = 0; k < s.d; ++k) t.off[k] = s.a12[k] / t.diag1;
    t.diag2 = std::sqrt(s.det() / s.a11);
    return t;
}

Vec group_act(const ConeStructure& c, const TriangularElement& t, std::span<const double> y) {
    if (static_cast<int>(t.off.size()) != c.off_dim())
        throw ValidationError("triangular element has wrong off-diagonal size");
    if (!(t.diag1 > 0 && t.diag2 > 0)) throw ValidationError("triangular element needs positive diagonal");
    return from_sym(c, act_sym(t, to_sym(c, y)));
}

Vec group_act_e(const ConeStructure& c, const TriangularElement& t) {
    Vec e = base_point(c);
    return group_act(c, t, e);
}

TriangularElement compose(const TriangularElement& a, const TriangularElement& b) {
    TriangularElement r;
    r.diag1 = a.diag1 * b.diag1;
    r.diag2 = a.diag2 * b.diag2;
    r.off.resize(a.off.size());
    for (std::size_t k = 0; k < a.off.size(); ++k)
        r.off[k] = b.diag1 * a.off[k] + a.diag2 * b.off[k];
    return r;
}

TriangularElement inverse(const TriangularElement& t) {
    TriangularElement r;
    r.diag1 = 1.0 / t.diag1;
    r.diag2 = 1.0 / t.diag2;
    r.off.resize(t.off.size());
    for (std::size_t k = 0; k < t.off.size(); ++k) r.off[k] = -t.off[k] / (t.diag1 * t.diag2);
    return r;
}

std::vector<double> group_matrix(const ConeStructure& c, const TriangularElement& t) {
    const int n = c.n;
    std::vector<double> m(n * n);
    Vec unit(n, 0.0);
    for (int j = 0; j < n; ++j) {
        unit.assign(n, 0.0);
        unit[j] = 1.0;
        Vec col = from_sym(c, act_sym(t, to_sym(c, unit)));
        for (int i = 0; i < n; ++i) m[i * n + j] = col[i];
    }
    return m;
}

Vec dual_group_act(const ConeStructure& c, const TriangularElement& t, std::span<const double> xi) {
    if (static_cast<int>(t.off.size()) != c.off_dim())
        throw ValidationError("triangular element has wrong off-diagonal size");
    return from_sym(c, dual_act_sym(t, to_sym(c, xi)));
}

Vec dual_group_act_e(const ConeStructure& c, const TriangularElement& t) {
    Vec e = base_point(c);
    return dual_group_act(c, t, e);
}

bool in_dual_cone(const ConeStructure& c, std::span<const double> xi) {
    Sym2 s = to_sym(c, xi);
    double scale = std::abs(s.a11) + std::abs(s.a22);
    return s.a22 > c.boundary_eps * scale && s.det() > c.boundary_eps * scale * scale;
}

std::array<double, 2> dual_q_values(const ConeStructure& c, std::span<const double> xi) {
    if (!in_dual_cone(c, xi)) throw DomainError("point not inside the open dual cone");
    Sym2 s = to_sym(c, xi);
    return {s.det() / s.a22, s.a22};
}

double dual_power(const ConeStructure& c, std::span<const double> xi, const Exponent& alpha) {
    auto q = dual_q_values(c, xi);
    return std::pow(q[0], alpha[0]) * std::pow(q[1], alpha[1]);
}

std::array<double, 2> spectral_values(const ConeStructure& c, std::span<const double> y) {
    Sym2 s = to_sym(c, y);
    double mean = 0.5 * (s.a11 + s.a22);
    double half = 0.5 * (s.a11 - s.a22);
    double rad = std::sqrt(half * half + s.off_square());
    return {mean + rad, mean - rad};
}

double invariant_distance(const ConeStructure& c, std::span<const double> y1,
                          std::span<const double> y2) {
    if (!in_cone(c, y1) || !in_cone(c, y2)) throw DomainError("distance needs interior points");
    TriangularElement t = triangular_decompose(c, y1);
    Vec moved = group_act(c, inverse(t), y2);
    auto lam = spectral_values(c, moved);
    if (!(lam[1] > 0)) throw DomainError("transported point left the cone");
    double a = std::log(lam[0]), b = std::log(lam[1]);
    return std::sqrt(a * a + b * b);
}

}  // namespace hcone
